#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>

namespace slidecard {

// Runs fn(part, begin, end) over contiguous chunks of [0, n), at most
// `workers` of them. With one worker the call happens inline. Chunk
// boundaries depend only on (n, workers) so any writer-side determinism is
// preserved; `part` indexes the chunk.
void parallel_chunks(size_t n, uint32_t workers,
                     const std::function<void(size_t, size_t, size_t)>& fn);

}  // namespace slidecard
