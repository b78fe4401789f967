#include "slidecard/parallel.hpp"

#include <algorithm>
#include <exception>
#include <thread>
#include <vector>

namespace slidecard {

void parallel_chunks(size_t n, uint32_t workers,
                     const std::function<void(size_t, size_t, size_t)>& fn) {
  if (n == 0) return;
  if (workers <= 1 || n == 1) {
    fn(0, 0, n);
    return;
  }
  const size_t parts = std::min<size_t>(workers, n);
  const size_t chunk = (n + parts - 1) / parts;

  std::vector<std::thread> threads;
  std::vector<std::exception_ptr> errors(parts);
  threads.reserve(parts);
  for (size_t p = 0; p < parts; ++p) {
    const size_t begin = p * chunk;
    const size_t end = std::min(n, begin + chunk);
    threads.emplace_back([&, p, begin, end] {
      try {
        if (begin < end) fn(p, begin, end);
      } catch (...) {
        errors[p] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace slidecard
