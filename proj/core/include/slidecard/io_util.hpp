#pragma once

#include <functional>
#include <iosfwd>
#include <string>

namespace slidecard {

// Writes through a temporary file and renames on success, so a failed run
// never leaves a partial output behind.
void write_file_atomic(const std::string& path,
                       const std::function<void(std::ostream&)>& fill);

std::string read_file(const std::string& path);  // throws ParseError if unreadable

}  // namespace slidecard
