#pragma once

#include <string>

namespace lvef {

// Whole file as bytes; errc::io_error when it cannot be opened or read.
std::string read_text_file(const std::string& path);

// Writes through a sibling temp file and renames it into place, so readers
// never observe a half-written file.
void write_text_atomic(const std::string& path, const std::string& content);

} // namespace lvef
