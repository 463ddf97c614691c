#pragma once

#include <string>

namespace commscape::io {

/// Reads a whole file into memory. Files whose first two bytes are the gzip
/// magic number are inflated transparently. Throws std::runtime_error when the
/// file cannot be opened or decoded.
std::string read_file(const std::string& path);

/// Writes `contents` to `path`, replacing any existing file.
void write_file(const std::string& path, const std::string& contents);

}  // namespace commscape::io
