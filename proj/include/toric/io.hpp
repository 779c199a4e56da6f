#pragma once

#include <string>

namespace toric {

/// Writes to path.tmp and renames over `path`. Throws Error.
void write_file_atomic(const std::string& path, const std::string& content);
/// Throws Error.
std::string read_file(const std::string& path);

}  // namespace toric
