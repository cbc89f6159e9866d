#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace peerpanel {

/// Writes via a sibling temp file and rename, so readers never see a
/// partially written file. Creates parent directories.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

/// Throws IoError when the file cannot be read.
std::string read_file(const std::filesystem::path& path);

/// Lowercase hex SHA-256 of `data`.
std::string sha256_hex(std::string_view data);

}  // namespace peerpanel
