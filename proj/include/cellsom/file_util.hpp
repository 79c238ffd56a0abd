#pragma once

#include <filesystem>
#include <string>

namespace cellsom {

/// Writes `content` to a sibling temp file and renames it over `path`, so a
/// reader never observes a partial file. Throws Error when not writable.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

std::string read_file(const std::filesystem::path& path);

}  // namespace cellsom
