#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace rwam::app {

/// Creates `dir` and its parents; io error when that fails or the
/// directory is not writable.
void ensure_directory(const std::filesystem::path& dir);

/// Writes to a temporary sibling and renames it over `path`, so readers
/// never see a partial file under the final name.
void write_atomic(const std::filesystem::path& path, std::string_view content);

std::string read_file(const std::filesystem::path& path);

}  // namespace rwam::app
