#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace cotagnet {

// Whole-file read. Throws DataError if the file cannot be opened.
[[nodiscard]] std::string read_file(const std::filesystem::path& path);

// Writes to a sibling temp file, then renames over `path`. Parent
// directories are created as needed.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

// Expands directories (non-recursively) into the regular files whose name
// ends with one of `suffixes`; plain files are kept as given. Result is
// sorted and de-duplicated. Throws DataError for a path that does not exist.
[[nodiscard]] std::vector<std::filesystem::path> expand_inputs(
    const std::vector<std::filesystem::path>& paths, const std::vector<std::string>& suffixes);

}  // namespace cotagnet
