#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace flagtune {

/// Whole-file read. Throws ParseError when the file cannot be opened.
std::string read_text_file(const std::filesystem::path& path);

/// Writes via a sibling temporary file and rename, so readers never see a torn file.
void write_text_file(const std::filesystem::path& path, std::string_view content);

/// Splits on `delim`, keeping empty fields.
std::vector<std::string> split(std::string_view text, char delim);

/// Shortest text that parses back to the same double.
std::string format_double(double value);

}  // namespace flagtune
