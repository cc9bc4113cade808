#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace gridwm {

std::string read_text_file(const std::string& path);
std::vector<std::string> read_lines(const std::string& path);

// Writes via a temp file in the same directory followed by a rename, so an
// interrupted stage never leaves a partial artifact at the final path.
void write_file_atomic(const std::string& path, std::string_view content);

// Simple CSV assembly; fields containing commas/quotes are quoted.
std::string csv_row(const std::vector<std::string>& fields);
std::string csv_num(double v);

}  // namespace gridwm
