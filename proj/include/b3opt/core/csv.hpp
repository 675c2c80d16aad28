#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace b3opt {

// Comma-split with whitespace trim. None of the formats handled here quote
// fields, so no quote handling is attempted.
std::vector<std::string_view> split_fields(std::string_view line, char delim = ',');

std::string_view trim(std::string_view s);

// Splits text into lines; tolerates both \n and \r\n, drops a trailing blank line.
std::vector<std::string_view> split_lines(std::string_view text);

std::string read_file(const std::string& path);                      // throws IoError
void write_file(const std::string& path, std::string_view content);  // throws IoError

}  // namespace b3opt
