#pragma once

#include <string>
#include <string_view>

namespace b3opt {

// Shortest decimal representation that round-trips the exact double.
std::string format_double(double value);

double parse_double(std::string_view text);  // throws InputError
long parse_long(std::string_view text);      // throws InputError

}  // namespace b3opt
