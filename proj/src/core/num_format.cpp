#include "b3opt/core/num_format.hpp"

#include <charconv>
#include <system_error>

#include "b3opt/core/errors.hpp"

namespace b3opt {

std::string format_double(double value) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc{}) throw NumericError("to_chars failed");
    return std::string(buf, ptr);
}

double parse_double(std::string_view text) {
    double value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw InputError("not a number: '" + std::string(text) + "'");
    return value;
}

long parse_long(std::string_view text) {
    long value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw InputError("not an integer: '" + std::string(text) + "'");
    return value;
}

}  // namespace b3opt
