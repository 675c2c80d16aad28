#include "b3opt/core/date.hpp"

#include <cstdio>

#include "b3opt/core/errors.hpp"

namespace b3opt {

namespace {

int parse_digits(std::string_view s, const char* what) {
    if (s.empty()) throw InputError(std::string("empty ") + what + " in date");
    int value = 0;
    for (char c : s) {
        if (c < '0' || c > '9')
            throw InputError(std::string("non-digit in date ") + what + ": '" + std::string(s) + "'");
        value = value * 10 + (c - '0');
    }
    return value;
}

}  // namespace

Date::Date(int year, unsigned month, unsigned day) {
    std::chrono::year_month_day ymd{std::chrono::year{year}, std::chrono::month{month},
                                    std::chrono::day{day}};
    if (!ymd.ok()) {
        char buf[48];
        std::snprintf(buf, sizeof(buf), "invalid calendar date %04d-%02u-%02u", year, month, day);
        throw InputError(buf);
    }
    days_ = std::chrono::sys_days{ymd};
}

Date Date::parse_iso(std::string_view text) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-')
        throw InputError("date not in YYYY-MM-DD form: '" + std::string(text) + "'");
    int y = parse_digits(text.substr(0, 4), "year");
    int m = parse_digits(text.substr(5, 2), "month");
    int d = parse_digits(text.substr(8, 2), "day");
    return Date(y, static_cast<unsigned>(m), static_cast<unsigned>(d));
}

Date Date::parse_compact(std::string_view text) {
    if (text.size() != 8)
        throw InputError("date not in YYYYMMDD form: '" + std::string(text) + "'");
    int y = parse_digits(text.substr(0, 4), "year");
    int m = parse_digits(text.substr(4, 2), "month");
    int d = parse_digits(text.substr(6, 2), "day");
    return Date(y, static_cast<unsigned>(m), static_cast<unsigned>(d));
}

std::string Date::to_iso() const {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", year(), month(), day());
    return buf;
}

std::string Date::to_compact() const {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d%02u%02u", year(), month(), day());
    return buf;
}

std::string Date::to_yymmdd() const {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%02d%02u%02u", year() % 100, month(), day());
    return buf;
}

std::string Date::year_month() const {
    char buf[12];
    std::snprintf(buf, sizeof(buf), "%04d-%02u", year(), month());
    return buf;
}

int Date::year() const {
    return int(std::chrono::year_month_day{days_}.year());
}

unsigned Date::month() const {
    return unsigned(std::chrono::year_month_day{days_}.month());
}

unsigned Date::day() const {
    return unsigned(std::chrono::year_month_day{days_}.day());
}

bool Date::is_weekend() const {
    std::chrono::weekday wd{days_};
    return wd == std::chrono::Saturday || wd == std::chrono::Sunday;
}

Date Date::add_days(int n) const {
    Date out;
    out.days_ = days_ + std::chrono::days{n};
    return out;
}

}  // namespace b3opt
