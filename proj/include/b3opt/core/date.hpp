#pragma once

#include <chrono>
#include <compare>
#include <string>
#include <string_view>

namespace b3opt {

// Calendar date backed by a day count since the Unix epoch.
class Date {
  public:
    Date() = default;
    Date(int year, unsigned month, unsigned day);

    static Date parse_iso(std::string_view text);      // YYYY-MM-DD
    static Date parse_compact(std::string_view text);  // YYYYMMDD

    std::string to_iso() const;
    std::string to_compact() const;
    std::string to_yymmdd() const;
    std::string year_month() const;  // YYYY-MM

    int year() const;
    unsigned month() const;
    unsigned day() const;

    bool is_weekend() const;
    Date add_days(int n) const;

    // Days from b to a (a - b).
    friend int operator-(Date a, Date b) { return (a.days_ - b.days_).count(); }
    auto operator<=>(const Date&) const = default;

  private:
    explicit Date(std::chrono::sys_days d) : days_(d) {}
    std::chrono::sys_days days_{};
};

}  // namespace b3opt
