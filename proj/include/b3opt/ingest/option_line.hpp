#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "b3opt/core/date.hpp"

namespace b3opt::ingest {

enum class OptionType { call, put };
enum class ExerciseStyle { american, european };

// One body line of a B3 daily options file, plus the trading date taken
// from the archive name.
struct OptionQuote {
    std::string ticker;
    OptionType option_type = OptionType::call;
    ExerciseStyle style = ExerciseStyle::european;
    Date expiration;
    double strike = 0;
    double premium = 0;
    double implied_vol = 0;
    Date trade_date;

    bool operator==(const OptionQuote&) const = default;
};

struct LineError {
    size_t line_no = 0;  // 1-based within the file
    std::string reason;
    std::string line;
};

struct ParseReport {
    size_t body_lines = 0;
    size_t parsed = 0;
    std::vector<LineError> errors;
    std::vector<size_t> extra_field_lines;  // tolerated, but worth surfacing
};

struct LineParse {
    std::optional<OptionQuote> quote;
    std::string error;
    bool extra_fields = false;
};

// Parses one body line: code,type,style,expiration,strike,premium,implied_vol.
LineParse parse_option_line(std::string_view line, Date trade_date);

// Inverse of parse_option_line; exact decimal round-trip.
std::string render_option_line(const OptionQuote& quote);

// Parses a whole inner text file. The first line is the generation-date
// header and is skipped; blank lines are ignored; bad lines are collected.
std::pair<std::vector<OptionQuote>, ParseReport> parse_option_file(std::string_view text,
                                                                   Date trade_date);

// PETR European calls expiring in (0, 92] calendar days from the trade date.
std::vector<OptionQuote> filter_records(const std::vector<OptionQuote>& quotes);

inline constexpr int kMaxDaysToExpiry = 92;

}  // namespace b3opt::ingest
