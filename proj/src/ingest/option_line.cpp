#include "b3opt/ingest/option_line.hpp"

#include "b3opt/core/csv.hpp"
#include "b3opt/core/errors.hpp"
#include "b3opt/core/num_format.hpp"

namespace b3opt::ingest {

LineParse parse_option_line(std::string_view line, Date trade_date) {
    LineParse out;
    auto fields = split_fields(line);
    if (fields.size() < 7) {
        out.error = "expected 7 fields, got " + std::to_string(fields.size());
        return out;
    }
    if (fields.size() > 7) out.extra_fields = true;

    OptionQuote q;
    q.trade_date = trade_date;
    q.ticker = std::string(fields[0]);
    if (q.ticker.empty()) {
        out.error = "empty option code";
        return out;
    }

    if (fields[1] == "C") {
        q.option_type = OptionType::call;
    } else if (fields[1] == "V") {
        q.option_type = OptionType::put;
    } else {
        out.error = "unknown option type '" + std::string(fields[1]) + "'";
        return out;
    }

    if (fields[2] == "A") {
        q.style = ExerciseStyle::american;
    } else if (fields[2] == "E") {
        q.style = ExerciseStyle::european;
    } else {
        out.error = "unknown option style '" + std::string(fields[2]) + "'";
        return out;
    }

    try {
        q.expiration = Date::parse_compact(fields[3]);
        q.strike = parse_double(fields[4]);
        q.premium = parse_double(fields[5]);
        q.implied_vol = parse_double(fields[6]);
    } catch (const InputError& e) {
        out.error = e.what();
        return out;
    }

    if (!(q.strike > 0)) {
        out.error = "non-positive strike";
        return out;
    }
    if (q.premium < 0) {
        out.error = "negative premium";
        return out;
    }
    if (q.implied_vol < 0) {
        out.error = "negative implied volatility";
        return out;
    }

    out.quote = std::move(q);
    return out;
}

std::string render_option_line(const OptionQuote& q) {
    std::string out = q.ticker;
    out += ',';
    out += (q.option_type == OptionType::call) ? 'C' : 'V';
    out += ',';
    out += (q.style == ExerciseStyle::american) ? 'A' : 'E';
    out += ',';
    out += q.expiration.to_compact();
    out += ',';
    out += format_double(q.strike);
    out += ',';
    out += format_double(q.premium);
    out += ',';
    out += format_double(q.implied_vol);
    return out;
}

std::pair<std::vector<OptionQuote>, ParseReport> parse_option_file(std::string_view text,
                                                                   Date trade_date) {
    std::vector<OptionQuote> quotes;
    ParseReport report;
    auto lines = split_lines(text);
    for (size_t i = 1; i < lines.size(); ++i) {  // line 0 is the generation-date header
        std::string_view line = lines[i];
        if (trim(line).empty()) continue;
        ++report.body_lines;
        LineParse parsed = parse_option_line(line, trade_date);
        size_t line_no = i + 1;
        if (parsed.quote) {
            ++report.parsed;
            if (parsed.extra_fields) report.extra_field_lines.push_back(line_no);
            quotes.push_back(std::move(*parsed.quote));
        } else {
            report.errors.push_back({line_no, parsed.error, std::string(line)});
        }
    }
    return {std::move(quotes), std::move(report)};
}

std::vector<OptionQuote> filter_records(const std::vector<OptionQuote>& quotes) {
    std::vector<OptionQuote> kept;
    for (const auto& q : quotes) {
        if (!q.ticker.starts_with("PETR")) continue;
        if (q.style != ExerciseStyle::european) continue;
        if (q.option_type != OptionType::call) continue;
        int days = q.expiration - q.trade_date;
        if (days <= 0 || days > kMaxDaysToExpiry) continue;
        kept.push_back(q);
    }
    return kept;
}

}  // namespace b3opt::ingest
