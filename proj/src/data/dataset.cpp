#include "b3opt/data/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <tuple>

#include "b3opt/core/csv.hpp"
#include "b3opt/core/errors.hpp"
#include "b3opt/core/num_format.hpp"
#include "b3opt/pricing/black_scholes.hpp"

namespace b3opt::data {

FeatureVector featurize(const DatasetRow& row) {
    if (!(row.stock_price > 0) || !(row.strike > 0))
        throw InputError("featurize requires positive stock price and strike");
    return {std::log(row.stock_price), std::log(row.strike), row.tte, row.volatility,
            row.selic_rate};
}

Split split_dataset(std::vector<DatasetRow> rows, const SplitSpec& spec) {
    if (rows.empty()) throw InputError("cannot split an empty dataset");
    if (!(spec.val_fraction > 0.0 && spec.val_fraction < 1.0))
        throw InputError("val_fraction must be in (0, 1)");

    Split split;
    std::vector<DatasetRow> pre;
    for (auto& row : rows) {
        if (row.trade_date > spec.cutoff)
            split.test.push_back(std::move(row));
        else
            pre.push_back(std::move(row));
    }
    if (pre.empty()) throw InputError("no rows at or before the cutoff; nothing to train on");

    std::mt19937_64 rng(spec.shuffle_seed);
    std::shuffle(pre.begin(), pre.end(), rng);
    size_t val_count = static_cast<size_t>(
        std::llround(spec.val_fraction * static_cast<double>(pre.size())));
    split.val.assign(std::make_move_iterator(pre.begin()),
                     std::make_move_iterator(pre.begin() + val_count));
    split.train.assign(std::make_move_iterator(pre.begin() + val_count),
                       std::make_move_iterator(pre.end()));
    return split;
}

void sort_canonical(std::vector<DatasetRow>& rows) {
    std::sort(rows.begin(), rows.end(), [](const DatasetRow& a, const DatasetRow& b) {
        return std::tie(a.trade_date, a.ticker, a.expiration, a.strike, a.premium) <
               std::tie(b.trade_date, b.ticker, b.expiration, b.strike, b.premium);
    });
}

std::string rows_to_csv(std::span<const DatasetRow> rows) {
    std::string out = kCsvHeader;
    out += '\n';
    for (const auto& r : rows) {
        out += r.trade_date.to_iso();
        out += ',';
        out += r.expiration.to_iso();
        out += ',';
        out += r.ticker;
        out += ',';
        out += format_double(r.strike);
        out += ',';
        out += format_double(r.premium);
        out += ',';
        out += format_double(r.stock_price);
        out += ',';
        out += format_double(r.volatility);
        out += ',';
        out += format_double(r.selic_rate);
        out += ',';
        out += format_double(r.tte);
        out += ',';
        out += format_double(r.bs_price);
        out += '\n';
    }
    return out;
}

std::vector<DatasetRow> rows_from_csv(std::string_view text) {
    auto lines = split_lines(text);
    if (lines.empty()) throw InputError("dataset CSV is empty");
    if (trim(lines[0]) != kCsvHeader)
        throw InputError("dataset CSV header mismatch; expected '" + std::string(kCsvHeader) + "'");

    std::vector<DatasetRow> rows;
    rows.reserve(lines.size() - 1);
    for (size_t i = 1; i < lines.size(); ++i) {
        if (trim(lines[i]).empty()) continue;
        auto f = split_fields(lines[i]);
        if (f.size() != 10)
            throw InputError("dataset CSV line " + std::to_string(i + 1) + ": expected 10 fields");
        DatasetRow r;
        r.trade_date = Date::parse_iso(f[0]);
        r.expiration = Date::parse_iso(f[1]);
        r.ticker = std::string(f[2]);
        r.strike = parse_double(f[3]);
        r.premium = parse_double(f[4]);
        r.stock_price = parse_double(f[5]);
        r.volatility = parse_double(f[6]);
        r.selic_rate = parse_double(f[7]);
        r.tte = parse_double(f[8]);
        r.bs_price = parse_double(f[9]);
        rows.push_back(std::move(r));
    }
    return rows;
}

void write_rows_csv(const std::string& path, std::span<const DatasetRow> rows) {
    write_file(path, rows_to_csv(rows));
}

std::vector<DatasetRow> read_rows_csv(const std::string& path) {
    return rows_from_csv(read_file(path));
}

namespace {

// Shared reader for the two input series formats. A leading header line
// (second field not numeric) is tolerated.
std::vector<std::pair<Date, double>> read_series_csv(const std::string& path) {
    std::string text = read_file(path);
    auto lines = split_lines(text);
    std::vector<std::pair<Date, double>> out;
    for (size_t i = 0; i < lines.size(); ++i) {
        if (trim(lines[i]).empty()) continue;
        auto f = split_fields(lines[i]);
        if (f.size() < 2)
            throw InputError(path + " line " + std::to_string(i + 1) + ": expected 'date,value'");
        if (i == 0) {
            bool header = false;
            try {
                parse_double(f[1]);
            } catch (const InputError&) {
                header = true;
            }
            if (header) continue;
        }
        out.emplace_back(Date::parse_iso(f[0]), parse_double(f[1]));
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    return out;
}

}  // namespace

std::vector<PricePoint> read_stock_csv(const std::string& path) {
    std::vector<PricePoint> out;
    for (auto& [date, close] : read_series_csv(path)) out.push_back({date, close});
    return out;
}

std::vector<RatePoint> read_selic_csv(const std::string& path) {
    std::vector<RatePoint> out;
    for (auto& [date, pct] : read_series_csv(path)) out.push_back({date, pct / 100.0});
    return out;
}

void price_rows(std::span<DatasetRow> rows) {
    for (size_t i = 0; i < rows.size(); ++i) {
        auto& r = rows[i];
        try {
            r.bs_price = pricing::call_price(
                {r.stock_price, r.strike, r.selic_rate, r.volatility, r.tte});
        } catch (const std::exception& e) {
            throw InputError("row " + std::to_string(i) + ": " + e.what());
        }
    }
}

BuildResult build_dataset(const BuildInputs& inputs) {
    BuildResult result;
    auto snapshots = build_snapshots(inputs.stock, inputs.selic);

    std::vector<ingest::OptionQuote> kept;
    for (const auto& [date, text] : inputs.option_texts) {
        ++result.report.files;
        auto [quotes, report] = ingest::parse_option_file(text, date);
        result.report.body_lines += report.body_lines;
        result.report.parse_errors += report.errors.size();
        result.report.parsed_quotes += quotes.size();
        auto filtered = ingest::filter_records(quotes);
        result.report.filtered_out += quotes.size() - filtered.size();
        kept.insert(kept.end(), std::make_move_iterator(filtered.begin()),
                    std::make_move_iterator(filtered.end()));
    }

    JoinResult joined = asof_join(kept, snapshots, inputs.selic);
    result.report.dropped_no_market = joined.dropped_no_market;
    result.report.dropped_no_rate = joined.dropped_no_rate;

    for (auto& row : joined.rows) row.tte = compute_tte(row.trade_date, row.expiration);
    price_rows(joined.rows);

    result.rows = std::move(joined.rows);
    sort_canonical(result.rows);
    result.report.rows = result.rows.size();
    return result;
}

}  // namespace b3opt::data
