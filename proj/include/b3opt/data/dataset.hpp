#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "b3opt/core/date.hpp"
#include "b3opt/data/market.hpp"
#include "b3opt/data/row.hpp"

namespace b3opt::data {

inline constexpr const char* kCsvHeader =
    "trade_date,expiration,ticker,strike,premium,stock_price,volatility,selic_rate,tte,bs_price";

// [ln S, ln K, tte, vol, rate]; throws InputError on non-positive S or K.
FeatureVector featurize(const DatasetRow& row);

struct SplitSpec {
    Date cutoff{2024, 10, 31};  // trade dates after this form the test set
    double val_fraction = 0.20;
    uint64_t shuffle_seed = 42;
};

struct Split {
    std::vector<DatasetRow> train, val, test;
};

// Chronological test holdout, then a seeded random 80/20 train/val split of
// the remaining rows. |val| = round(val_fraction * pre-cutoff count).
Split split_dataset(std::vector<DatasetRow> rows, const SplitSpec& spec);

// Deterministic row order for the canonical CSV.
void sort_canonical(std::vector<DatasetRow>& rows);

std::string rows_to_csv(std::span<const DatasetRow> rows);
std::vector<DatasetRow> rows_from_csv(std::string_view text);

void write_rows_csv(const std::string& path, std::span<const DatasetRow> rows);
std::vector<DatasetRow> read_rows_csv(const std::string& path);

// Input series: `date,close` and `date,annual_rate_percent`, one header line
// tolerated. SELIC percentages are normalized to fractions here, at ingest.
std::vector<PricePoint> read_stock_csv(const std::string& path);
std::vector<RatePoint> read_selic_csv(const std::string& path);

struct BuildReport {
    size_t files = 0;
    size_t body_lines = 0;
    size_t parse_errors = 0;
    size_t parsed_quotes = 0;
    size_t filtered_out = 0;
    size_t dropped_no_market = 0;
    size_t dropped_no_rate = 0;
    size_t rows = 0;
};

struct BuildInputs {
    // (trading date, raw inner-file text) pairs from extracted archives.
    std::vector<std::pair<Date, std::string>> option_texts;
    std::vector<PricePoint> stock;
    std::vector<RatePoint> selic;
};

struct BuildResult {
    std::vector<DatasetRow> rows;  // canonical order, bs_price filled
    BuildReport report;
};

// parse -> filter -> as-of join -> tte -> closed-form reference price.
BuildResult build_dataset(const BuildInputs& inputs);

// Maps each row through the closed-form pricer (sigma = rolling volatility,
// r = selic). Pure, order-preserving.
void price_rows(std::span<DatasetRow> rows);

}  // namespace b3opt::data
