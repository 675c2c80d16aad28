#pragma once

#include <Eigen/Dense>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "b3opt/data/row.hpp"

namespace b3opt::eval {

// Mean absolute error; throws InputError on empty or mismatched series.
double mae(std::span<const double> actual, std::span<const double> predicted);

enum class ExpirationCategory { one_month, two_months, three_months };

const char* to_string(ExpirationCategory c);

// Days to expiry d: d <= 31 -> 1M, 32..62 -> 2M, 63..92 -> 3M.
ExpirationCategory expiration_category(const data::DatasetRow& row);

struct MaePair {
    double model = 0;
    double bs = 0;
    size_t count = 0;
};

struct RangeReport {
    double lo = 3.0, hi = 19.0;
    bool empty = false;  // no premiums inside [lo, hi]
    MaePair in_range;
    double share = 0;  // fraction of all rows with premium in [lo, hi]
};

struct DailyAverage {
    Date date;
    double actual_mean = 0;
    double model_mean = 0;
    double bs_mean = 0;
    size_t count = 0;
};

struct TickerMae {
    std::string ticker;
    double model_mae = 0;
    size_t count = 0;
};

struct TickerRanking {
    std::vector<TickerMae> best;   // ascending model MAE, ties by ticker
    std::vector<TickerMae> worst;  // descending model MAE, ties by ticker
};

struct EvalReport {
    MaePair overall;
    std::map<std::string, MaePair> by_trade_month;       // YYYY-MM of the trade date
    std::map<std::string, MaePair> by_expiration_month;  // YYYY-MM of the expiration
    std::map<int, MaePair> by_bracket;                   // floor(premium / width)
    double bracket_width = 1.0;
    std::map<ExpirationCategory, MaePair> by_category;
    RangeReport range;
    std::vector<DailyAverage> daily;  // ascending by date
    std::map<ExpirationCategory, TickerRanking> rankings;
    size_t ranking_k = 10;
};

// Per-bracket MAE pairs keyed by floor(premium / width); empty brackets never appear.
std::map<int, MaePair> bracket_mae(std::span<const data::DatasetRow> rows,
                                   std::span<const double> predictions, double width = 1.0);

RangeReport range_report(std::span<const data::DatasetRow> rows,
                         std::span<const double> predictions, double lo = 3.0, double hi = 19.0);

std::vector<DailyAverage> daily_average_report(std::span<const data::DatasetRow> rows,
                                               std::span<const double> predictions);

std::map<ExpirationCategory, TickerRanking> ticker_rankings(
    std::span<const data::DatasetRow> rows, std::span<const double> predictions, size_t k = 10);

// Full report. Predictions are clamped at zero before any comparison.
EvalReport evaluate(std::span<const data::DatasetRow> rows, std::span<const double> predictions,
                    size_t ranking_k = 10);

// Human-readable summary (one section per breakdown).
std::string report_text(const EvalReport& report);

// Plot-ready CSV series.
std::string daily_csv(const EvalReport& report);
std::string brackets_csv(const EvalReport& report);
std::string categories_csv(const EvalReport& report);
std::string tickers_csv(const EvalReport& report);
std::string months_csv(const EvalReport& report);

}  // namespace b3opt::eval
