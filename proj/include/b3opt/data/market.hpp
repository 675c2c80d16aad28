#pragma once

#include <span>
#include <utility>
#include <vector>

#include "b3opt/core/date.hpp"
#include "b3opt/data/row.hpp"
#include "b3opt/ingest/option_line.hpp"

namespace b3opt::data {

struct PricePoint {
    Date date;
    double close = 0;
};

struct RatePoint {
    Date date;
    double rate = 0;  // annual fraction
};

// One date's underlying state.
struct MarketSnapshot {
    Date date;
    double price = 0;
    double daily_return = 0;
    double volatility = 0;  // annualized fraction
    double selic_rate = 0;  // annual fraction; as-of the snapshot date
};

inline constexpr int kVolWindow = 21;
inline constexpr int kTradingDaysPerYear = 252;

// Annualized rolling volatility: sample std-dev (n-1) of the last `window`
// daily simple returns, scaled by sqrt(252). The first value lands on the
// (window+1)-th price date; shorter series yield an empty result.
std::vector<std::pair<Date, double>> rolling_volatility(std::span<const PricePoint> prices,
                                                        int window = kVolWindow);

// Snapshots for every date that has a full volatility window. When a selic
// series is given, each snapshot carries the rate as-of its own date.
std::vector<MarketSnapshot> build_snapshots(std::span<const PricePoint> prices,
                                            std::span<const RatePoint> selic = {},
                                            int window = kVolWindow);

struct JoinResult {
    std::vector<DatasetRow> rows;      // bs_price unfilled
    size_t dropped_no_market = 0;      // no stock snapshot at or before trade date
    size_t dropped_no_rate = 0;        // no selic value at or before trade date
};

// Matches each quote with the stock snapshot and selic rate at its trade
// date, falling back to the closest preceding date. Quotes with no
// predecessor in either series are dropped and counted.
JoinResult asof_join(std::span<const ingest::OptionQuote> quotes,
                     std::span<const MarketSnapshot> snapshots,
                     std::span<const RatePoint> selic);

// Calendar days / 365. Throws InputError when expiration <= trade date.
double compute_tte(Date trade_date, Date expiration);

}  // namespace b3opt::data
