#pragma once

#include <array>
#include <string>

#include "b3opt/core/date.hpp"

namespace b3opt::data {

// One joined training/evaluation record. All rates and volatilities are
// annual fractions; tte is in years.
struct DatasetRow {
    Date trade_date;
    Date expiration;
    std::string ticker;
    double strike = 0;       // K, BRL
    double premium = 0;      // m, market price, BRL
    double stock_price = 0;  // S, BRL
    double volatility = 0;   // sigma
    double selic_rate = 0;   // r
    double tte = 0;          // tau, years
    double bs_price = 0;     // closed-form reference, BRL

    bool operator==(const DatasetRow&) const = default;
};

// Fixed feature order: [ln S, ln K, tte, vol, rate].
using FeatureVector = std::array<double, 5>;

inline constexpr int kFeatureCount = 5;

}  // namespace b3opt::data
