#include "b3opt/data/synthetic.hpp"

#include <algorithm>
#include <cstdio>
#include <random>

#include "b3opt/core/errors.hpp"
#include "b3opt/data/dataset.hpp"
#include "b3opt/data/market.hpp"
#include "b3opt/pricing/black_scholes.hpp"

namespace b3opt::data {

std::vector<DatasetRow> generate_synthetic(size_t n, uint64_t seed, double noise_sd) {
    if (n < 1) throw InputError("synthetic row count must be >= 1");
    if (noise_sd < 0) throw InputError("noise standard deviation must be >= 0");

    const Date first_trade(2016, 11, 1);
    const Date last_trade(2025, 1, 31);
    const int date_span = last_trade - first_trade;
    const int expiry_days[3] = {30, 61, 91};  // one per expiration category

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> date_offset(0, date_span);
    std::uniform_int_distribution<int> month_idx(0, 2);
    std::uniform_int_distribution<int> ticker_idx(0, 39);
    std::uniform_real_distribution<double> spot_dist(8.0, 45.0);
    std::uniform_real_distribution<double> moneyness_dist(0.6, 1.5);
    std::uniform_real_distribution<double> vol_dist(0.15, 0.9);
    std::uniform_real_distribution<double> rate_dist(0.02, 0.15);
    std::normal_distribution<double> noise(0.0, 1.0);

    std::vector<DatasetRow> rows;
    rows.reserve(n);
    for (size_t i = 0; i < n; ++i) {
        DatasetRow r;
        r.trade_date = first_trade.add_days(date_offset(rng));
        int days = expiry_days[month_idx(rng)];
        r.expiration = r.trade_date.add_days(days);
        char ticker[16];
        std::snprintf(ticker, sizeof(ticker), "SYN%02d", ticker_idx(rng));
        r.ticker = ticker;
        r.stock_price = spot_dist(rng);
        r.strike = r.stock_price * moneyness_dist(rng);
        r.volatility = vol_dist(rng);
        r.selic_rate = rate_dist(rng);
        r.tte = compute_tte(r.trade_date, r.expiration);
        r.bs_price = pricing::call_price(
            {r.stock_price, r.strike, r.selic_rate, r.volatility, r.tte});
        r.premium = noise_sd > 0 ? std::max(r.bs_price + noise_sd * noise(rng), 0.0) : r.bs_price;
        rows.push_back(std::move(r));
    }
    sort_canonical(rows);
    return rows;
}

}  // namespace b3opt::data
