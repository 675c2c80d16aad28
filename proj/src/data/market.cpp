#include "b3opt/data/market.hpp"

#include <algorithm>
#include <cmath>

#include "b3opt/core/errors.hpp"

namespace b3opt::data {

namespace {

void check_sorted(std::span<const PricePoint> prices) {
    for (size_t i = 1; i < prices.size(); ++i)
        if (!(prices[i - 1].date < prices[i].date))
            throw InputError("price series dates must be strictly ascending");
}

std::vector<double> daily_returns(std::span<const PricePoint> prices) {
    std::vector<double> returns(prices.size() > 0 ? prices.size() - 1 : 0);
    for (size_t i = 1; i < prices.size(); ++i) {
        if (!(prices[i - 1].close > 0)) throw InputError("non-positive close in price series");
        returns[i - 1] = prices[i].close / prices[i - 1].close - 1.0;
    }
    return returns;
}

double sample_std(std::span<const double> xs) {
    double mean = 0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(xs.size());
    double ss = 0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

}  // namespace

std::vector<std::pair<Date, double>> rolling_volatility(std::span<const PricePoint> prices,
                                                        int window) {
    if (window < 2) throw InputError("volatility window must be >= 2");
    check_sorted(prices);
    std::vector<std::pair<Date, double>> out;
    if (prices.size() < static_cast<size_t>(window) + 1) return out;

    std::vector<double> returns = daily_returns(prices);
    double annualize = std::sqrt(static_cast<double>(kTradingDaysPerYear));
    // Return i sits on price date i+1; the first full window ends at return
    // index window-1, i.e. price index window.
    for (size_t end = window; end <= returns.size(); ++end) {
        std::span<const double> win(returns.data() + end - window, static_cast<size_t>(window));
        out.emplace_back(prices[end].date, sample_std(win) * annualize);
    }
    return out;
}

std::vector<MarketSnapshot> build_snapshots(std::span<const PricePoint> prices,
                                            std::span<const RatePoint> selic, int window) {
    auto vols = rolling_volatility(prices, window);
    std::vector<double> returns = daily_returns(prices);

    std::vector<MarketSnapshot> out;
    out.reserve(vols.size());
    size_t price_idx = static_cast<size_t>(window);
    for (size_t k = 0; k < vols.size(); ++k, ++price_idx) {
        MarketSnapshot snap;
        snap.date = vols[k].first;
        snap.price = prices[price_idx].close;
        snap.daily_return = returns[price_idx - 1];
        snap.volatility = vols[k].second;
        if (!selic.empty()) {
            auto it = std::upper_bound(selic.begin(), selic.end(), snap.date,
                                       [](Date d, const RatePoint& r) { return d < r.date; });
            if (it != selic.begin()) snap.selic_rate = std::prev(it)->rate;
        }
        out.push_back(snap);
    }
    return out;
}

JoinResult asof_join(std::span<const ingest::OptionQuote> quotes,
                     std::span<const MarketSnapshot> snapshots,
                     std::span<const RatePoint> selic) {
    if (snapshots.empty()) throw InputError("empty market snapshot series; nothing to join");
    for (size_t i = 1; i < snapshots.size(); ++i)
        if (!(snapshots[i - 1].date < snapshots[i].date))
            throw InputError("snapshot series dates must be strictly ascending");
    for (size_t i = 1; i < selic.size(); ++i)
        if (!(selic[i - 1].date < selic[i].date))
            throw InputError("selic series dates must be strictly ascending");

    JoinResult result;
    result.rows.reserve(quotes.size());
    for (const auto& q : quotes) {
        auto snap_it = std::upper_bound(snapshots.begin(), snapshots.end(), q.trade_date,
                                        [](Date d, const MarketSnapshot& s) { return d < s.date; });
        if (snap_it == snapshots.begin()) {
            ++result.dropped_no_market;
            continue;
        }
        const MarketSnapshot& snap = *std::prev(snap_it);

        auto rate_it = std::upper_bound(selic.begin(), selic.end(), q.trade_date,
                                        [](Date d, const RatePoint& r) { return d < r.date; });
        if (rate_it == selic.begin()) {
            ++result.dropped_no_rate;
            continue;
        }
        double rate = std::prev(rate_it)->rate;

        DatasetRow row;
        row.trade_date = q.trade_date;
        row.expiration = q.expiration;
        row.ticker = q.ticker;
        row.strike = q.strike;
        row.premium = q.premium;
        row.stock_price = snap.price;
        row.volatility = snap.volatility;
        row.selic_rate = rate;
        result.rows.push_back(std::move(row));
    }
    return result;
}

double compute_tte(Date trade_date, Date expiration) {
    int days = expiration - trade_date;
    if (days <= 0) throw InputError("expiration must be after trade date");
    return static_cast<double>(days) / 365.0;
}

}  // namespace b3opt::data
