#include "b3opt/pricing/black_scholes.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "b3opt/core/errors.hpp"

namespace b3opt::pricing {

double norm_cdf(double x) {
    static const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    return 0.5 * std::erfc(-x * inv_sqrt2);
}

std::pair<double, double> d1_d2(const PricingInputs& in) {
    if (in.sigma <= 0.0 || in.tte <= 0.0)
        throw std::domain_error("d1/d2 undefined for sigma <= 0 or tte <= 0");
    double vol_sqrt_t = in.sigma * std::sqrt(in.tte);
    double d1 = (std::log(in.spot / in.strike) + (in.rate + 0.5 * in.sigma * in.sigma) * in.tte) /
                vol_sqrt_t;
    return {d1, d1 - vol_sqrt_t};
}

double call_price(const PricingInputs& in) {
    if (!(in.spot > 0.0) || !(in.strike > 0.0))
        throw InputError("call_price requires positive spot and strike");
    if (in.tte <= 0.0) return payoff(in.spot, in.strike);
    if (in.sigma <= 0.0) return std::max(in.spot - in.strike * std::exp(-in.rate * in.tte), 0.0);

    auto [d1, d2] = d1_d2(in);
    return in.spot * norm_cdf(d1) - in.strike * std::exp(-in.rate * in.tte) * norm_cdf(d2);
}

double payoff(double spot, double strike) {
    return std::max(spot - strike, 0.0);
}

}  // namespace b3opt::pricing
