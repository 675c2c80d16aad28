#pragma once

#include <utility>

namespace b3opt::pricing {

struct PricingInputs {
    double spot;    // S, BRL, > 0
    double strike;  // K, BRL, > 0
    double rate;    // r, annual fraction
    double sigma;   // annualized volatility fraction, >= 0
    double tte;     // time to expiry in years, >= 0
};

// Standard normal CDF via erfc; absolute error well below 1e-12.
double norm_cdf(double x);

// Requires sigma > 0 and tte > 0; degenerate inputs throw std::domain_error
// and are handled by the limit branches in call_price.
std::pair<double, double> d1_d2(const PricingInputs& in);

// European call, closed form. tte == 0 collapses to the payoff,
// sigma == 0 to the discounted forward payoff.
double call_price(const PricingInputs& in);

double payoff(double spot, double strike);

}  // namespace b3opt::pricing
