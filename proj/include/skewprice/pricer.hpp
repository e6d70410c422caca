#pragma once

/**
 * @file pricer.hpp
 * @brief European option prices when log-returns are generalized skew-normal.
 *
 * The asset follows S(t) = S(0) exp(mu t + sigma sqrt(t) Z) with
 * Z ~ SN(lambda, gamma). Prices are taken under the martingale measure,
 * where the drift is replaced by mu_star; the physical drift mu never enters
 * and therefore is not a parameter anywhere in this API.
 */

#include <string_view>

#include "skewprice/gsn_dist.hpp"

namespace skewprice {

/// Non-skew pricing inputs. Throws ArgumentError on construction unless
/// spot, strike, sigma and maturity are positive and finite and the rate is
/// finite.
class MarketParams {
public:
    MarketParams(double spot, double strike, double rate, double sigma, double maturity);

    /// Same, with the volatility given as a variance sigma^2.
    static MarketParams from_variance(double spot, double strike, double rate, double variance,
                                      double maturity);

    double spot() const noexcept { return spot_; }
    double strike() const noexcept { return strike_; }
    double rate() const noexcept { return rate_; }
    double sigma() const noexcept { return sigma_; }
    double maturity() const noexcept { return maturity_; }

    /// sigma * sqrt(t)
    double total_vol() const noexcept { return sigma_ * std::sqrt(maturity_); }
    /// exp(-r t)
    double discount() const noexcept { return std::exp(-rate_ * maturity_); }

    MarketParams with_spot(double spot) const;
    MarketParams with_strike(double strike) const;
    MarketParams with_maturity(double maturity) const;

    friend bool operator==(const MarketParams&, const MarketParams&) = default;

private:
    double spot_;
    double strike_;
    double rate_;
    double sigma_;
    double maturity_;
};

enum class PricingMethod { General, BlackScholes, CorradoSu };

std::string_view to_string(PricingMethod method);

struct PriceQuote {
    double call = 0.0;
    double put = 0.0;
    double w = 0.0;
    double mu_star = 0.0;
    PricingMethod method = PricingMethod::General;
    MarketParams market;
    SkewParams skew;
};

/// Risk-neutral drift r - sigma^2/2 - ln M_corr(sigma sqrt t) / t, where
/// M_corr is the skew part of the SN moment generating function.
double mu_star(const MarketParams& m, const SkewParams& s);

/// Moneyness statistic generalizing Black-Scholes d1.
double w_statistic(const MarketParams& m, const SkewParams& s);

/// Closed-form call price (and the parity put) under SN(lambda, gamma).
///
/// Throws NumericalRegimeError when a term of the formula cannot be
/// represented; the message names the term.
PriceQuote call_price(const MarketParams& m, const SkewParams& s);

/// call - S(0) + K e^{-rt}
double put_price(const MarketParams& m, const SkewParams& s);

/// Put price from its own closed form e^{-rt} K P(Z <= a) - S(0) P(...),
/// independent of the call. Used to check parity.
double put_price_direct(const MarketParams& m, const SkewParams& s);

double black_scholes_price(const MarketParams& m);

/// Call price for Azzalini's SN(lambda) returns (gamma = 0), written with
/// Owen's T for the skew-normal survival term.
double corrado_su_price(const MarketParams& m, double lambda);

/// Call value that also accepts t = 0, where it returns max(S(0) - K, 0).
double call_value(double spot, double strike, double rate, double sigma, double maturity,
                  const SkewParams& s);

}  // namespace skewprice
