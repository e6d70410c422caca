#include "skewprice/pricer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "skewprice/errors.hpp"

namespace skewprice {

namespace {

double require_finite_term(double value, const char* term) {
    if (!std::isfinite(value)) {
        throw NumericalRegimeError(std::string("call_price: term '") + term +
                                   "' is not representable (" + std::to_string(value) + ")");
    }
    return value;
}

// (lambda sigma sqrt(t) + gamma) / sqrt(1 + lambda^2)
double tilted_bound(const MarketParams& m, const SkewParams& s) {
    return (s.lambda() * m.total_vol() + s.gamma()) / s.scale();
}

}  // namespace

MarketParams::MarketParams(double spot, double strike, double rate, double sigma,
                           double maturity)
    : spot_(spot), strike_(strike), rate_(rate), sigma_(sigma), maturity_(maturity) {
    auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
    if (!positive(spot)) throw ArgumentError("MarketParams: spot must be positive");
    if (!positive(strike)) throw ArgumentError("MarketParams: strike must be positive");
    if (!std::isfinite(rate)) throw ArgumentError("MarketParams: rate must be finite");
    if (!positive(sigma)) throw ArgumentError("MarketParams: sigma must be positive");
    if (!positive(maturity)) throw ArgumentError("MarketParams: maturity must be positive");
}

MarketParams MarketParams::from_variance(double spot, double strike, double rate,
                                         double variance, double maturity) {
    if (!std::isfinite(variance) || variance <= 0.0) {
        throw ArgumentError("MarketParams: variance must be positive");
    }
    return MarketParams(spot, strike, rate, std::sqrt(variance), maturity);
}

MarketParams MarketParams::with_spot(double spot) const {
    return MarketParams(spot, strike_, rate_, sigma_, maturity_);
}

MarketParams MarketParams::with_strike(double strike) const {
    return MarketParams(spot_, strike, rate_, sigma_, maturity_);
}

MarketParams MarketParams::with_maturity(double maturity) const {
    return MarketParams(spot_, strike_, rate_, sigma_, maturity);
}

std::string_view to_string(PricingMethod method) {
    switch (method) {
        case PricingMethod::General: return "general";
        case PricingMethod::BlackScholes: return "black-scholes";
        case PricingMethod::CorradoSu: return "corrado-su";
    }
    return "unknown";
}

double mu_star(const MarketParams& m, const SkewParams& s) {
    const GsnDistribution dist(s);
    const double sigma = m.sigma();
    return m.rate() - 0.5 * sigma * sigma - dist.log_mgf_correction(m.total_vol()) / m.maturity();
}

double w_statistic(const MarketParams& m, const SkewParams& s) {
    const GsnDistribution dist(s);
    const double sigma = m.sigma();
    const double drift = std::log(m.spot() / m.strike()) + (m.rate() + 0.5 * sigma * sigma) * m.maturity();
    return (drift - dist.log_mgf_correction(m.total_vol())) / m.total_vol();
}

PriceQuote call_price(const MarketParams& m, const SkewParams& s) {
    const GsnDistribution dist(s);
    const double vol = m.total_vol();
    const double w = require_finite_term(w_statistic(m, s), "w");
    const double bound = require_finite_term(tilted_bound(m, s), "(lambda sigma sqrt(t) + gamma)/sqrt(1 + lambda^2)");

    // S(0) {1 - Phi2(bound, -w; rho) / Phi(bound)} = S(0) P(X <= w | U <= bound), corr(X, U) = -rho
    const double share_prob = require_finite_term(
        bvn_conditional_cdf(bound, w, dist.latent_correlation().negated()),
        "Phi2(bound, -w; rho) / Phi(bound)");
    const double exercise_prob =
        require_finite_term(dist.survival(vol - w), "survival(-w + sigma sqrt(t))");

    PriceQuote q{.call = 0.0,
                 .put = 0.0,
                 .w = w,
                 .mu_star = mu_star(m, s),
                 .method = PricingMethod::General,
                 .market = m,
                 .skew = s};
    q.call = m.spot() * share_prob - m.discount() * m.strike() * exercise_prob;
    q.put = q.call - m.spot() + m.strike() * m.discount();
    return q;
}

double put_price(const MarketParams& m, const SkewParams& s) { return call_price(m, s).put; }

double put_price_direct(const MarketParams& m, const SkewParams& s) {
    const GsnDistribution dist(s);
    const double w = w_statistic(m, s);
    const double bound = tilted_bound(m, s);
    // e^{-rt} E[(K - S)^+] = e^{-rt} K P(Z <= a) - S(0) Phi2(bound, -w; rho) / Phi(bound), a = sigma sqrt(t) - w
    const double share_prob = bvn_conditional_cdf(bound, -w, dist.latent_correlation());
    const double exercise_prob = dist.cdf(m.total_vol() - w);
    return m.discount() * m.strike() * exercise_prob - m.spot() * share_prob;
}

double black_scholes_price(const MarketParams& m) {
    const double vol = m.total_vol();
    const double sigma = m.sigma();
    const double w1 = (std::log(m.spot() / m.strike()) + (m.rate() + 0.5 * sigma * sigma) * m.maturity()) / vol;
    return m.spot() * std_normal_cdf(w1) - m.discount() * m.strike() * std_normal_cdf(w1 - vol);
}

double corrado_su_price(const MarketParams& m, double lambda) {
    if (!std::isfinite(lambda)) {
        throw ArgumentError("corrado_su_price: lambda must be finite");
    }
    const double vol = m.total_vol();
    const double sigma = m.sigma();
    const double scale = std::hypot(1.0, lambda);
    const double bound = lambda * vol / scale;
    // ln[2 Phi(lambda sigma sqrt(t) / sqrt(1 + lambda^2))]
    const double correction = std::numbers::ln2 + std_normal_log_cdf(bound);
    const double w2 = (std::log(m.spot() / m.strike()) + (m.rate() + 0.5 * sigma * sigma) * m.maturity() - correction) / vol;

    const double share_prob = bvn_conditional_cdf(bound, w2, Correlation(lambda / scale));
    const double x = vol - w2;
    // Survival of Azzalini's SN(lambda): 1 - Phi(x) + 2 T(x, lambda)
    const double sn_survival = std_normal_cdf(-x) + 2.0 * owen_t(x, lambda);
    return m.spot() * share_prob - m.discount() * m.strike() * sn_survival;
}

double call_value(double spot, double strike, double rate, double sigma, double maturity,
                  const SkewParams& s) {
    if (maturity == 0.0) {
        if (!(spot > 0.0) || !(strike > 0.0)) {
            throw ArgumentError("call_value: spot and strike must be positive");
        }
        return std::max(spot - strike, 0.0);
    }
    return call_price(MarketParams(spot, strike, rate, sigma, maturity), s).call;
}

}  // namespace skewprice
