#include "skewprice/gsn_dist.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "skewprice/errors.hpp"

namespace skewprice {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// ln(DBL_MAX)
constexpr double kMaxExponent = 709.782712893384;

void require_not_nan(double x, const char* what) {
    if (std::isnan(x)) {
        throw DomainError(std::string(what) + ": NaN argument");
    }
}

}  // namespace

SkewParams::SkewParams(double lambda, double gamma) : lambda_(lambda), gamma_(gamma) {
    if (!std::isfinite(lambda) || !std::isfinite(gamma)) {
        throw ArgumentError("SkewParams: lambda and gamma must be finite");
    }
    scale_ = std::hypot(1.0, lambda);
    delta0_ = gamma / scale_;
}

double azzalini_cdf(double x, double lambda) {
    require_not_nan(x, "azzalini_cdf");
    if (x == -kInf) return 0.0;
    if (x == kInf) return 1.0;
    return std_normal_cdf(x) - 2.0 * owen_t(x, lambda);
}

GsnDistribution::GsnDistribution(SkewParams params)
    : params_(params),
      corr_(-params.lambda() / params.scale()),
      norm_const_(std_normal_cdf(params.delta0())),
      log_norm_const_(std_normal_log_cdf(params.delta0())) {}

SamplingMethod GsnDistribution::sampling_method() const noexcept {
    return norm_const_ >= kMinAcceptance ? SamplingMethod::Rejection : SamplingMethod::Latent;
}

double GsnDistribution::pdf(double x) const {
    require_not_nan(x, "GsnDistribution::pdf");
    if (std::isinf(x)) return 0.0;
    if (params_.lambda() == 0.0) return std_normal_pdf(x);
    const double log_pdf = -0.5 * x * x - kLogSqrt2Pi +
                           std_normal_log_cdf(params_.lambda() * x + params_.gamma()) -
                           log_norm_const_;
    return std::exp(log_pdf);
}

double GsnDistribution::cdf(double x) const {
    require_not_nan(x, "GsnDistribution::cdf");
    // P(X <= x | U <= delta0)
    return bvn_conditional_cdf(params_.delta0(), x, corr_);
}

double GsnDistribution::survival(double x) const {
    require_not_nan(x, "GsnDistribution::survival");
    // P(-X < -x | U <= delta0); corr(-X, U) = -rho.
    return bvn_conditional_cdf(params_.delta0(), -x, corr_.negated());
}

double GsnDistribution::log_mgf_correction(double a) const {
    require_not_nan(a, "GsnDistribution::log_mgf_correction");
    if (params_.lambda() == 0.0 || a == 0.0) return 0.0;
    const double shifted = (params_.gamma() + params_.lambda() * a) / params_.scale();
    return std_normal_log_cdf(shifted) - log_norm_const_;
}

double GsnDistribution::mgf(double a) const {
    if (!std::isfinite(a)) {
        throw DomainError("GsnDistribution::mgf: argument must be finite");
    }
    const double exponent = 0.5 * a * a + log_mgf_correction(a);
    if (exponent > kMaxExponent) {
        throw RangeError("GsnDistribution::mgf: E[exp(aZ)] overflows double at a = " +
                         std::to_string(a) + " (log value " + std::to_string(exponent) + ")");
    }
    return std::exp(exponent);
}

// P(lo < X <= hi | U <= c), evaluated on whichever side of the median keeps
// the two conditional probabilities away from 1.
double GsnDistribution::interval_mass(double c, double lo, double hi) const {
    if (lo > 0.0) {
        const Correlation flipped = corr_.negated();
        return bvn_conditional_cdf(c, -lo, flipped) - bvn_conditional_cdf(c, -hi, flipped);
    }
    return bvn_conditional_cdf(c, hi, corr_) - bvn_conditional_cdf(c, lo, corr_);
}

double GsnDistribution::truncated_mgf(double s, double a, double b) const {
    if (!std::isfinite(s)) {
        throw DomainError("GsnDistribution::truncated_mgf: s must be finite");
    }
    require_not_nan(a, "GsnDistribution::truncated_mgf");
    require_not_nan(b, "GsnDistribution::truncated_mgf");
    if (!(a < b)) {
        throw ArgumentError("GsnDistribution::truncated_mgf: requires a < b");
    }
    const double mass = interval_mass(params_.delta0(), a, b);
    if (mass < 1e-300) {
        throw SingularTruncationError(
            "GsnDistribution::truncated_mgf: truncation interval has probability " +
            std::to_string(mass));
    }
    // Exponential tilting by e^{sX} shifts X by s and the bound on U to
    // (gamma + lambda s) / sqrt(1 + lambda^2).
    const double shifted_bound = (params_.gamma() + params_.lambda() * s) / params_.scale();
    const double tilted_mass = interval_mass(shifted_bound, a - s, b - s);
    const double exponent = 0.5 * s * s + log_mgf_correction(s);
    if (exponent > kMaxExponent) {
        throw RangeError("GsnDistribution::truncated_mgf: result overflows double");
    }
    return std::exp(exponent) * tilted_mass / mass;
}

double GsnDistribution::mean() const {
    // E[Z] = d/da mgf at 0 = lambda/sqrt(1+lambda^2) * phi(delta0)/Phi(delta0)
    const double log_hazard = -0.5 * params_.delta0() * params_.delta0() - kLogSqrt2Pi -
                              log_norm_const_;
    return params_.lambda() / params_.scale() * std::exp(log_hazard);
}

}  // namespace skewprice
