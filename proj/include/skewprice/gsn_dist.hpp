#pragma once

/**
 * @file gsn_dist.hpp
 * @brief Generalized skew-normal distribution SN(lambda, gamma).
 *
 * Density phi(x) Phi(lambda x + gamma) / Phi(gamma / sqrt(1 + lambda^2)).
 *
 * Everything below rests on the conditioning representation: with X, Y
 * independent standard normals, Z = X | (Y <= lambda X + gamma). Writing
 * U = (Y - lambda X) / sqrt(1 + lambda^2), the pair (X, U) is standard
 * bivariate normal with correlation -lambda / sqrt(1 + lambda^2) and the
 * conditioning event is U <= delta0 = gamma / sqrt(1 + lambda^2).
 */

#include <cmath>
#include <cstddef>
#include <random>
#include <vector>

#include "skewprice/normal_kernels.hpp"

namespace skewprice {

/// Shape pair (lambda, gamma) of the generalized skew-normal law.
class SkewParams {
public:
    /// Throws ArgumentError unless both values are finite.
    SkewParams(double lambda, double gamma);

    double lambda() const noexcept { return lambda_; }
    double gamma() const noexcept { return gamma_; }
    /// sqrt(1 + lambda^2)
    double scale() const noexcept { return scale_; }
    /// gamma / sqrt(1 + lambda^2)
    double delta0() const noexcept { return delta0_; }

    friend bool operator==(const SkewParams& a, const SkewParams& b) noexcept {
        return a.lambda_ == b.lambda_ && a.gamma_ == b.gamma_;
    }

private:
    double lambda_;
    double gamma_;
    double scale_;
    double delta0_;
};

enum class SamplingMethod {
    Rejection,  ///< accept X when Y <= lambda X + gamma
    Latent,     ///< draw U | U <= delta0 exactly, then X | U
};

struct SampleStats {
    std::size_t accepted = 0;
    std::size_t proposals = 0;
    SamplingMethod method = SamplingMethod::Rejection;
};

/// Cdf of Azzalini's SN(lambda): Phi(x) - 2 T(x, lambda).
double azzalini_cdf(double x, double lambda);

class GsnDistribution {
public:
    /// Below this acceptance probability the rejection sampler is replaced
    /// by the latent-variable sampler.
    static constexpr double kMinAcceptance = 1e-4;
    /// Acceptance probabilities below this are reported as an efficiency
    /// warning by callers that surface diagnostics.
    static constexpr double kWarnAcceptance = 1e-12;

    explicit GsnDistribution(SkewParams params);

    const SkewParams& params() const noexcept { return params_; }
    /// Phi(delta0), the density's normalizing constant.
    double norm_const() const noexcept { return norm_const_; }
    double log_norm_const() const noexcept { return log_norm_const_; }
    /// Correlation of (X, U): -lambda / sqrt(1 + lambda^2).
    Correlation latent_correlation() const noexcept { return corr_; }

    double pdf(double x) const;
    double cdf(double x) const;
    /// P(Z > x), evaluated through the complementary bivariate event rather
    /// than 1 - cdf(x).
    double survival(double x) const;

    /// E[exp(a Z)]. Throws RangeError when the result overflows.
    double mgf(double a) const;
    /// ln Phi((gamma + lambda a)/sqrt(1+lambda^2)) - ln Phi(delta0),
    /// i.e. ln mgf(a) - a^2/2, in log space.
    double log_mgf_correction(double a) const;
    /// E[exp(s Z) | a <= Z <= b]; a, b may be infinite.
    double truncated_mgf(double s, double a, double b) const;

    double mean() const;

    double acceptance_probability() const noexcept { return norm_const_; }
    SamplingMethod sampling_method() const noexcept;

    /// Draws n i.i.d. values (or antithetic-paired values, see below).
    ///
    /// Rejection proposals are standard normal pairs (X, Y). With
    /// `antithetic`, every proposal (X, Y) is followed by (-X, Y); both are
    /// exact SN proposals, so the accepted values keep the SN marginal while
    /// neighbouring draws become negatively correlated.
    template <class Urbg>
    std::vector<double> sample(Urbg& rng, std::size_t n, bool antithetic = false,
                               SampleStats* stats = nullptr) const;

private:
    double interval_mass(double c, double lo, double hi) const;
    template <class Urbg>
    double draw_latent_bound(Urbg& rng) const;

    SkewParams params_;
    Correlation corr_;
    double norm_const_;
    double log_norm_const_;
};

template <class Urbg>
double GsnDistribution::draw_latent_bound(Urbg& rng) const {
    const double c = params_.delta0();
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    if (c > -37.0) {
        // Inverse cdf of N(0,1) restricted to (-inf, c].
        double v = 0.0;
        do {
            v = unif(rng);
        } while (v <= 0.0);
        return std_normal_quantile(v * norm_const_);
    }
    // Marsaglia's exact tail sampler for U >= -c, reflected.
    const double a = -c;
    for (;;) {
        double u1 = 0.0;
        do {
            u1 = unif(rng);
        } while (u1 <= 0.0);
        const double u2 = unif(rng);
        const double x = std::sqrt(a * a - 2.0 * std::log(u1));
        if (u2 * x <= a) {
            return -x;
        }
    }
}

template <class Urbg>
std::vector<double> GsnDistribution::sample(Urbg& rng, std::size_t n, bool antithetic,
                                            SampleStats* stats) const {
    std::vector<double> out;
    out.reserve(n);
    std::normal_distribution<double> normal(0.0, 1.0);
    SampleStats local;
    local.method = sampling_method();

    const double lambda = params_.lambda();
    const double gamma = params_.gamma();

    if (local.method == SamplingMethod::Rejection) {
        while (out.size() < n) {
            const double x = normal(rng);
            const double y = normal(rng);
            ++local.proposals;
            if (y <= lambda * x + gamma) {
                out.push_back(x);
            }
            if (antithetic && out.size() < n) {
                ++local.proposals;
                if (y <= -lambda * x + gamma) {
                    out.push_back(-x);
                }
            }
        }
    } else {
        const double rho = corr_.value();
        const double s = std::sqrt((1.0 - rho) * (1.0 + rho));
        while (out.size() < n) {
            const double u = draw_latent_bound(rng);
            const double v = normal(rng);
            ++local.proposals;
            out.push_back(rho * u + s * v);
            if (antithetic && out.size() < n) {
                ++local.proposals;
                out.push_back(rho * u - s * v);
            }
        }
    }
    local.accepted = out.size();
    if (stats != nullptr) {
        *stats = local;
    }
    return out;
}

}  // namespace skewprice
