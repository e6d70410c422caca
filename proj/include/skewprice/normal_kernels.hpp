#pragma once

/**
 * @file normal_kernels.hpp
 * @brief Univariate and bivariate standard normal special functions.
 *
 * Every function here is pure and thread-safe. Infinite arguments are
 * accepted wherever the limit is well defined and are short-circuited
 * analytically; NaN arguments raise DomainError.
 */

namespace skewprice {

inline constexpr double kInvSqrt2Pi = 0.3989422804014327;  // 1/sqrt(2pi)
inline constexpr double kLogSqrt2Pi = 0.91893853320467274;  // ln(sqrt(2pi))

/// Correlation coefficient of a standard bivariate normal.
///
/// Values within 1e-12 outside [-1, 1] are clamped to +-1; anything further
/// out (or NaN) is rejected with DomainError.
class Correlation {
public:
    explicit Correlation(double rho);

    double value() const noexcept { return rho_; }
    Correlation negated() const noexcept { return Correlation(-rho_, Unchecked{}); }

private:
    struct Unchecked {};
    Correlation(double rho, Unchecked) noexcept : rho_(rho) {}

    double rho_;
};

/// phi(x) = exp(-x^2/2) / sqrt(2pi)
double std_normal_pdf(double x);

/// Phi(x). Accepts +-infinity.
double std_normal_cdf(double x);

/// ln Phi(x), finite for every finite x (asymptotic expansion below -37).
double std_normal_log_cdf(double x);

/// Inverse of Phi on (0, 1); returns -inf / +inf at 0 / 1.
double std_normal_quantile(double p);

/// Owen's T function T(h, a) = (1/2pi) int_0^a exp(-h^2(1+x^2)/2)/(1+x^2) dx.
double owen_t(double h, double a);

/// Phi_2(x, y; rho) = P(X <= x, Y <= y) for a standard bivariate normal.
///
/// Genz's Gauss-Legendre scheme: the Sheppard/Plackett integral over
/// asin(rho) for |rho| < 0.925 and the Drezner-Wesolowsky expansion around
/// |rho| = 1 otherwise. Absolute accuracy is close to machine precision.
double bvn_cdf(double x, double y, Correlation corr);

/// P(Y <= y | X <= x) = Phi_2(x, y; rho) / Phi(x).
///
/// Evaluated directly while Phi(x) has plenty of headroom, and by
/// integrating over the normal tail of X otherwise, so the ratio stays
/// accurate where Phi(x) itself underflows.
double bvn_conditional_cdf(double x, double y, Correlation corr);

}  // namespace skewprice
