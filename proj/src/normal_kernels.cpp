#include "skewprice/normal_kernels.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/owens_t.hpp>

#include "skewprice/errors.hpp"

namespace skewprice {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_not_nan(double x, const char* what) {
    if (std::isnan(x)) {
        throw DomainError(std::string(what) + ": NaN argument");
    }
}

void require_finite(double x, const char* what) {
    if (!std::isfinite(x)) {
        throw DomainError(std::string(what) + ": argument must be finite");
    }
}

double phi_cdf(double x) { return 0.5 * std::erfc(-x * std::numbers::sqrt2 / 2.0); }

// Gauss-Legendre half-rules (6, 12 and 20 points); the other half is the
// mirror image of these nodes.
constexpr std::array<std::array<double, 10>, 3> kGlNodes{{
    {-9.3246951420315205e-01, -6.6120938646626448e-01, -2.3861918608319693e-01},
    {-9.8156063424671924e-01, -9.0411725637047480e-01, -7.6990267419430469e-01,
     -5.8731795428661748e-01, -3.6783149899818018e-01, -1.2523340851146891e-01},
    {-9.9312859918509488e-01, -9.6397192727791381e-01, -9.1223442825132584e-01,
     -8.3911697182221878e-01, -7.4633190646015080e-01, -6.3605368072651502e-01,
     -5.1086700195082713e-01, -3.7370608871541955e-01, -2.2778585114164510e-01,
     -7.6526521133497338e-02},
}};
constexpr std::array<std::array<double, 10>, 3> kGlWeights{{
    {1.7132449237916975e-01, 3.6076157304813894e-01, 4.6791393457269137e-01},
    {4.7175336386512022e-02, 1.0693932599531888e-01, 1.6007832854334611e-01,
     2.0316742672306565e-01, 2.3349253653835464e-01, 2.4914704581340269e-01},
    {1.7614007139153273e-02, 4.0601429800386217e-02, 6.2672048334109443e-02,
     8.3276741576704671e-02, 1.0193011981724026e-01, 1.1819453196151825e-01,
     1.3168863844917653e-01, 1.4209610931838187e-01, 1.4917298647260366e-01,
     1.5275338713072578e-01},
}};
constexpr std::array<int, 3> kGlHalfSize{3, 6, 10};

// Upper orthant probability P(X > h, Y > k) for finite h, k.
double bvn_upper(double h, double k, double r) {
    const double abs_r = std::abs(r);
    const int ng = abs_r < 0.3 ? 0 : (abs_r < 0.75 ? 1 : 2);
    const int lg = kGlHalfSize[ng];
    const auto& xg = kGlNodes[ng];
    const auto& wg = kGlWeights[ng];

    double hk = h * k;
    double bvn = 0.0;

    if (abs_r < 0.925) {
        const double hs = (h * h + k * k) / 2.0;
        const double asr = std::asin(r);
        for (int i = 0; i < lg; ++i) {
            double sn = std::sin(asr * (xg[i] + 1.0) / 2.0);
            bvn += wg[i] * std::exp((sn * hk - hs) / (1.0 - sn * sn));
            sn = std::sin(asr * (-xg[i] + 1.0) / 2.0);
            bvn += wg[i] * std::exp((sn * hk - hs) / (1.0 - sn * sn));
        }
        return bvn * asr / (2.0 * kTwoPi) + phi_cdf(-h) * phi_cdf(-k);
    }

    if (r < 0.0) {
        k = -k;
        hk = -hk;
    }
    if (abs_r < 1.0) {
        const double as = (1.0 - r) * (1.0 + r);
        double a = std::sqrt(as);
        const double bs = (h - k) * (h - k);
        const double c = (4.0 - hk) / 8.0;
        const double d = (12.0 - hk) / 16.0;
        bvn = a * std::exp(-(bs / as + hk) / 2.0) *
              (1.0 - c * (bs - as) * (1.0 - d * bs / 5.0) / 3.0 + c * d * as * as / 5.0);
        if (hk > -160.0) {
            const double b = std::sqrt(bs);
            bvn -= std::exp(-hk / 2.0) * std::sqrt(kTwoPi) * phi_cdf(-b / a) * b *
                   (1.0 - c * bs * (1.0 - d * bs / 5.0) / 3.0);
        }
        a /= 2.0;
        for (int i = 0; i < lg; ++i) {
            for (const double sign : {-1.0, 1.0}) {
                const double xs = std::pow(a * (sign * xg[i] + 1.0), 2);
                const double rs = std::sqrt(1.0 - xs);
                const double asr = -(bs / xs + hk) / 2.0;
                if (asr > -100.0) {
                    bvn += a * wg[i] * std::exp(asr) *
                           (std::exp(-hk * (1.0 - rs) / (2.0 * (1.0 + rs))) / rs -
                            (1.0 + c * xs * (1.0 + d * xs)));
                }
            }
        }
        bvn = -bvn / kTwoPi;
    }
    if (r > 0.0) {
        return bvn + phi_cdf(-std::max(h, k));
    }
    bvn = -bvn;
    if (k > h) {
        bvn += (h < 0.0) ? phi_cdf(k) - phi_cdf(h) : phi_cdf(-h) - phi_cdf(-k);
    }
    return bvn;
}

// Below this bound Phi(x) < 1e-15 and the absolute error of bvn_cdf would
// dominate the conditional ratio.
constexpr double kConditionalTailSwitch = -8.0;

// P(Y <= y | X <= x) for x far in the lower tail. With X = x - tau/m,
// m = -x, the conditional density of tau is proportional to
// exp(-tau - tau^2/(2 m^2)) on [0, inf).
double conditional_tail(double x, double y, double rho) {
    const double m = -x;
    if (rho >= 1.0) {
        return y >= x ? 1.0 : std::exp(std_normal_log_cdf(y) - std_normal_log_cdf(x));
    }
    if (rho <= -1.0) {
        // Y = -X: event is -y <= X <= x.
        if (-y >= x) return 0.0;
        return -std::expm1(std_normal_log_cdf(-y) - std_normal_log_cdf(x));
    }
    const double s = std::sqrt((1.0 - rho) * (1.0 + rho));
    // X = x - tau/m with tau >= 0 has density proportional to
    // exp(-tau - tau^2/(2m^2)). The integrand below is log-concave in tau.
    auto log_weight = [m](double tau) { return -tau - tau * tau / (2.0 * m * m); };
    auto log_f = [&](double tau) {
        return log_weight(tau) + std_normal_log_cdf((y - rho * (x - tau / m)) / s);
    };

    // Mode by golden-section search. Past the point where the conditional
    // probability switches on, the weight decays at least like exp(-tau).
    const double split = rho != 0.0 ? m * (x - y / rho) : 0.0;
    double lo = 0.0;
    double hi = std::max(split, 0.0) + 60.0;
    constexpr double kGolden = 0.6180339887498949;
    double c = hi - kGolden * (hi - lo);
    double d = lo + kGolden * (hi - lo);
    double fc = log_f(c);
    double fd = log_f(d);
    while (hi - lo > 1e-9 * (1.0 + hi)) {
        if (fc >= fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - kGolden * (hi - lo);
            fc = log_f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + kGolden * (hi - lo);
            fd = log_f(d);
        }
    }
    double mode = 0.5 * (lo + hi);
    double peak = log_f(mode);
    if (log_f(0.0) >= peak) {
        mode = 0.0;
        peak = log_f(0.0);
    }

    // Distance from the mode at which log_f has dropped by one; concavity
    // then bounds the drop at k widths by k.
    auto width = [&](double dir) {
        double step = 1e-6 * (1.0 + mode);
        while (log_f(mode + dir * step) > peak - 1.0) {
            if (dir < 0.0 && mode - step <= 0.0) return mode;
            step *= 2.0;
        }
        double inner = 0.0;
        double outer = step;
        for (int i = 0; i < 60; ++i) {
            const double mid = 0.5 * (inner + outer);
            (log_f(mode + dir * mid) > peak - 1.0 ? inner : outer) = mid;
        }
        return outer;
    };

    using Gk = boost::math::quadrature::gauss_kronrod<double, 31>;
    auto scaled = [&](double tau) { return std::exp(log_f(tau) - peak); };
    constexpr std::array<double, 6> kMultiples = {1.0, 4.0, 16.0, 64.0, 256.0, 800.0};
    double num = 0.0;
    const double wr = width(1.0);
    double prev = mode;
    for (double k : kMultiples) {
        const double next = mode + k * wr;
        num += Gk::integrate(scaled, prev, next, 8, 1e-13);
        prev = next;
    }
    if (mode > 0.0) {
        const double wl = width(-1.0);
        prev = mode;
        for (double k : kMultiples) {
            const double next = std::max(mode - k * wl, 0.0);
            num += Gk::integrate(scaled, next, prev, 8, 1e-13);
            prev = next;
            if (next == 0.0) break;
        }
    }
    // int_0^inf exp(log_weight) = m Phi(x) / phi(x)
    const double log_den = std::log(m) + std_normal_log_cdf(x) + 0.5 * m * m + kLogSqrt2Pi;
    return std::clamp(std::exp(peak + std::log(num) - log_den), 0.0, 1.0);
}

}  // namespace

Correlation::Correlation(double rho) {
    if (std::isnan(rho) || std::abs(rho) > 1.0 + 1e-12) {
        throw DomainError("Correlation: value outside [-1, 1]");
    }
    rho_ = std::clamp(rho, -1.0, 1.0);
}

double std_normal_pdf(double x) {
    require_finite(x, "std_normal_pdf");
    return kInvSqrt2Pi * std::exp(-0.5 * x * x);
}

double std_normal_cdf(double x) {
    require_not_nan(x, "std_normal_cdf");
    return phi_cdf(x);
}

double std_normal_log_cdf(double x) {
    require_not_nan(x, "std_normal_log_cdf");
    if (x == kInf) return 0.0;
    if (x == -kInf) return -kInf;
    if (x > 0.0) return std::log1p(-phi_cdf(-x));
    if (x >= -37.0) return std::log(phi_cdf(x));
    // Mills-ratio expansion: Phi(x) ~ phi(x)/|x| * sum_n (-1)^n (2n-1)!! / x^(2n)
    const double inv_x2 = 1.0 / (x * x);
    double term = 1.0;
    double series = 1.0;
    for (int n = 1; n < 12; ++n) {
        term *= -(2.0 * n - 1.0) * inv_x2;
        series += term;
    }
    return -0.5 * x * x - std::log(-x) - kLogSqrt2Pi + std::log(series);
}

double std_normal_quantile(double p) {
    if (std::isnan(p) || p < 0.0 || p > 1.0) {
        throw DomainError("std_normal_quantile: probability outside [0, 1]");
    }
    if (p == 0.0) return -kInf;
    if (p == 1.0) return kInf;
    return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
}

double owen_t(double h, double a) {
    require_finite(h, "owen_t");
    require_finite(a, "owen_t");
    return boost::math::owens_t(h, a);
}

double bvn_cdf(double x, double y, Correlation corr) {
    require_not_nan(x, "bvn_cdf");
    require_not_nan(y, "bvn_cdf");
    if (x == -kInf || y == -kInf) return 0.0;
    if (x == kInf) return phi_cdf(y);
    if (y == kInf) return phi_cdf(x);
    const double rho = corr.value();
    if (rho == 0.0) return phi_cdf(x) * phi_cdf(y);
    return std::clamp(bvn_upper(-x, -y, rho), 0.0, 1.0);
}

double bvn_conditional_cdf(double x, double y, Correlation corr) {
    require_not_nan(x, "bvn_conditional_cdf");
    require_not_nan(y, "bvn_conditional_cdf");
    if (x == -kInf) {
        throw DomainError("bvn_conditional_cdf: conditioning event has zero probability");
    }
    if (y == -kInf) return 0.0;
    if (y == kInf) return 1.0;
    if (corr.value() == 0.0) return phi_cdf(y);
    if (x >= kConditionalTailSwitch) {
        return std::clamp(bvn_cdf(x, y, corr) / phi_cdf(x), 0.0, 1.0);
    }
    return conditional_tail(x, y, corr.value());
}

}  // namespace skewprice
