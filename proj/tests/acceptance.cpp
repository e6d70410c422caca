// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles/quadrature.hpp"
#include "skewprice/analysis.hpp"
#include "skewprice/cli.hpp"
#include "skewprice/gsn_dist.hpp"
#include "skewprice/mc_oracle.hpp"
#include "skewprice/normal_kernels.hpp"
#include "skewprice/pricer.hpp"

using namespace skewprice;

namespace {

const std::vector<double> kAxis{-2.0, -1.0, 0.0, 1.0, 2.0};

struct Check {
    bool ok = true;
    std::string detail;

    void require(bool cond, const std::string& what) {
        if (!cond && ok) detail = what;
        ok = ok && cond;
    }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, pattern, a, b, c);
    return buf;
}

// Every quote produced anywhere in the run lands here for the parity criterion.
std::vector<std::pair<MarketParams, PriceQuote>> g_quotes;

PriceQuote quote(const MarketParams& m, double l, double g) {
    const auto q = call_price(m, SkewParams(l, g));
    g_quotes.emplace_back(m, q);
    return q;
}

Check table_reproduction() {
    Check c;
    const auto t0 = std::chrono::steady_clock::now();
    const auto cmp = compare_with_reference();
    const double elapsed = seconds_since(t0);
    for (const auto& cell : cmp.cells) {
        c.require(std::abs(cell.deviation) <= 1e-3,
                  fmt("cell (%g, %g) off by %.3g", cell.lambda, cell.gamma, cell.deviation));
    }
    c.require(cmp.cells.size() == 25, "expected 25 cells");
    c.require(elapsed < 1.0, fmt("took %.3f s", elapsed));
    for (const auto& cell : benchmark_reference_prices()) quote(benchmark_market(), cell.lambda, cell.gamma);
    if (c.ok) c.detail = fmt("25/25 within 1e-3 in %.3f s", elapsed);
    return c;
}

Check black_scholes_reduction() {
    Check c;
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> spot(10, 200), strike(10, 200), rate(0, 0.2), sigma(0.05, 1.0),
        maturity(0.01, 5.0), gamma(-5, 5);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const MarketParams m(spot(rng), strike(rng), rate(rng), sigma(rng), maturity(rng));
        const double diff = std::abs(quote(m, 0.0, gamma(rng)).call - black_scholes_price(m));
        worst = std::max(worst, diff);
        c.require(diff <= 1e-10, fmt("set %g differs by %.3g", i, diff));
    }
    if (c.ok) c.detail = fmt("100 sets, max diff %.3g", worst);
    return c;
}

Check corrado_su_reduction() {
    Check c;
    double worst = 0.0;
    for (double k : {60.0, 100.0, 150.0}) {
        const auto m = benchmark_market().with_strike(k);
        for (int i = 0; i <= 40; ++i) {
            const double l = -5.0 + 0.25 * i;
            const double diff = std::abs(quote(m, l, 0.0).call - corrado_su_price(m, l));
            worst = std::max(worst, diff);
            c.require(diff <= 1e-12, fmt("K=%g lambda=%g differs by %.3g", k, l, diff));
        }
    }
    if (c.ok) c.detail = fmt("123 points, max diff %.3g", worst);
    return c;
}

Check quadrature_oracle() {
    Check c;
    const auto t0 = std::chrono::steady_clock::now();
    const auto base = benchmark_market();
    double worst = 0.0;
    for (double k : {50.0, 100.0, 200.0}) {
        const auto m = base.with_strike(k);
        for (double l : kAxis) {
            for (double g : kAxis) {
                const double ref = oracle::call_by_quadrature(m.spot(), k, m.rate(), m.sigma(), m.maturity(), l, g);
                const double rel = std::abs(quote(m, l, g).call / ref - 1.0);
                worst = std::max(worst, rel);
                c.require(rel <= 1e-8, fmt("K=%g (%g, %g)", k, l, g) + fmt(" rel err %.3g", rel));
            }
        }
    }
    const double elapsed = seconds_since(t0);
    c.require(elapsed < 30.0, fmt("took %.1f s", elapsed));
    if (c.ok) c.detail = fmt("75 points, max rel err %.3g in %.2f s", worst, elapsed);
    return c;
}

Check monte_carlo_oracle() {
    Check c;
    McConfig cfg;
    cfg.n_paths = 1'000'000;
    cfg.seed = 20240101;
    int call_hits = 0;
    int fwd_hits = 0;
    const auto m = benchmark_market();
    for (double l : kAxis) {
        for (double g : kAxis) {
            const SkewParams s(l, g);
            if (estimate_call(m, s, cfg).within(quote(m, l, g).call)) ++call_hits;
            if (martingale_check(m, s, cfg).within(m.spot())) ++fwd_hits;
        }
    }
    c.require(call_hits >= 24, fmt("call within 3 SE on %g/25", call_hits));
    c.require(fwd_hits >= 24, fmt("martingale within 3 SE on %g/25", fwd_hits));
    c.detail = fmt("call %g/25, martingale %g/25 within 3 SE", call_hits, fwd_hits);
    return c;
}

Check long_maturity_limit() {
    Check c;
    const auto m = benchmark_market().with_maturity(1e4);
    double lo = m.spot();
    for (double l : kAxis) {
        for (double g : kAxis) {
            const double v = quote(m, l, g).call;
            lo = std::min(lo, v);
            c.require(v >= 0.99 * m.spot() && v <= m.spot(), fmt("(%g, %g) gives %.10g", l, g, v));
        }
    }
    if (c.ok) c.detail = fmt("25 pairs, smallest call %.8g", lo);
    return c;
}

std::vector<double> grid50(double a, double b, bool log_spaced = false) {
    std::vector<double> v(50);
    for (int i = 0; i < 50; ++i) {
        const double f = i / 49.0;
        v[i] = log_spaced ? a * std::pow(b / a, f) : a + (b - a) * f;
    }
    return v;
}

Check shape_properties() {
    Check c;
    const auto base = benchmark_market();
    for (double l : kAxis) {
        for (double g : kAxis) {
            auto sweep = [&](const std::vector<double>& xs, const std::function<MarketParams(double)>& mk) {
                std::vector<double> v;
                for (double x : xs) v.push_back(quote(mk(x), l, g).call);
                return v;
            };
            const auto in_spot = sweep(grid50(50, 150), [&](double x) { return base.with_spot(x); });
            const auto in_strike = sweep(grid50(50, 150), [&](double x) { return base.with_strike(x); });
            const auto in_time = sweep(grid50(0.01, 100, true), [&](double x) { return base.with_maturity(x); });
            const std::string at = fmt(" at (%g, %g)", l, g);
            for (std::size_t i = 1; i < 50; ++i) {
                c.require(in_spot[i] - in_spot[i - 1] >= -1e-9, "spot monotonicity" + at);
                c.require(in_strike[i] - in_strike[i - 1] <= 1e-9, "strike monotonicity" + at);
                c.require(in_time[i] - in_time[i - 1] >= -1e-9, "maturity monotonicity" + at);
            }
            for (std::size_t i = 2; i < 50; ++i) {
                c.require(in_spot[i] - 2 * in_spot[i - 1] + in_spot[i - 2] >= -1e-7, "spot convexity" + at);
                c.require(in_strike[i] - 2 * in_strike[i - 1] + in_strike[i - 2] >= -1e-7, "strike convexity" + at);
            }
        }
    }
    if (c.ok) c.detail = "spot, strike and maturity sweeps on 25 skew pairs";
    return c;
}

Check qualitative_findings() {
    Check c;
    const auto report = monotonicity_report(benchmark_grid());
    c.require(report.all_confirmed(), "monotonicity report has an unconfirmed verdict");
    const auto m = benchmark_market();
    const double flat = quote(m, 0.0, 0.0).call;
    for (double g : kAxis) {
        const double diff = std::abs(quote(m, 0.0, g).call - flat);
        c.require(diff <= 1e-10, fmt("lambda=0 varies by %.3g at gamma=%g", diff, g));
    }
    if (c.ok) c.detail = "all row and column verdicts confirmed";
    return c;
}

Check kernel_accuracy() {
    Check c;
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> coord(-4.0, 4.0), corr(-0.99, 0.99);
    double worst_bvn = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double x = coord(rng), y = coord(rng), rho = corr(rng);
        const double diff = std::abs(bvn_cdf(x, y, Correlation(rho)) - oracle::bvn_cdf_2d(x, y, rho));
        worst_bvn = std::max(worst_bvn, diff);
        c.require(diff <= 1e-10, fmt("bvn at (%g, %g, rho=%g)", x, y, rho));
    }

    double worst_owen = 0.0;
    auto owen_check = [&](double got, double want, const std::string& what) {
        worst_owen = std::max(worst_owen, std::abs(got - want));
        c.require(std::abs(got - want) <= 1e-12, what);
    };
    for (double h : {0.0, 0.1, 0.5, 1.0, 2.0, 3.5}) {
        const double p = std::erfc(-h / std::sqrt(2.0)) / 2.0;
        owen_check(owen_t(h, 1.0), p * (1.0 - p) / 2.0, fmt("T(%g, 1)", h));
        owen_check(owen_t(h, 0.0), 0.0, fmt("T(%g, 0)", h));
        for (double a : {0.2, 0.7, 1.5, 4.0}) {
            owen_check(owen_t(-h, a), owen_t(h, a), fmt("T(-h, a) at (%g, %g)", h, a));
            owen_check(owen_t(h, -a), -owen_t(h, a), fmt("T(h, -a) at (%g, %g)", h, a));
            const double q = std::erfc(-a * h / std::sqrt(2.0)) / 2.0;
            owen_check(owen_t(h, a) + owen_t(a * h, 1.0 / a), (p + q) / 2.0 - p * q,
                       fmt("reciprocal identity at (%g, %g)", h, a));
        }
    }
    for (double a : {0.3, 1.0, 7.0}) {
        owen_check(owen_t(0.0, a), std::atan(a) / (2.0 * std::numbers::pi), fmt("T(0, %g)", a));
    }

    double worst_mass = 0.0;
    double worst_mgf = 0.0;
    for (double l : kAxis) {
        for (double g : kAxis) {
            const GsnDistribution d{SkewParams(l, g)};
            const double mass = oracle::integrate_pieces([&](double x) { return d.pdf(x); }, -oracle::kInf,
                                                         oracle::kInf, {-1.0, 0.0, 1.0});
            worst_mass = std::max(worst_mass, std::abs(mass - 1.0));
            c.require(std::abs(mass - 1.0) <= 1e-10, fmt("pdf mass %.15g at (%g, %g)", mass, l, g));
            for (double s : {-1.0, 0.3, 2.0}) {
                const double rel = std::abs(d.truncated_mgf(s, -oracle::kInf, oracle::kInf) / d.mgf(s) - 1.0);
                worst_mgf = std::max(worst_mgf, rel);
                c.require(rel <= 1e-12, fmt("truncated mgf at (%g, %g), s=%g", l, g, s));
            }
        }
    }
    if (c.ok) {
        c.detail = fmt("bvn %.2g, owen %.2g, ", worst_bvn, worst_owen) +
                   fmt("mass %.2g, mgf %.2g", worst_mass, worst_mgf);
    }
    return c;
}

Check determinism() {
    Check c;
    auto cli_out = [](std::vector<std::string> args) {
        std::ostringstream out, err;
        const int code = cli::run(args, out, err);
        return std::to_string(code) + "\n" + out.str();
    };
    const std::vector<std::string> table{"skewprice", "table1", "--format", "csv"};
    c.require(cli_out(table) == cli_out(table), "table1 csv differs between runs");
    const std::vector<std::string> mc{"skewprice", "mc", "--lambda", "1", "--gamma", "-1", "--paths", "100000",
                                      "--seed", "42", "--format", "csv"};
    c.require(cli_out(mc) == cli_out(mc), "mc csv differs between runs");

    McConfig cfg;
    cfg.n_paths = 200'000;
    cfg.seed = 99;
    for (bool anti : {false, true}) {
        cfg.antithetic = anti;
        const auto a = estimate_call(benchmark_market(), SkewParams(-2, 1), cfg);
        const auto b = estimate_call(benchmark_market(), SkewParams(-2, 1), cfg);
        c.require(a.mean == b.mean && a.std_error == b.std_error, "estimate_call differs between runs");
        const auto x = simulate_terminal(benchmark_market(), SkewParams(3, -40), cfg);
        const auto y = simulate_terminal(benchmark_market(), SkewParams(3, -40), cfg);
        c.require(x == y, "latent-regime paths differ between runs");
    }
    if (c.ok) c.detail = "table1 csv, mc csv and seeded estimates repeat exactly";
    return c;
}

Check put_call_parity() {
    Check c;
    double worst = 0.0;
    for (const auto& [m, q] : g_quotes) {
        const double forward = m.spot() - m.strike() * m.discount();
        const double residual = std::abs(q.put - q.call + forward);
        worst = std::max(worst, residual);
        c.require(residual <= 1e-12, fmt("residual %.3g at K=%g t=%g", residual, m.strike(), m.maturity()));
    }
    for (double l : kAxis) {
        for (double g : kAxis) {
            const auto m = benchmark_market();
            const double diff = std::abs(put_price_direct(m, SkewParams(l, g)) - quote(m, l, g).put);
            c.require(diff <= 1e-12, fmt("direct put differs by %.3g at (%g, %g)", diff, l, g));
        }
    }
    if (c.ok) c.detail = fmt("%g quotes, max residual %.3g", static_cast<double>(g_quotes.size()), worst);
    return c;
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        Check (*run)();
    };
    // Parity runs last so it covers every quote produced by the others.
    const Criterion criteria[] = {
        {1, "table reproduction", table_reproduction},
        {2, "Black-Scholes reduction", black_scholes_reduction},
        {3, "Corrado-Su reduction", corrado_su_reduction},
        {4, "quadrature oracle", quadrature_oracle},
        {5, "Monte Carlo oracle", monte_carlo_oracle},
        {7, "long-maturity limit", long_maturity_limit},
        {8, "shape properties", shape_properties},
        {9, "qualitative findings", qualitative_findings},
        {10, "kernel accuracy", kernel_accuracy},
        {11, "determinism", determinism},
        {6, "put-call parity", put_call_parity},
    };
    int failures = 0;
    for (const auto& cr : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        const Check c = cr.run();
        std::printf("%s criterion %2d %-24s %s (%.2f s)\n", c.ok ? "PASS" : "FAIL", cr.id, cr.name, c.detail.c_str(),
                    seconds_since(t0));
        std::fflush(stdout);
        if (!c.ok) ++failures;
    }
    std::printf("%d/11 criteria passed\n", 11 - failures);
    return failures == 0 ? 0 : 1;
}
