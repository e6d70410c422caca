#include "skewprice/mc_oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <string>

#include "parallel.hpp"
#include "skewprice/errors.hpp"

namespace skewprice {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::mt19937_64 batch_engine(std::uint64_t seed, std::size_t batch) {
    const std::uint64_t a = splitmix64(seed);
    const std::uint64_t b = splitmix64(a ^ splitmix64(static_cast<std::uint64_t>(batch) + 1));
    std::seed_seq seq{static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32),
                      static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32)};
    return std::mt19937_64(seq);
}

std::size_t batch_size(std::size_t n, std::size_t batch) {
    return n / kMcBatches + (batch < n % kMcBatches ? 1 : 0);
}

struct BatchStats {
    std::size_t count = 0;
    double mean = 0.0;
    double m2 = 0.0;
};

BatchStats merge(const BatchStats& a, const BatchStats& b) {
    if (a.count == 0) return b;
    if (b.count == 0) return a;
    BatchStats out;
    out.count = a.count + b.count;
    const double delta = b.mean - a.mean;
    const double nb_over_n = static_cast<double>(b.count) / static_cast<double>(out.count);
    out.mean = a.mean + delta * nb_over_n;
    out.m2 = a.m2 + b.m2 + delta * delta * static_cast<double>(a.count) * nb_over_n;
    return out;
}

// Z draws of one batch, mapped to terminal prices.
std::vector<double> terminal_batch(const GsnDistribution& dist, const MarketParams& m,
                                   double drift, const McConfig& cfg, std::size_t batch) {
    auto rng = batch_engine(cfg.seed, batch);
    auto z = dist.sample(rng, batch_size(cfg.n_paths, batch), cfg.antithetic);
    const double vol = m.total_vol();
    for (double& v : z) {
        v = m.spot() * std::exp(drift + vol * v);
    }
    return z;
}

std::vector<std::string> sampler_warnings(const GsnDistribution& dist) {
    std::vector<std::string> out;
    if (dist.acceptance_probability() < GsnDistribution::kWarnAcceptance) {
        out.push_back("rejection acceptance probability " +
                      std::to_string(dist.acceptance_probability()) +
                      " is below 1e-12; sampled through the latent truncated normal instead");
    } else if (dist.sampling_method() == SamplingMethod::Latent) {
        out.push_back("low rejection acceptance probability; sampled through the latent truncated normal");
    }
    return out;
}

template <class Payoff>
McEstimate estimate(const MarketParams& m, const SkewParams& s, const McConfig& cfg,
                    Payoff payoff) {
    cfg.validate();
    const GsnDistribution dist(s);
    const double drift = mu_star(m, s) * m.maturity();

    std::array<BatchStats, kMcBatches> stats{};
    detail::parallel_for(kMcBatches, [&](std::size_t b) {
        BatchStats acc;
        for (const double st : terminal_batch(dist, m, drift, cfg, b)) {
            const double x = payoff(st);
            ++acc.count;
            const double delta = x - acc.mean;
            acc.mean += delta / static_cast<double>(acc.count);
            acc.m2 += delta * (x - acc.mean);
        }
        stats[b] = acc;
    });

    BatchStats total;
    for (const auto& b : stats) total = merge(total, b);

    McEstimate est;
    est.mean = total.mean;
    est.n_paths = total.count;
    est.seed_echo = cfg.seed;
    est.warnings = sampler_warnings(dist);
    const double n = static_cast<double>(total.count);
    if (!cfg.antithetic) {
        est.std_error = std::sqrt(total.m2 / (n - 1.0) / n);
    } else {
        // Antithetic draws are correlated within a batch; batches are
        // independent, so use the spread of batch means.
        double var_of_mean = 0.0;
        for (const auto& b : stats) {
            const double weight = static_cast<double>(b.count) / n;
            var_of_mean += weight * weight * (b.mean - total.mean) * (b.mean - total.mean);
        }
        var_of_mean *= static_cast<double>(kMcBatches) / static_cast<double>(kMcBatches - 1);
        est.std_error = std::sqrt(var_of_mean);
    }
    return est;
}

}  // namespace

void McConfig::validate() const {
    if (n_paths < kMinPaths) {
        throw ArgumentError("McConfig: n_paths must be at least " + std::to_string(kMinPaths));
    }
}

std::vector<double> simulate_terminal(const MarketParams& m, const SkewParams& s,
                                      const McConfig& cfg) {
    cfg.validate();
    const GsnDistribution dist(s);
    const double drift = mu_star(m, s) * m.maturity();
    std::array<std::vector<double>, kMcBatches> batches;
    detail::parallel_for(kMcBatches, [&](std::size_t b) {
        batches[b] = terminal_batch(dist, m, drift, cfg, b);
    });
    std::vector<double> out;
    out.reserve(cfg.n_paths);
    for (const auto& b : batches) out.insert(out.end(), b.begin(), b.end());
    return out;
}

McEstimate estimate_call(const MarketParams& m, const SkewParams& s, const McConfig& cfg) {
    const double discount = m.discount();
    const double strike = m.strike();
    return estimate(m, s, cfg,
                    [=](double st) { return discount * std::max(st - strike, 0.0); });
}

McEstimate martingale_check(const MarketParams& m, const SkewParams& s, const McConfig& cfg) {
    const double discount = m.discount();
    return estimate(m, s, cfg, [=](double st) { return discount * st; });
}

}  // namespace skewprice
