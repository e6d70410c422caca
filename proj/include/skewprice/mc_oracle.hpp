#pragma once

/**
 * @file mc_oracle.hpp
 * @brief Monte Carlo estimates under the martingale measure.
 *
 * Paths are split into a fixed number of batches. Batch b draws from its own
 * generator seeded by a SplitMix64 hash of (seed, b), and batch results are
 * reduced in index order, so estimates are bit-identical for a given
 * (seed, n_paths) regardless of how many threads ran the batches.
 */

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "skewprice/pricer.hpp"

namespace skewprice {

struct McConfig {
    static constexpr std::size_t kMinPaths = 1000;

    std::size_t n_paths = 1'000'000;
    std::uint64_t seed = 20240101;
    /// Pair every rejection proposal with its reflection. Changes the
    /// variance only; the estimator stays unbiased either way.
    bool antithetic = false;

    /// Throws ArgumentError when n_paths < kMinPaths.
    void validate() const;
};

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t n_paths = 0;
    std::uint64_t seed_echo = 0;
    std::vector<std::string> warnings;

    double z_score(double target) const { return (mean - target) / std_error; }
    bool within(double target, double n_std_errors = 3.0) const {
        return std::abs(mean - target) <= n_std_errors * std_error;
    }
};

/// Number of independently seeded batches a run is split into.
inline constexpr std::size_t kMcBatches = 64;

/// S(t) = S(0) exp(mu_star t + sigma sqrt(t) Z) for n_paths draws of Z.
std::vector<double> simulate_terminal(const MarketParams& m, const SkewParams& s,
                                      const McConfig& cfg);

/// Mean and standard error of e^{-rt} (S(t) - K)^+.
McEstimate estimate_call(const MarketParams& m, const SkewParams& s, const McConfig& cfg);

/// Mean and standard error of e^{-rt} S(t); should match S(0).
McEstimate martingale_check(const MarketParams& m, const SkewParams& s, const McConfig& cfg);

}  // namespace skewprice
