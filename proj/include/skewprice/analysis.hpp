#pragma once

/**
 * @file analysis.hpp
 * @brief Parameter sweeps over (lambda, gamma), numerical sensitivities,
 * qualitative shape checks and result serialization.
 */

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "skewprice/pricer.hpp"

namespace skewprice {

struct GridSpec {
    MarketParams market;
    std::vector<double> lambda_axis;
    std::vector<double> gamma_axis;

    /// Throws ArgumentError unless both axes are nonempty, finite and
    /// strictly increasing.
    void validate() const;
};

struct GridRow {
    double lambda = 0.0;
    double gamma = 0.0;
    double call = 0.0;
    double put = 0.0;
    double w = 0.0;
    double mu_star = 0.0;
    /// Empty unless the cell failed; the numeric fields are NaN then.
    std::string error;

    bool ok() const noexcept { return error.empty(); }
};

struct Provenance {
    std::string method;
    std::string timestamp;  ///< ISO-8601 UTC
    std::string version;
};

struct GridResult {
    GridSpec spec;
    std::vector<GridRow> rows;  ///< lambda-major
    Provenance provenance;
};

/// ISO-8601 UTC rendering of a Unix time.
std::string iso8601_utc(long long unix_seconds);

/// Prices every cell of the grid, lambda-major. Cell failures are recorded
/// in the row instead of aborting. The provenance timestamp is taken from
/// `timestamp` when given, otherwise from the system clock.
GridResult evaluate_grid(const GridSpec& spec, std::optional<std::string> timestamp = {});

GridRow evaluate_cell(const MarketParams& market, double lambda, double gamma);

// ---------------------------------------------------------------------------
// Benchmark table
// ---------------------------------------------------------------------------

/// S(0) = 100, K = 100, r = 0.1, sigma^2 = 0.4, t = 0.25.
MarketParams benchmark_market();

/// The 5 x 5 benchmark grid, lambda and gamma in {-2, -1, 0, 1, 2}.
GridSpec benchmark_grid();

struct ReferenceCell {
    double lambda;
    double gamma;
    double call;
};

/// Published call prices at the benchmark, lambda-major.
const std::vector<ReferenceCell>& benchmark_reference_prices();

inline constexpr double kReferenceTolerance = 1e-3;

struct TableCellComparison {
    double lambda = 0.0;
    double gamma = 0.0;
    double computed = 0.0;
    double reference = 0.0;
    double deviation = 0.0;  ///< computed - reference
    bool pass = false;
};

struct TableComparison {
    std::vector<TableCellComparison> cells;
    double tolerance = kReferenceTolerance;

    std::size_t passed() const;
    bool all_pass() const { return passed() == cells.size(); }
};

using CallPricer = std::function<double(const MarketParams&, const SkewParams&)>;

/// Compares `pricer` (the closed form by default) with the published table.
TableComparison compare_with_reference(const CallPricer& pricer = {});

// ---------------------------------------------------------------------------
// Sensitivities and shape checks
// ---------------------------------------------------------------------------

enum class SkewAxis { Lambda, Gamma };

inline constexpr double kDefaultSensitivityStep = 1e-4;

/// Central difference [C(x + h) - C(x - h)] / (2h) in lambda or gamma.
double numerical_sensitivity(const MarketParams& m, const SkewParams& s, SkewAxis which,
                             double h = kDefaultSensitivityStep);

struct GammaRowVerdict {
    double gamma = 0.0;
    bool max_at_zero_lambda = false;
    bool decreasing_in_abs_lambda = false;
    bool below_black_scholes = false;  ///< for every lambda != 0
};

struct LambdaColumnVerdict {
    double lambda = 0.0;
    bool increasing_in_gamma = false;  ///< only meaningful for lambda != 0
    bool constant_in_gamma = false;    ///< only meaningful for lambda == 0
};

struct MonotonicityReport {
    std::vector<GammaRowVerdict> rows;
    std::vector<LambdaColumnVerdict> columns;

    bool all_confirmed() const;
};

/// Requires a lambda axis symmetric about 0 that contains 0; throws
/// ArgumentError otherwise.
MonotonicityReport monotonicity_report(const GridSpec& spec);

// ---------------------------------------------------------------------------
// Export
// ---------------------------------------------------------------------------

enum class ExportFormat { Csv, Json, PlotData };

/// 15 significant digits, '.' decimal separator, independent of locale.
std::string format_number(double value);

void export_result(const GridResult& result, ExportFormat format, std::ostream& out);

/// Writes the export to `path`. Throws IoError naming the path on failure.
void export_result_to_file(const GridResult& result, ExportFormat format,
                           const std::string& path);

/// Parses the CSV export back into rows.
std::vector<GridRow> parse_csv(std::istream& in);

}  // namespace skewprice
