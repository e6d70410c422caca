#include "skewprice/analysis.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "parallel.hpp"
#include "skewprice/errors.hpp"
#include "skewprice/version.hpp"

namespace skewprice {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr char kCsvHeader[] = "lambda,gamma,call,put,w,mu_star";

void validate_axis(const std::vector<double>& axis, const char* name) {
    if (axis.empty()) {
        throw ArgumentError(std::string("GridSpec: ") + name + " is empty");
    }
    for (std::size_t i = 0; i < axis.size(); ++i) {
        if (!std::isfinite(axis[i])) {
            throw ArgumentError(std::string("GridSpec: ") + name + " has a non-finite entry");
        }
        if (i > 0 && !(axis[i] > axis[i - 1])) {
            throw ArgumentError(std::string("GridSpec: ") + name + " must be strictly increasing");
        }
    }
}

nlohmann::json number_or_null(double v) {
    return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

}  // namespace

void GridSpec::validate() const {
    validate_axis(lambda_axis, "lambda axis");
    validate_axis(gamma_axis, "gamma axis");
}

std::string iso8601_utc(long long unix_seconds) {
    const std::time_t t = static_cast<std::time_t>(unix_seconds);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

GridRow evaluate_cell(const MarketParams& market, double lambda, double gamma) {
    GridRow row;
    row.lambda = lambda;
    row.gamma = gamma;
    try {
        const auto q = call_price(market, SkewParams(lambda, gamma));
        row.call = q.call;
        row.put = q.put;
        row.w = q.w;
        row.mu_star = q.mu_star;
    } catch (const std::exception& e) {
        row.call = row.put = row.w = row.mu_star = kNaN;
        row.error = e.what();
    }
    return row;
}

GridResult evaluate_grid(const GridSpec& spec, std::optional<std::string> timestamp) {
    spec.validate();
    const std::size_t n_gamma = spec.gamma_axis.size();
    GridResult result{spec, {}, {}};
    result.rows.resize(spec.lambda_axis.size() * n_gamma);
    detail::parallel_for(result.rows.size(), [&](std::size_t i) {
        result.rows[i] =
            evaluate_cell(spec.market, spec.lambda_axis[i / n_gamma], spec.gamma_axis[i % n_gamma]);
    });
    if (!timestamp) {
        const auto now = std::chrono::system_clock::now();
        timestamp = iso8601_utc(
            std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch()).count());
    }
    result.provenance = {.method = std::string(to_string(PricingMethod::General)),
                         .timestamp = *timestamp,
                         .version = kVersion};
    return result;
}

MarketParams benchmark_market() { return MarketParams::from_variance(100.0, 100.0, 0.1, 0.4, 0.25); }

GridSpec benchmark_grid() {
    const std::vector<double> axis{-2.0, -1.0, 0.0, 1.0, 2.0};
    return GridSpec{.market = benchmark_market(), .lambda_axis = axis, .gamma_axis = axis};
}

const std::vector<ReferenceCell>& benchmark_reference_prices() {
    static const std::vector<ReferenceCell> cells = [] {
        // rows: gamma = -2 .. 2, columns: lambda = -2 .. 2
        constexpr double table[5][5] = {
            {8.702112, 10.69672, 13.68113, 10.75255, 8.857459},
            {9.188333, 10.99278, 13.68113, 11.08288, 9.406439},
            {9.805336, 11.45179, 13.68113, 11.59007, 10.09846},
            {10.55043, 12.09882, 13.68113, 12.27943, 10.91346},
            {11.37726, 12.8264, 13.68113, 12.99414, 11.7723},
        };
        std::vector<ReferenceCell> out;
        for (int li = 0; li < 5; ++li) {
            for (int gi = 0; gi < 5; ++gi) {
                out.push_back({static_cast<double>(li - 2), static_cast<double>(gi - 2), table[gi][li]});
            }
        }
        return out;
    }();
    return cells;
}

std::size_t TableComparison::passed() const {
    return static_cast<std::size_t>(
        std::count_if(cells.begin(), cells.end(), [](const auto& c) { return c.pass; }));
}

TableComparison compare_with_reference(const CallPricer& pricer) {
    const CallPricer price = pricer ? pricer : [](const MarketParams& m, const SkewParams& s) {
        return call_price(m, s).call;
    };
    const MarketParams market = benchmark_market();
    TableComparison out;
    for (const auto& ref : benchmark_reference_prices()) {
        TableCellComparison cell{.lambda = ref.lambda, .gamma = ref.gamma, .reference = ref.call};
        try {
            cell.computed = price(market, SkewParams(ref.lambda, ref.gamma));
        } catch (const std::exception&) {
            cell.computed = kNaN;
        }
        cell.deviation = cell.computed - cell.reference;
        cell.pass = std::abs(cell.deviation) <= out.tolerance;
        out.cells.push_back(cell);
    }
    return out;
}

double numerical_sensitivity(const MarketParams& m, const SkewParams& s, SkewAxis which, double h) {
    if (!(h > 0.0) || !std::isfinite(h)) {
        throw ArgumentError("numerical_sensitivity: step must be positive");
    }
    const double dl = which == SkewAxis::Lambda ? h : 0.0;
    const double dg = which == SkewAxis::Gamma ? h : 0.0;
    const double up = call_price(m, SkewParams(s.lambda() + dl, s.gamma() + dg)).call;
    const double down = call_price(m, SkewParams(s.lambda() - dl, s.gamma() - dg)).call;
    return (up - down) / (2.0 * h);
}

bool MonotonicityReport::all_confirmed() const {
    const bool rows_ok = std::all_of(rows.begin(), rows.end(), [](const auto& r) {
        return r.max_at_zero_lambda && r.decreasing_in_abs_lambda && r.below_black_scholes;
    });
    const bool cols_ok = std::all_of(columns.begin(), columns.end(), [](const auto& c) {
        return c.lambda == 0.0 ? c.constant_in_gamma : c.increasing_in_gamma;
    });
    return rows_ok && cols_ok;
}

MonotonicityReport monotonicity_report(const GridSpec& spec) {
    spec.validate();
    const auto& lambdas = spec.lambda_axis;
    const auto& gammas = spec.gamma_axis;
    const bool has_zero = std::find(lambdas.begin(), lambdas.end(), 0.0) != lambdas.end();
    const bool symmetric = std::all_of(lambdas.begin(), lambdas.end(), [&](double l) {
        return std::find(lambdas.begin(), lambdas.end(), -l) != lambdas.end();
    });
    if (!has_zero || !symmetric) {
        throw ArgumentError("monotonicity_report: lambda axis must be symmetric and contain 0");
    }

    const GridResult grid = evaluate_grid(spec, std::string{});
    const std::size_t n_gamma = gammas.size();
    auto call_at = [&](std::size_t li, std::size_t gi) { return grid.rows[li * n_gamma + gi].call; };
    const auto zero_index =
        static_cast<std::size_t>(std::find(lambdas.begin(), lambdas.end(), 0.0) - lambdas.begin());
    const double bs = black_scholes_price(spec.market);
    // NaN cells make every comparison below false, which is the intended verdict.

    MonotonicityReport report;
    for (std::size_t gi = 0; gi < n_gamma; ++gi) {
        GammaRowVerdict v{.gamma = gammas[gi]};
        const double at_zero = call_at(zero_index, gi);
        v.max_at_zero_lambda = true;
        v.below_black_scholes = true;
        for (std::size_t li = 0; li < lambdas.size(); ++li) {
            const double c = call_at(li, gi);
            if (!(c <= at_zero + 1e-12)) v.max_at_zero_lambda = false;
            if (li != zero_index && !(c < bs)) v.below_black_scholes = false;
        }
        v.decreasing_in_abs_lambda = true;
        // Walk outwards from lambda = 0 on both sides.
        for (std::size_t li = zero_index + 1; li < lambdas.size(); ++li) {
            if (!(call_at(li, gi) <= call_at(li - 1, gi) + 1e-12)) v.decreasing_in_abs_lambda = false;
        }
        for (std::size_t li = zero_index; li-- > 0;) {
            if (!(call_at(li, gi) <= call_at(li + 1, gi) + 1e-12)) v.decreasing_in_abs_lambda = false;
        }
        report.rows.push_back(v);
    }
    for (std::size_t li = 0; li < lambdas.size(); ++li) {
        LambdaColumnVerdict v{.lambda = lambdas[li]};
        double lo = call_at(li, 0);
        double hi = lo;
        v.increasing_in_gamma = std::isfinite(lo);
        for (std::size_t gi = 1; gi < n_gamma; ++gi) {
            const double c = call_at(li, gi);
            if (!(c > call_at(li, gi - 1))) v.increasing_in_gamma = false;
            lo = std::min(lo, c);
            hi = std::max(hi, c);
        }
        v.constant_in_gamma = (hi - lo) <= 1e-10;
        report.columns.push_back(v);
    }
    return report;
}

std::string format_number(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 15);
    return std::string(buf, res.ptr);
}

void export_result(const GridResult& result, ExportFormat format, std::ostream& out) {
    switch (format) {
        case ExportFormat::Csv: {
            out << kCsvHeader << '\n';
            for (const auto& r : result.rows) {
                out << format_number(r.lambda) << ',' << format_number(r.gamma) << ','
                    << format_number(r.call) << ',' << format_number(r.put) << ','
                    << format_number(r.w) << ',' << format_number(r.mu_star) << '\n';
            }
            break;
        }
        case ExportFormat::Json: {
            const auto& m = result.spec.market;
            nlohmann::ordered_json doc;
            doc["params"] = {{"spot", m.spot()},
                             {"strike", m.strike()},
                             {"rate", m.rate()},
                             {"sigma", m.sigma()},
                             {"maturity", m.maturity()},
                             {"lambda_axis", result.spec.lambda_axis},
                             {"gamma_axis", result.spec.gamma_axis}};
            auto rows = nlohmann::ordered_json::array();
            for (const auto& r : result.rows) {
                nlohmann::ordered_json row{{"lambda", r.lambda},
                                           {"gamma", r.gamma},
                                           {"call", number_or_null(r.call)},
                                           {"put", number_or_null(r.put)},
                                           {"w", number_or_null(r.w)},
                                           {"mu_star", number_or_null(r.mu_star)}};
                if (!r.ok()) row["error"] = r.error;
                rows.push_back(std::move(row));
            }
            doc["rows"] = std::move(rows);
            doc["provenance"] = {{"method", result.provenance.method},
                                 {"timestamp", result.provenance.timestamp},
                                 {"version", result.provenance.version}};
            out << doc.dump(2) << '\n';
            break;
        }
        case ExportFormat::PlotData: {
            // One (lambda, call) series per gamma value.
            std::map<double, nlohmann::ordered_json> by_gamma;
            for (const auto& r : result.rows) {
                by_gamma[r.gamma].push_back({r.lambda, number_or_null(r.call)});
            }
            nlohmann::ordered_json doc;
            doc["x"] = "lambda";
            doc["y"] = "call";
            doc["series"] = nlohmann::ordered_json::array();
            for (auto& [gamma, points] : by_gamma) {
                doc["series"].push_back({{"gamma", gamma}, {"points", std::move(points)}});
            }
            out << doc.dump(2) << '\n';
            break;
        }
    }
}

void export_result_to_file(const GridResult& result, ExportFormat format, const std::string& path) {
    std::ofstream file(path, std::ios::binary);
    if (!file) {
        throw IoError("cannot open '" + path + "' for writing");
    }
    export_result(result, format, file);
    file.flush();
    if (!file) {
        throw IoError("failed writing '" + path + "'");
    }
}

std::vector<GridRow> parse_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader) {
        throw ArgumentError("parse_csv: missing or unexpected header");
    }
    std::vector<GridRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        double fields[6];
        const char* p = line.data();
        const char* end = line.data() + line.size();
        for (int i = 0; i < 6; ++i) {
            const auto res = std::from_chars(p, end, fields[i]);
            if (res.ec != std::errc{}) {
                throw ArgumentError("parse_csv: malformed number in line '" + line + "'");
            }
            p = res.ptr;
            if (i < 5) {
                if (p == end || *p != ',') {
                    throw ArgumentError("parse_csv: expected 6 fields in line '" + line + "'");
                }
                ++p;
            }
        }
        if (p != end) {
            throw ArgumentError("parse_csv: trailing data in line '" + line + "'");
        }
        rows.push_back(GridRow{fields[0], fields[1], fields[2], fields[3], fields[4], fields[5], {}});
    }
    return rows;
}

}  // namespace skewprice
