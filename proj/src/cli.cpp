#include "skewprice/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <utility>

#include "CLI11.hpp"
#include "json.hpp"
#include "skewprice/analysis.hpp"
#include "skewprice/errors.hpp"
#include "skewprice/mc_oracle.hpp"
#include "skewprice/pricer.hpp"

namespace skewprice::cli {

namespace {

constexpr double kParityTolerance = 1e-12;
constexpr double kMcZLimit = 3.0;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Format { Human, Csv, Json, Plot };

// Strict, locale-independent number parsing: the whole token must be consumed.
double parse_double(const std::string& text, const std::string& flag) {
    double value = 0.0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    if (begin != end && *begin == '+') ++begin;
    const auto res = std::from_chars(begin, end, value);
    if (res.ec != std::errc{} || res.ptr != end) {
        throw UsageError("invalid number for " + flag + ": '" + text + "'");
    }
    return value;
}

template <class Int>
Int parse_integer(const std::string& text, const std::string& flag) {
    Int value{};
    const char* end = text.data() + text.size();
    const auto res = std::from_chars(text.data(), end, value);
    if (res.ec != std::errc{} || res.ptr != end) {
        throw UsageError("invalid integer for " + flag + ": '" + text + "'");
    }
    return value;
}

std::vector<double> parse_list(const std::string& text, const std::string& flag) {
    std::vector<double> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t comma = text.find(',', start);
        const std::size_t stop = comma == std::string::npos ? text.size() : comma;
        out.push_back(parse_double(text.substr(start, stop - start), flag));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

Format resolve_format(const std::string& flag_value, bool allow_plot) {
    std::string value = flag_value;
    if (value.empty()) {
        const char* env = std::getenv(kFormatEnv);
        value = (env != nullptr && *env != '\0') ? env : "human";
    }
    if (value == "human") return Format::Human;
    if (value == "csv") return Format::Csv;
    if (value == "json") return Format::Json;
    if (value == "plot" && allow_plot) return Format::Plot;
    throw UsageError("unsupported output format '" + value + "'");
}

struct MarketFlags {
    std::string s0;
    std::string strike;
    std::string rate;
    std::string sigma;
    std::string variance;
    std::string maturity;

    void attach(CLI::App* sub) {
        sub->add_option("--s0", s0, "spot price S(0)")->required();
        sub->add_option("--strike", strike, "strike K")->required();
        sub->add_option("--rate", rate, "riskless continuously compounded rate r")->required();
        auto* sig = sub->add_option("--sigma", sigma, "volatility sigma");
        auto* var = sub->add_option("--variance", variance, "variance sigma^2 (instead of --sigma)");
        sig->excludes(var);
        sub->add_option("--maturity", maturity, "time to expiry t")->required();
    }

    MarketParams build() const {
        const double spot = parse_double(s0, "--s0");
        const double k = parse_double(strike, "--strike");
        const double r = parse_double(rate, "--rate");
        const double t = parse_double(maturity, "--maturity");
        if (!sigma.empty()) return MarketParams(spot, k, r, parse_double(sigma, "--sigma"), t);
        if (!variance.empty()) {
            return MarketParams::from_variance(spot, k, r, parse_double(variance, "--variance"), t);
        }
        throw UsageError("one of --sigma or --variance is required");
    }
};

struct SkewFlags {
    std::string lambda;
    std::string gamma;

    void attach(CLI::App* sub) {
        sub->add_option("--lambda", lambda, "skew shape lambda")->required();
        sub->add_option("--gamma", gamma, "skew shift gamma")->required();
    }

    SkewParams build() const {
        return SkewParams(parse_double(lambda, "--lambda"), parse_double(gamma, "--gamma"));
    }
};

nlohmann::ordered_json market_json(const MarketParams& m) {
    return {{"spot", m.spot()},       {"strike", m.strike()}, {"rate", m.rate()},
            {"sigma", m.sigma()},     {"maturity", m.maturity()}};
}

// Aligned "key value" lines for human output.
void print_pairs(std::ostream& out, const std::vector<std::pair<std::string, std::string>>& pairs) {
    std::size_t width = 0;
    for (const auto& [k, v] : pairs) width = std::max(width, k.size());
    for (const auto& [k, v] : pairs) {
        out << std::left << std::setw(static_cast<int>(width) + 2) << k << v << '\n';
    }
}

void print_csv(std::ostream& out, const std::vector<std::pair<std::string, std::string>>& pairs) {
    for (std::size_t i = 0; i < pairs.size(); ++i) out << (i ? "," : "") << pairs[i].first;
    out << '\n';
    for (std::size_t i = 0; i < pairs.size(); ++i) out << (i ? "," : "") << pairs[i].second;
    out << '\n';
}

// ---------------------------------------------------------------------------

int run_price(const MarketFlags& mf, const SkewFlags& sf, const std::string& fmt, std::ostream& out) {
    const Format format = resolve_format(fmt, false);
    const auto q = call_price(mf.build(), sf.build());
    const std::vector<std::pair<std::string, std::string>> pairs{
        {"method", std::string(to_string(q.method))},
        {"call", format_number(q.call)},
        {"put", format_number(q.put)},
        {"w", format_number(q.w)},
        {"mu_star", format_number(q.mu_star)},
    };
    if (format == Format::Json) {
        nlohmann::ordered_json doc{{"method", to_string(q.method)},
                                   {"call", q.call},
                                   {"put", q.put},
                                   {"w", q.w},
                                   {"mu_star", q.mu_star},
                                   {"market", market_json(q.market)},
                                   {"skew", {{"lambda", q.skew.lambda()}, {"gamma", q.skew.gamma()}}}};
        out << doc.dump(2) << '\n';
    } else if (format == Format::Csv) {
        print_csv(out, pairs);
    } else {
        print_pairs(out, pairs);
    }
    return kOk;
}

int run_grid(const MarketFlags& mf, const std::string& lambdas, const std::string& gammas,
             const std::string& fmt, const std::string& output, std::ostream& out) {
    const Format format = resolve_format(fmt, true);
    const GridSpec spec{.market = mf.build(),
                        .lambda_axis = parse_list(lambdas, "--lambdas"),
                        .gamma_axis = parse_list(gammas, "--gammas")};
    std::optional<std::string> timestamp;
    if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH"); epoch != nullptr && *epoch != '\0') {
        timestamp = iso8601_utc(parse_integer<long long>(epoch, "SOURCE_DATE_EPOCH"));
    }
    const GridResult result = evaluate_grid(spec, timestamp);

    if (format == Format::Human) {
        std::ostringstream table;
        table << std::left << std::setw(10) << "lambda" << std::setw(10) << "gamma" << std::setw(20)
              << "call" << std::setw(20) << "put" << '\n';
        for (const auto& r : result.rows) {
            table << std::setw(10) << format_number(r.lambda) << std::setw(10) << format_number(r.gamma);
            if (r.ok()) {
                table << std::setw(20) << format_number(r.call) << std::setw(20) << format_number(r.put);
            } else {
                table << "error: " << r.error;
            }
            table << '\n';
        }
        if (output.empty()) {
            out << table.str();
        } else {
            std::ofstream file(output);
            if (!(file << table.str())) throw IoError("failed writing '" + output + "'");
        }
    } else {
        const ExportFormat ef = format == Format::Csv    ? ExportFormat::Csv
                                : format == Format::Json ? ExportFormat::Json
                                                         : ExportFormat::PlotData;
        if (output.empty()) {
            export_result(result, ef, out);
        } else {
            export_result_to_file(result, ef, output);
        }
    }
    const bool any_failed = std::any_of(result.rows.begin(), result.rows.end(),
                                        [](const GridRow& r) { return !r.ok(); });
    return any_failed ? kNumerical : kOk;
}

int run_mc(const MarketFlags& mf, const SkewFlags& sf, const std::string& paths,
           const std::string& seed, bool antithetic, bool martingale, const std::string& fmt,
           std::ostream& out, std::ostream& err) {
    const Format format = resolve_format(fmt, false);
    McConfig cfg;
    cfg.n_paths = parse_integer<std::size_t>(paths, "--paths");
    cfg.seed = parse_integer<std::uint64_t>(seed, "--seed");
    cfg.antithetic = antithetic;
    if (cfg.n_paths < McConfig::kMinPaths) {
        throw UsageError("--paths must be at least " + std::to_string(McConfig::kMinPaths));
    }
    const MarketParams m = mf.build();
    const SkewParams s = sf.build();
    const McEstimate est = martingale ? martingale_check(m, s, cfg) : estimate_call(m, s, cfg);
    const double target = martingale ? m.spot() : call_price(m, s).call;
    const double z = (est.mean - target) / est.std_error;
    const bool pass = est.within(target, kMcZLimit);
    for (const auto& w : est.warnings) err << "warning: " << w << '\n';

    const std::vector<std::pair<std::string, std::string>> pairs{
        {"quantity", martingale ? "discounted_spot" : "call"},
        {"mc_mean", format_number(est.mean)},
        {"std_error", format_number(est.std_error)},
        {"closed_form", format_number(target)},
        {"z_score", format_number(z)},
        {"paths", std::to_string(est.n_paths)},
        {"seed", std::to_string(est.seed_echo)},
        {"antithetic", antithetic ? "true" : "false"},
        {"status", pass ? "pass" : "fail"},
    };
    if (format == Format::Json) {
        nlohmann::ordered_json doc{{"quantity", martingale ? "discounted_spot" : "call"},
                                   {"mc_mean", est.mean},
                                   {"std_error", est.std_error},
                                   {"closed_form", target},
                                   {"z_score", std::isfinite(z) ? nlohmann::ordered_json(z) : nullptr},
                                   {"paths", est.n_paths},
                                   {"seed", est.seed_echo},
                                   {"antithetic", antithetic},
                                   {"pass", pass}};
        out << doc.dump(2) << '\n';
    } else if (format == Format::Csv) {
        print_csv(out, pairs);
    } else {
        print_pairs(out, pairs);
    }
    return pass ? kOk : kToleranceFailure;
}

int run_parity(const MarketFlags& mf, const SkewFlags& sf, const std::string& fmt, std::ostream& out) {
    const Format format = resolve_format(fmt, false);
    const MarketParams m = mf.build();
    const SkewParams s = sf.build();
    const auto q = call_price(m, s);
    const double put_direct = put_price_direct(m, s);
    // P - C + S(0) - K e^{-rt}, with P from its own closed form
    const double residual = put_direct - q.call + m.spot() - m.strike() * m.discount();
    const bool pass = std::abs(residual) <= kParityTolerance;
    const std::vector<std::pair<std::string, std::string>> pairs{
        {"call", format_number(q.call)},
        {"put", format_number(put_direct)},
        {"forward_discounted_strike", format_number(m.strike() * m.discount())},
        {"residual", format_number(residual)},
        {"tolerance", format_number(kParityTolerance)},
        {"status", pass ? "pass" : "fail"},
    };
    if (format == Format::Json) {
        nlohmann::ordered_json doc{{"call", q.call},         {"put", put_direct},
                                   {"residual", residual},   {"tolerance", kParityTolerance},
                                   {"pass", pass}};
        out << doc.dump(2) << '\n';
    } else if (format == Format::Csv) {
        print_csv(out, pairs);
    } else {
        print_pairs(out, pairs);
    }
    return pass ? kOk : kToleranceFailure;
}

}  // namespace

int run_table1(const std::string& fmt, std::ostream& out, const CallPricer& pricer) {
    const Format format = resolve_format(fmt, false);
    const TableComparison cmp = compare_with_reference(pricer);
    if (format == Format::Json) {
        auto cells = nlohmann::ordered_json::array();
        for (const auto& c : cmp.cells) {
            cells.push_back({{"lambda", c.lambda},
                             {"gamma", c.gamma},
                             {"computed", c.computed},
                             {"reference", c.reference},
                             {"deviation", c.deviation},
                             {"pass", c.pass}});
        }
        nlohmann::ordered_json doc{{"market", market_json(benchmark_market())},
                                   {"tolerance", cmp.tolerance},
                                   {"passed", cmp.passed()},
                                   {"total", cmp.cells.size()},
                                   {"cells", std::move(cells)}};
        out << doc.dump(2) << '\n';
    } else if (format == Format::Csv) {
        out << "lambda,gamma,computed,reference,deviation,pass\n";
        for (const auto& c : cmp.cells) {
            out << format_number(c.lambda) << ',' << format_number(c.gamma) << ','
                << format_number(c.computed) << ',' << format_number(c.reference) << ','
                << format_number(c.deviation) << ',' << (c.pass ? "true" : "false") << '\n';
        }
    } else {
        out << "Benchmark S(0)=100 K=100 r=0.1 sigma^2=0.4 t=0.25\n";
        out << std::left << std::setw(8) << "lambda" << std::setw(8) << "gamma" << std::setw(20)
            << "computed" << std::setw(12) << "reference" << std::setw(14) << "deviation"
            << "status\n";
        for (const auto& c : cmp.cells) {
            std::ostringstream dev;
            dev << std::scientific << std::setprecision(2) << c.deviation;
            out << std::setw(8) << format_number(c.lambda) << std::setw(8) << format_number(c.gamma)
                << std::setw(20) << format_number(c.computed) << std::setw(12)
                << format_number(c.reference) << std::setw(14) << dev.str()
                << (c.pass ? "ok" : "FAIL") << '\n';
        }
        out << cmp.passed() << '/' << cmp.cells.size() << " cells within " << format_number(cmp.tolerance)
            << '\n';
    }
    return cmp.all_pass() ? kOk : kToleranceFailure;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"European option prices under generalized skew-normal log-returns", "skewprice"};
    app.require_subcommand(1, 1);

    MarketFlags market;
    SkewFlags skew;
    std::string format;

    auto* price = app.add_subcommand("price", "closed-form call and put with w and mu_star");
    market.attach(price);
    skew.attach(price);
    price->add_option("--format", format, "human | csv | json");

    std::string lambdas;
    std::string gammas;
    std::string output;
    auto* grid = app.add_subcommand("grid", "price a (lambda, gamma) grid");
    market.attach(grid);
    grid->add_option("--lambdas", lambdas, "comma-separated, strictly increasing")->required();
    grid->add_option("--gammas", gammas, "comma-separated, strictly increasing")->required();
    grid->add_option("--format", format, "human | csv | json | plot");
    grid->add_option("--output", output, "write to this file instead of stdout");

    auto* table1 = app.add_subcommand("table1", "compare the benchmark grid with the published prices");
    table1->add_option("--format", format, "human | csv | json");

    std::string paths = "1000000";
    std::string seed = "20240101";
    bool antithetic = false;
    bool martingale = false;
    auto* mc = app.add_subcommand("mc", "Monte Carlo estimate against the closed form");
    market.attach(mc);
    skew.attach(mc);
    mc->add_option("--paths", paths, "number of simulated paths (>= 1000)");
    mc->add_option("--seed", seed, "64-bit seed");
    mc->add_flag("--antithetic", antithetic, "reflect rejection proposals");
    mc->add_flag("--martingale", martingale, "estimate e^{-rt} S(t) instead of the call");
    mc->add_option("--format", format, "human | csv | json");

    auto* parity = app.add_subcommand("parity-check", "check put-call parity with an independent put");
    market.attach(parity);
    skew.attach(parity);
    parity->add_option("--format", format, "human | csv | json");

    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const auto& a : args) argv.push_back(a.c_str());

    CLI::App* active = &app;
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        for (auto* sub : app.get_subcommands()) active = sub;
        out << active->help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        for (auto* sub : app.get_subcommands()) active = sub;
        err << "error: " << e.what() << "\n\n" << active->help();
        return kUsage;
    }
    for (auto* sub : app.get_subcommands()) active = sub;

    try {
        if (active == price) return run_price(market, skew, format, out);
        if (active == grid) return run_grid(market, lambdas, gammas, format, output, out);
        if (active == table1) return run_table1(format, out, {});
        if (active == mc) {
            return run_mc(market, skew, paths, seed, antithetic, martingale, format, out, err);
        }
        if (active == parity) return run_parity(market, skew, format, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n\n" << active->help();
        return kUsage;
    } catch (const ArgumentError& e) {
        err << "error: " << e.what() << "\n\n" << active->help();
        return kUsage;
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        // NumericalRegimeError, DomainError, RangeError
        err << "numerical error: " << e.what() << '\n';
        return kNumerical;
    }
    return kUsage;
}

}  // namespace skewprice::cli
