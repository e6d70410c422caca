#include "skewprice/analysis.hpp"

#include <gtest/gtest.h>

#include <clocale>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "skewprice/errors.hpp"

namespace skewprice {
namespace {

std::string csv_of(const GridResult& r) {
    std::ostringstream os;
    export_result(r, ExportFormat::Csv, os);
    return os.str();
}

TEST(GridSpecTest, Validation) {
    GridSpec spec = benchmark_grid();
    EXPECT_NO_THROW(spec.validate());
    spec.gamma_axis = {};
    EXPECT_THROW(spec.validate(), ArgumentError);
    spec.gamma_axis = {1.0, 0.0};
    EXPECT_THROW(spec.validate(), ArgumentError);
    spec.gamma_axis = {0.0, 0.0};
    EXPECT_THROW(spec.validate(), ArgumentError);
    spec.gamma_axis = {0.0, std::nan("")};
    EXPECT_THROW(spec.validate(), ArgumentError);
}

TEST(EvaluateGrid, BenchmarkTable) {
    const auto result = evaluate_grid(benchmark_grid(), "2024-01-01T00:00:00Z");
    ASSERT_EQ(result.rows.size(), 25u);
    const auto& ref = benchmark_reference_prices();
    for (std::size_t i = 0; i < 25; ++i) {
        EXPECT_EQ(result.rows[i].lambda, ref[i].lambda);
        EXPECT_EQ(result.rows[i].gamma, ref[i].gamma);
        EXPECT_NEAR(result.rows[i].call, ref[i].call, 1e-3) << ref[i].lambda << " " << ref[i].gamma;
    }
    EXPECT_EQ(result.provenance.timestamp, "2024-01-01T00:00:00Z");
    EXPECT_EQ(result.provenance.method, "general");
    EXPECT_FALSE(result.provenance.version.empty());
}

TEST(EvaluateGrid, ZeroLambdaIgnoresGamma) {
    GridSpec spec{benchmark_market(), {0.0}, {-5.0, 0.0, 5.0}};
    const auto result = evaluate_grid(spec, "");
    ASSERT_EQ(result.rows.size(), 3u);
    EXPECT_NEAR(result.rows[0].call, result.rows[1].call, 1e-12);
    EXPECT_NEAR(result.rows[2].call, result.rows[1].call, 1e-12);
}

TEST(EvaluateGrid, SingleCellAndCellIndependence) {
    GridSpec one{benchmark_market(), {1.5}, {-0.5}};
    const auto r = evaluate_grid(one, "");
    ASSERT_EQ(r.rows.size(), 1u);
    EXPECT_EQ(r.rows[0].call, call_price(benchmark_market(), SkewParams(1.5, -0.5)).call);

    const auto grid = evaluate_grid(benchmark_grid(), "");
    for (const auto& row : grid.rows) {
        const auto alone = evaluate_cell(benchmark_market(), row.lambda, row.gamma);
        EXPECT_EQ(alone.call, row.call);
        EXPECT_EQ(alone.put, row.put);
        EXPECT_EQ(alone.w, row.w);
        EXPECT_EQ(alone.mu_star, row.mu_star);
    }
}

TEST(EvaluateGrid, RowwiseParity) {
    const auto m = benchmark_market();
    for (const auto& row : evaluate_grid(benchmark_grid(), "").rows) {
        EXPECT_NEAR(row.put - row.call + m.spot() - m.strike() * m.discount(), 0.0, 1e-12);
    }
}

TEST(EvaluateGrid, TimestampDefaultsToClock) {
    GridSpec one{benchmark_market(), {0.0}, {0.0}};
    const auto r = evaluate_grid(one);
    ASSERT_EQ(r.provenance.timestamp.size(), 20u);
    EXPECT_EQ(r.provenance.timestamp.back(), 'Z');
    EXPECT_EQ(iso8601_utc(0), "1970-01-01T00:00:00Z");
    EXPECT_EQ(iso8601_utc(1700000000), "2023-11-14T22:13:20Z");
}

TEST(CompareWithReference, ClosedFormPasses) {
    const auto cmp = compare_with_reference();
    EXPECT_EQ(cmp.cells.size(), 25u);
    EXPECT_TRUE(cmp.all_pass());
    for (const auto& c : cmp.cells) EXPECT_LE(std::abs(c.deviation), 1e-3);
}

TEST(CompareWithReference, MirroredSkewFails) {
    // lambda -> -lambda is a plausible transcription slip; it must not pass.
    const auto broken = [](const MarketParams& m, const SkewParams& s) {
        return call_price(m, SkewParams(-s.lambda(), s.gamma())).call;
    };
    const auto cmp = compare_with_reference(broken);
    EXPECT_FALSE(cmp.all_pass());
    EXPECT_LT(cmp.passed(), 25u);
}

TEST(Sensitivity, GammaFlatAtZeroLambda) {
    EXPECT_NEAR(numerical_sensitivity(benchmark_market(), SkewParams(0, 0.7), SkewAxis::Gamma), 0.0, 1e-6);
}

TEST(Sensitivity, GammaPositiveForNonzeroLambda) {
    EXPECT_GT(numerical_sensitivity(benchmark_market(), SkewParams(1, 0), SkewAxis::Gamma), 0.0);
    EXPECT_GT(numerical_sensitivity(benchmark_market(), SkewParams(-1, 0), SkewAxis::Gamma), 0.0);
}

TEST(Sensitivity, LambdaMatchesFivePointStencil) {
    const auto m = benchmark_market();
    auto c = [&](double l) { return call_price(m, SkewParams(l, 0.0)).call; };
    const double h = 1e-2;
    const double x = 0.5;
    const double stencil = (-c(x + 2 * h) + 8 * c(x + h) - 8 * c(x - h) + c(x - 2 * h)) / (12 * h);
    const double d = numerical_sensitivity(m, SkewParams(x, 0.0), SkewAxis::Lambda);
    EXPECT_NEAR(d / stencil, 1.0, 1e-4);
}

TEST(Sensitivity, RejectsBadStep) {
    EXPECT_THROW(numerical_sensitivity(benchmark_market(), SkewParams(0, 0), SkewAxis::Gamma, 0.0),
                 ArgumentError);
}

TEST(Monotonicity, BenchmarkConfirmsAll) {
    const auto report = monotonicity_report(benchmark_grid());
    EXPECT_TRUE(report.all_confirmed());
    ASSERT_EQ(report.rows.size(), 5u);
    ASSERT_EQ(report.columns.size(), 5u);
    EXPECT_TRUE(report.columns[2].constant_in_gamma);
    EXPECT_FALSE(report.columns[0].constant_in_gamma);
}

TEST(Monotonicity, SingleColumn) {
    const auto report = monotonicity_report(GridSpec{benchmark_market(), {0.0}, {-1.0, 1.0}});
    ASSERT_EQ(report.rows.size(), 2u);
    EXPECT_TRUE(report.rows[0].max_at_zero_lambda);
    EXPECT_TRUE(report.rows[0].below_black_scholes);
}

TEST(Monotonicity, UnitGammaRow) {
    const auto m = benchmark_market();
    const auto report = monotonicity_report(GridSpec{m, {-1.0, 0.0, 1.0}, {1.0}});
    EXPECT_TRUE(report.rows[0].max_at_zero_lambda);
    EXPECT_LT(call_price(m, SkewParams(1, 1)).call, call_price(m, SkewParams(0, 1)).call);
    EXPECT_LT(call_price(m, SkewParams(-1, 1)).call, call_price(m, SkewParams(0, 1)).call);
}

TEST(Monotonicity, RejectsAsymmetricAxis) {
    EXPECT_THROW(monotonicity_report(GridSpec{benchmark_market(), {0.0, 1.0}, {0.0}}), ArgumentError);
    EXPECT_THROW(monotonicity_report(GridSpec{benchmark_market(), {-1.0, 1.0}, {0.0}}), ArgumentError);
}

TEST(Export, CsvShape) {
    const auto text = csv_of(evaluate_grid(benchmark_grid(), ""));
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "lambda,gamma,call,put,w,mu_star");
    int n = 0;
    while (std::getline(in, line)) ++n;
    EXPECT_EQ(n, 25);
}

TEST(Export, CsvRoundTrip) {
    const auto result = evaluate_grid(benchmark_grid(), "");
    std::istringstream in(csv_of(result));
    const auto rows = parse_csv(in);
    ASSERT_EQ(rows.size(), result.rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        EXPECT_EQ(format_number(rows[i].call), format_number(result.rows[i].call));
        EXPECT_NEAR(rows[i].call, result.rows[i].call, 1e-14 * result.rows[i].call);
        EXPECT_NEAR(rows[i].mu_star, result.rows[i].mu_star, 1e-14 * std::abs(result.rows[i].mu_star));
    }
}

TEST(Export, CsvDeterministicAndLocaleFree) {
    const auto a = csv_of(evaluate_grid(benchmark_grid(), ""));
    const char* previous = std::setlocale(LC_ALL, nullptr);
    const std::string saved = previous ? previous : "C";
    std::setlocale(LC_ALL, "de_DE.UTF-8");
    const auto b = csv_of(evaluate_grid(benchmark_grid(), ""));
    std::setlocale(LC_ALL, saved.c_str());
    EXPECT_EQ(a, b);
    EXPECT_EQ(format_number(0.1), "0.1");
    EXPECT_EQ(format_number(13.6811312345678901), "13.6811312345679");
}

TEST(Export, JsonStructure) {
    const auto result = evaluate_grid(benchmark_grid(), "2024-01-01T00:00:00Z");
    std::ostringstream os;
    export_result(result, ExportFormat::Json, os);
    const auto doc = nlohmann::json::parse(os.str());
    EXPECT_EQ(doc["rows"].size(), 25u);
    EXPECT_EQ(doc["rows"][0].size(), 6u);
    EXPECT_EQ(doc["provenance"]["timestamp"], "2024-01-01T00:00:00Z");
    EXPECT_EQ(doc["provenance"]["method"], "general");
    EXPECT_DOUBLE_EQ(doc["params"]["spot"].get<double>(), 100.0);
    EXPECT_DOUBLE_EQ(doc["rows"][12]["call"].get<double>(), result.rows[12].call);
}

TEST(Export, PlotDataSeries) {
    std::ostringstream os;
    export_result(evaluate_grid(benchmark_grid(), ""), ExportFormat::PlotData, os);
    const auto doc = nlohmann::json::parse(os.str());
    ASSERT_EQ(doc["series"].size(), 5u);
    for (const auto& s : doc["series"]) EXPECT_EQ(s["points"].size(), 5u);
}

TEST(Export, FailedCellsSurvive) {
    GridResult r{GridSpec{benchmark_market(), {0.0}, {0.0}}, {}, {"general", "", "x"}};
    GridRow bad;
    bad.lambda = 1.0;
    bad.gamma = 2.0;
    bad.call = bad.put = bad.w = bad.mu_star = std::nan("");
    bad.error = "boom";
    r.rows.push_back(bad);
    std::ostringstream os;
    export_result(r, ExportFormat::Json, os);
    const auto doc = nlohmann::json::parse(os.str());
    EXPECT_TRUE(doc["rows"][0]["call"].is_null());
    EXPECT_EQ(doc["rows"][0]["error"], "boom");
}

TEST(Export, FileErrorsNamePath) {
    const auto result = evaluate_grid(GridSpec{benchmark_market(), {0.0}, {0.0}}, "");
    const std::string bad = "/nonexistent-dir/out.csv";
    try {
        export_result_to_file(result, ExportFormat::Csv, bad);
        FAIL() << "expected IoError";
    } catch (const IoError& e) {
        EXPECT_NE(std::string(e.what()).find(bad), std::string::npos);
    }
    const auto path = std::filesystem::temp_directory_path() / "skewprice_export_test.csv";
    export_result_to_file(result, ExportFormat::Csv, path.string());
    std::ifstream in(path);
    EXPECT_EQ(parse_csv(in).size(), 1u);
    std::filesystem::remove(path);
}

TEST(Export, ParseCsvRejectsGarbage) {
    std::istringstream no_header("1,2,3,4,5,6\n");
    EXPECT_THROW(parse_csv(no_header), ArgumentError);
    std::istringstream short_row("lambda,gamma,call,put,w,mu_star\n1,2,3\n");
    EXPECT_THROW(parse_csv(short_row), ArgumentError);
}

}  // namespace
}  // namespace skewprice
