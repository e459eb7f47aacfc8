#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "htsroute/report.hpp"
#include "json.hpp"

namespace hts {
namespace {

namespace fs = std::filesystem;

ScenarioConfig reduced() {
    ScenarioConfig c;
    c.num_modules = 2;
    c.horizon = 6;
    c.window = 3;
    c.num_runs = 3;
    c.link_capacity = 5.0;
    c.queue_capacity = 4.0;
    c.lambda_start = 20.0;
    c.lambda_end = 60.0;
    return c;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

class Report : public ::testing::Test {
protected:
    void SetUp() override {
        dir = fs::temp_directory_path() / ("htsroute_report_" + std::string(
            ::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir);
    }
    void TearDown() override { fs::remove_all(dir); }
    fs::path dir;
};

TEST(FormatNumber, ShortestRoundTrip) {
    EXPECT_EQ(format_number(0.0), "0");
    EXPECT_EQ(format_number(-0.0), "0");
    EXPECT_EQ(format_number(1.5), "1.5");
    EXPECT_EQ(format_number(0.1), "0.1");
    const double x = 1.0 / 3.0;
    EXPECT_EQ(std::stod(format_number(x)), x);
}

TEST_F(Report, RecordCountAndRoundTrip) {
    const auto c = reduced();
    const std::vector<PolicyKind> methods = {PolicyKind::batch(), PolicyKind::mpc(3), PolicyKind::proportional()};
    const auto metrics = run_monte_carlo(c, methods);
    const auto bundle = emit_outputs(metrics, dir);
    EXPECT_EQ(bundle.record_count, 3u * 3u * 6u * 3u * 4u);
    EXPECT_EQ(bundle.charts.size(), 4u);
    for (const auto& chart : bundle.charts) EXPECT_EQ(slurp(chart).rfind("<?xml", 0), 0u);

    std::ifstream csv(bundle.timeseries_csv);
    std::string line;
    std::getline(csv, line);
    EXPECT_EQ(line, kTimeseriesHeader);
    std::map<std::string, double> cost_sum;
    std::size_t rows = 0;
    while (std::getline(csv, line)) {
        ++rows;
        std::stringstream ss(line);
        std::string run, method, t, p, metric, value;
        std::getline(ss, run, ',');
        std::getline(ss, method, ',');
        std::getline(ss, t, ',');
        std::getline(ss, p, ',');
        std::getline(ss, metric, ',');
        std::getline(ss, value, ',');
        if (metric == "cost") cost_sum[method] += std::stod(value);
    }
    EXPECT_EQ(rows, bundle.record_count);

    const auto summary = nlohmann::json::parse(slurp(bundle.summary_json));
    for (const auto& m : summary["methods"]) {
        const double mean = cost_sum[m["method"].get<std::string>()] / c.num_runs;
        const double reported = m["mean_cost"].get<double>();
        EXPECT_NEAR(mean, reported, 1e-9 * std::max(1.0, reported)) << m["method"];
    }
    EXPECT_EQ(summary["seed"].get<std::uint64_t>(), c.base_seed);
    EXPECT_EQ(summary["config"]["horizon"].get<int>(), 6);
}

TEST_F(Report, RerunIsByteIdentical) {
    const auto c = reduced();
    const std::vector<PolicyKind> methods = {PolicyKind::batch(), PolicyKind::windowless()};
    const auto a = emit_outputs(run_monte_carlo(c, methods), dir / "a");
    const auto b = emit_outputs(run_monte_carlo(c, methods), dir / "b");
    EXPECT_EQ(slurp(a.summary_json), slurp(b.summary_json));
    EXPECT_EQ(slurp(a.timeseries_csv), slurp(b.timeseries_csv));
    ASSERT_EQ(a.charts.size(), b.charts.size());
    for (std::size_t i = 0; i < a.charts.size(); ++i) EXPECT_EQ(slurp(a.charts[i]), slurp(b.charts[i]));
}

TEST_F(Report, ZeroDemandSummary) {
    auto c = reduced();
    c.lambda_start = c.lambda_end = 0.0;
    const auto bundle = emit_outputs(run_monte_carlo(c, {PolicyKind::batch(), PolicyKind::mpc(2)}), dir);
    const auto summary = nlohmann::json::parse(slurp(bundle.summary_json));
    EXPECT_TRUE(summary["zero_baseline"].get<bool>());
    for (const auto& m : summary["methods"]) {
        EXPECT_EQ(m["mean_cost"].get<double>(), 0.0);
        EXPECT_TRUE(m["gap_percent"].is_null());
    }
}

TEST_F(Report, SweepAddsChartAndTable) {
    const auto sweep = sweep_window(reduced(), {1, 3});
    const auto bundle = emit_outputs(sweep.metrics, dir, &sweep);
    EXPECT_EQ(bundle.charts.size(), 5u);
    const auto summary = nlohmann::json::parse(slurp(bundle.summary_json));
    ASSERT_EQ(summary["window_sweep"].size(), 2u);
    EXPECT_EQ(summary["window_sweep"][1]["window"].get<int>(), 3);
}

TEST_F(Report, UnwritableDirectoryNamesPath) {
    const auto blocker = dir / "file";
    fs::create_directories(dir);
    std::ofstream(blocker) << "x";
    auto c = reduced();
    c.num_runs = 1;
    try {
        emit_outputs(run_monte_carlo(c, {PolicyKind::proportional()}), blocker / "sub");
        FAIL() << "expected an I/O error";
    } catch (const std::runtime_error& e) {
        EXPECT_NE(std::string(e.what()).find("file"), std::string::npos);
    }
}

}  // namespace
}  // namespace hts
