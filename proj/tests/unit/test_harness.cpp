#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "htsroute/arrivals.hpp"
#include "htsroute/harness.hpp"

namespace hts {
namespace {

ScenarioConfig reduced(int runs) {
    ScenarioConfig c;
    c.num_modules = 2;
    c.horizon = 8;
    c.window = 3;
    c.num_runs = runs;
    c.link_capacity = 5.0;
    c.queue_capacity = 4.0;
    c.lambda_start = 20.0;
    c.lambda_end = 60.0;
    return c;
}

const std::vector<PolicyKind> kAll = {PolicyKind::batch(), PolicyKind::mpc(3), PolicyKind::windowless(),
                                      PolicyKind::static_weights(), PolicyKind::proportional()};

TEST(Gaps, PercentAboveBaseline) {
    const auto g = compute_gaps({{"batch_hindsight", 100.0}, {"mpc_w10", 101.05}, {"static_batch", 100.0}});
    EXPECT_FALSE(g.zero_baseline);
    EXPECT_NEAR(*g.gap("mpc_w10"), 1.05, 1e-9);
    EXPECT_EQ(*g.gap("static_batch"), 0.0);
    EXPECT_EQ(*g.gap("batch_hindsight"), 0.0);
    EXPECT_FALSE(g.gap("missing").has_value());
}

TEST(Gaps, ZeroBaselineReportsAbsolute) {
    const auto g = compute_gaps({{"batch_hindsight", 0.0}, {"mpc_w10", 0.0}});
    EXPECT_TRUE(g.zero_baseline);
    EXPECT_TRUE(g.gaps_percent.empty());
    EXPECT_FALSE(g.gap("mpc_w10").has_value());
    EXPECT_EQ(g.mean_costs.size(), 2u);
}

TEST(Gaps, MissingBaselineThrows) {
    EXPECT_THROW(compute_gaps({{"mpc_w10", 1.0}}), std::invalid_argument);
}

TEST(MonteCarlo, ZeroDemandEverythingZero) {
    auto c = reduced(1);
    c.lambda_start = 0.0;
    c.lambda_end = 0.0;
    const auto agg = run_monte_carlo(c, kAll);
    for (const auto& m : agg.methods) EXPECT_EQ(m.mean_cost, 0.0) << m.label;
    EXPECT_TRUE(agg.gaps.zero_baseline);
}

TEST(MonteCarlo, PairedAndDominatedByHindsight) {
    const auto c = reduced(4);
    const auto agg = run_monte_carlo(c, kAll);
    EXPECT_TRUE(agg.paired);
    ASSERT_EQ(agg.demand_hashes.size(), 4u);
    for (int run = 0; run < 4; ++run)
        EXPECT_EQ(agg.demand_hashes[static_cast<std::size_t>(run)], hash_demand(generate_demands(c, run)));
    ASSERT_EQ(agg.hindsight_objectives.size(), 4u);
    for (const auto& m : agg.methods)
        for (std::size_t r = 0; r < m.run_costs.size(); ++r)
            EXPECT_GE(m.run_costs[r], agg.hindsight_objectives[r] - 1e-6) << m.label << " run " << r;
    EXPECT_EQ(agg.invariants.total_violations(), 0);
    EXPECT_EQ(*agg.gaps.gap("batch_hindsight"), 0.0);
}

TEST(MonteCarlo, ThreadCountDoesNotChangeResults) {
    const auto c = reduced(5);
    HarnessOptions one, two;
    one.threads = 1;
    two.threads = 3;
    const auto a = run_monte_carlo(c, kAll, one);
    const auto b = run_monte_carlo(c, kAll, two);
    ASSERT_EQ(a.methods.size(), b.methods.size());
    for (std::size_t i = 0; i < a.methods.size(); ++i) {
        EXPECT_EQ(a.methods[i].run_costs, b.methods[i].run_costs);
        EXPECT_EQ(a.methods[i].mean_cost, b.methods[i].mean_cost);
        EXPECT_EQ(a.methods[i].mean_loss, b.methods[i].mean_loss);
    }
    EXPECT_EQ(a.demand_hashes, b.demand_hashes);
}

TEST(MonteCarlo, StatisticsMatchRunCosts) {
    const auto agg = run_monte_carlo(reduced(6), {PolicyKind::proportional()});
    const auto& m = agg.methods.front();
    double mean = 0.0;
    for (double v : m.run_costs) mean += v;
    mean /= 6.0;
    double ss = 0.0;
    for (double v : m.run_costs) ss += (v - mean) * (v - mean);
    EXPECT_NEAR(m.mean_cost, mean, 1e-9 * std::max(1.0, mean));
    EXPECT_NEAR(m.std_cost, std::sqrt(ss / 5.0), 1e-9 * std::max(1.0, mean));
    ASSERT_EQ(m.mean_cumulative_cost.size(), 8u);
    EXPECT_NEAR(m.mean_cumulative_cost.back(), m.mean_cost, 1e-9 * std::max(1.0, mean));
    // Summing per-step cost series reproduces each run's total.
    for (std::size_t r = 0; r < m.runs.size(); ++r)
        EXPECT_NEAR(m.runs[r].cost.sum(), m.run_costs[r], 1e-9 * std::max(1.0, m.run_costs[r]));
}

TEST(MonteCarlo, MeanInvariantToRunOrder) {
    const auto agg = run_monte_carlo(reduced(5), {PolicyKind::mpc(3)});
    auto costs = agg.methods.front().run_costs;
    std::reverse(costs.begin(), costs.end());
    double s = 0.0;
    for (double v : costs) s += v;
    EXPECT_NEAR(s / 5.0, agg.methods.front().mean_cost, 1e-9 * std::max(1.0, s));
}

TEST(MonteCarlo, OnlineOnlyMethodsCanStillComputeHindsight) {
    HarnessOptions opts;
    opts.always_compute_hindsight = true;
    const auto agg = run_monte_carlo(reduced(2), {PolicyKind::mpc(2)}, opts);
    EXPECT_EQ(agg.hindsight_objectives.size(), 2u);
    const auto plain = run_monte_carlo(reduced(2), {PolicyKind::mpc(2)});
    EXPECT_TRUE(plain.hindsight_objectives.empty());
}

TEST(MonteCarlo, RequiresAMethod) {
    EXPECT_THROW(run_monte_carlo(reduced(1), {}), std::invalid_argument);
}

TEST(Sweep, SingleWindowHasOneRow) {
    const auto s = sweep_window(reduced(2), {2});
    ASSERT_EQ(s.windows.size(), 1u);
    ASSERT_EQ(s.pct_diff.size(), 1u);
    ASSERT_EQ(s.pct_diff[0].size(), 1u);
}

TEST(Sweep, PairwiseDifferences) {
    const auto s = sweep_window(reduced(2), {1, 4});
    ASSERT_EQ(s.mean_costs.size(), 2u);
    if (s.mean_costs[1] > 0.0)
        EXPECT_NEAR(s.pct_diff[0][1], 100.0 * (s.mean_costs[0] - s.mean_costs[1]) / s.mean_costs[1], 1e-9);
    EXPECT_THROW(sweep_window(reduced(1), {0}), std::invalid_argument);
    EXPECT_THROW(sweep_window(reduced(1), {}), std::invalid_argument);
}

TEST(Demand, HashDependsOnRealization) {
    const ScenarioConfig c;
    EXPECT_EQ(hash_demand(generate_demands(c, 0)), hash_demand(generate_demands(c, 0)));
    EXPECT_NE(hash_demand(generate_demands(c, 0)), hash_demand(generate_demands(c, 1)));
}

}  // namespace
}  // namespace hts
