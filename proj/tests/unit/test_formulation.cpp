#include <gtest/gtest.h>

#include <set>

#include "htsroute/arrivals.hpp"
#include "htsroute/formulation.hpp"
#include "random_instances.hpp"

namespace hts {
namespace {

ScenarioConfig small_config(int M, int P, int T) {
    ScenarioConfig c;
    c.num_modules = M;
    c.num_priorities = P;
    c.horizon = T;
    c.loss_costs.assign(static_cast<std::size_t>(P), 1.0);
    for (int p = 0; p < P; ++p) c.loss_costs[static_cast<std::size_t>(p)] = static_cast<double>(P - p) * 3.0;
    return c;
}

double solve_objective(const Formulation& f) {
    const auto sol = lp::solve(f.problem);
    EXPECT_TRUE(sol.optimal()) << lp::to_string(sol.status);
    EXPECT_LE(lp::check_solution(f.problem, sol.values).max_violation(), lp::kFeasibilityTol);
    return sol.objective_value;
}

TEST(VarMap, SeventySixVariablesForSmallBatch) {
    const auto c = small_config(2, 2, 3);
    const auto f = build_batch(c, Matrix(3, 2, 1.0));
    EXPECT_EQ(f.vars.num_vars(), 76);
    EXPECT_EQ(f.problem.num_vars, 76);
}

TEST(VarMap, IndexingIsABijection) {
    const VarMap v{3, 2, 2, 0};
    std::set<int> seen;
    for (int s = 0; s < 3; ++s)
        for (int m = 0; m < 2; ++m)
            for (int p = 0; p < 2; ++p)
                for (int idx : {v.f_in(s, m, p), v.f_out(s, m, p), v.weight(s, m, p), v.delta_q(s, m, p), v.loss(s, m, p)})
                    EXPECT_TRUE(seen.insert(idx).second) << idx;
    for (int s = 0; s <= 3; ++s)
        for (int m = 0; m < 2; ++m)
            for (int p = 0; p < 2; ++p) EXPECT_TRUE(seen.insert(v.queue(s, m, p)).second);
    EXPECT_EQ(seen.size(), 76u);
    EXPECT_EQ(*seen.begin(), 0);
    EXPECT_EQ(*seen.rbegin(), 75);
}

TEST(Batch, ZeroDemandCostsNothing) {
    const auto c = small_config(2, 3, 4);
    EXPECT_NEAR(solve_objective(build_batch(c, Matrix(4, 3))), 0.0, 1e-9);
    EXPECT_NEAR(solve_objective(build_static_batch(c, Matrix(4, 3))), 0.0, 1e-9);
}

TEST(Batch, SingleModuleOverloadLosesNinety) {
    ScenarioConfig c;
    c.num_modules = 1;
    c.num_priorities = 1;
    c.horizon = 1;
    c.loss_costs = {7.0};
    c.queue_capacity = 0.0;
    c.link_capacity = 100.0;
    c.scheduler_period = 0.1;
    const auto f = build_batch(c, Matrix(1, 1, 100.0));
    EXPECT_NEAR(solve_objective(f), 7.0 * 90.0, 1e-6);
}

TEST(Batch, RowCountsMatchFamilies) {
    const auto c = small_config(2, 2, 3);
    const auto f = build_batch(c, Matrix(3, 2, 1.0));
    const int smp = 3 * 2 * 2;
    EXPECT_EQ(f.rows.balance, smp);
    EXPECT_EQ(f.rows.service, smp);
    EXPECT_EQ(f.rows.queue_recursion, smp);
    EXPECT_EQ(f.rows.ramp, 2 * 2 * 2 * 2);  // two-sided, steps 1..2
    EXPECT_EQ(f.rows.weight_sum, 3 * 2);
    EXPECT_EQ(f.rows.buffer_capacity, 3 * 2);
    EXPECT_EQ(f.rows.demand, 3 * 2);
    EXPECT_EQ(f.rows.initial_queue, 4);
    EXPECT_EQ(f.rows.terminal_queue, 4);
    EXPECT_EQ(f.rows.weight_pin, 0);
    EXPECT_EQ(static_cast<int>(f.problem.constraints.size()),
              3 * smp + 16 + 18 + 8);
}

TEST(Batch, OneSidedRampHalvesRampRows) {
    auto c = small_config(2, 2, 3);
    c.ramp_two_sided = false;
    EXPECT_EQ(build_batch(c, Matrix(3, 2)).rows.ramp, 8);
}

TEST(Static, PinsEveryLaterStep) {
    const auto c = small_config(2, 2, 3);
    EXPECT_EQ(build_static_batch(c, Matrix(3, 2)).rows.weight_pin, 2 * 2 * 2);
}

TEST(Proportional, FixedWeightsWithoutRamp) {
    ScenarioConfig c;
    EXPECT_EQ(proportional_weights(c), (std::vector<double>{10.0 / 15.0, 4.0 / 15.0, 1.0 / 15.0}));
    c.num_priorities = 2;
    c.loss_costs = {1.0, 1.0};
    EXPECT_EQ(proportional_weights(c), (std::vector<double>{0.5, 0.5}));

    c = small_config(2, 3, 3);
    c.loss_costs = {10.0, 4.0, 1.0};
    const auto f = build_proportional(c, Matrix(3, 3, 2.0));
    EXPECT_EQ(f.rows.ramp, 0);
    const auto sol = lp::solve(f.problem);
    ASSERT_TRUE(sol.optimal());
    const auto traj = extract_trajectory(sol, f.vars);
    for (const auto& d : traj.decisions)
        for (std::size_t m = 0; m < 2; ++m) {
            EXPECT_NEAR(d.weights(m, 0), 2.0 / 3.0, 1e-12);
            EXPECT_NEAR(d.weights(m, 1), 4.0 / 15.0, 1e-12);
            EXPECT_NEAR(d.weights(m, 2), 1.0 / 15.0, 1e-12);
        }
}

TEST(Restrictions, NeverBeatBatchOnRandomInstances) {
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        const auto inst = oracle::random_small_instance(seed);
        const double batch = solve_objective(build_batch(inst.config, inst.flows));
        const double stat = solve_objective(build_static_batch(inst.config, inst.flows));
        const double prop = solve_objective(build_proportional(inst.config, inst.flows));
        EXPECT_GE(stat, batch - 1e-6) << "seed " << seed;
        EXPECT_GE(prop, batch - 1e-6) << "seed " << seed;
    }
}

TEST(Feasibility, EveryBuiltProblemSolves) {
    for (std::uint64_t seed = 100; seed < 160; ++seed) {
        const auto inst = oracle::random_small_instance(seed);
        for (const auto& f : {build_batch(inst.config, inst.flows), build_static_batch(inst.config, inst.flows),
                              build_proportional(inst.config, inst.flows)}) {
            const auto sol = lp::solve(f.problem);
            ASSERT_TRUE(sol.optimal()) << "seed " << seed << " " << lp::to_string(sol.status);
        }
    }
}

class MpcWindow : public ::testing::Test {
protected:
    ScenarioConfig config;  // defaults: M=16, P=3, T=100, W=10
    Matrix expected = [] {
        ScenarioConfig c;
        Matrix e(100, 3);
        for (int t = 0; t < 100; ++t)
            for (int p = 0; p < 3; ++p) e(static_cast<std::size_t>(t), static_cast<std::size_t>(p)) = lambda_schedule(c, t, p);
        return e;
    }();
};

TEST_F(MpcWindow, FirstWindowCoversTenSteps) {
    const auto f = build_mpc_window(config, PlantState::initial(config), 0, expected);
    EXPECT_EQ(f.vars.steps, 10);
    EXPECT_EQ(f.vars.first_step, 0);
    EXPECT_EQ(f.rows.demand, 10 * 3);
    EXPECT_EQ(f.rows.terminal_queue, 0);
    EXPECT_EQ(f.rows.initial_queue, 16 * 3);
    EXPECT_EQ(f.rows.ramp, 9 * 16 * 3 * 2);  // no previous weights yet
}

TEST_F(MpcWindow, LateWindowClampsAndAddsTerminal) {
    auto state = PlantState::initial(config);
    state.last_weights = Matrix(16, 3, 1.0 / 3.0);
    const auto f = build_mpc_window(config, state, 94, expected);
    EXPECT_EQ(f.vars.steps, 6);
    EXPECT_EQ(f.rows.demand, 6 * 3);
    EXPECT_EQ(f.rows.terminal_queue, 16 * 3);
    EXPECT_EQ(f.rows.ramp, 6 * 16 * 3 * 2);
}

TEST_F(MpcWindow, ZeroExpectedZeroObjective) {
    const auto f = build_mpc_window(config, PlantState::initial(config), 3, Matrix(100, 3));
    EXPECT_NEAR(solve_objective(f), 0.0, 1e-9);
}

TEST_F(MpcWindow, RejectsBadStart) {
    EXPECT_THROW(build_mpc_window(config, PlantState::initial(config), 100, expected), std::out_of_range);
    EXPECT_THROW(build_mpc_window(config, PlantState::initial(config), -1, expected), std::out_of_range);
}

TEST(Extract, RenormalizesWeights) {
    Matrix w(1, 2);
    w(0, 0) = 0.3333334;
    w(0, 1) = 0.6666666;
    normalize_weights(w);
    EXPECT_EQ(w(0, 0) + w(0, 1), 1.0);
}

TEST(Extract, ClampsNoise) {
    Matrix w(1, 3);
    w(0, 0) = -1e-12;
    w(0, 1) = 0.5;
    w(0, 2) = 0.5;
    normalize_weights(w);
    EXPECT_EQ(w(0, 0), 0.0);
    EXPECT_EQ(w(0, 1), 0.5);
}

TEST(Extract, ZeroDemandTrajectoryHasNoLoss) {
    const auto c = small_config(2, 2, 4);
    const auto f = build_batch(c, Matrix(4, 2));
    const auto traj = extract_trajectory(lp::solve(f.problem), f.vars);
    ASSERT_EQ(traj.decisions.size(), 4u);
    for (const auto& l : traj.planned_losses) EXPECT_EQ(l.sum(), 0.0);
    for (const auto& d : traj.decisions)
        for (std::size_t m = 0; m < 2; ++m) EXPECT_NEAR(d.weights.row_sum(m), 1.0, 1e-15);
}

TEST(Extract, NotOptimalThrows) {
    lp::LpSolution bad;
    bad.status = lp::SolveStatus::infeasible;
    EXPECT_THROW(extract_step(bad, VarMap{1, 1, 1, 0}, 0), NotOptimal);
    EXPECT_THROW(extract_trajectory(bad, VarMap{1, 1, 1, 0}), NotOptimal);
}

}  // namespace
}  // namespace hts
