#include <gtest/gtest.h>

#include "htsroute/arrivals.hpp"
#include "htsroute/formulation.hpp"
#include "htsroute/plant.hpp"
#include "oracles.hpp"
#include "random_instances.hpp"

namespace hts {
namespace {

ControlDecision decision_1x2(double w0, double w1) {
    ControlDecision d{Matrix(1, 2), Matrix(1, 2, 1.0)};
    d.weights(0, 0) = w0;
    d.weights(0, 1) = w1;
    return d;
}

ScenarioConfig one_module_two_priorities() {
    ScenarioConfig c;
    c.num_modules = 1;
    c.num_priorities = 2;
    c.horizon = 3;
    c.loss_costs = {10.0, 1.0};
    return c;
}

TEST(SplitInflow, ProportionalToPlan) {
    Matrix planned(2, 1);
    planned(0, 0) = 3.0;
    planned(1, 0) = 1.0;
    const std::vector<double> totals{8.0};
    const auto out = split_inflow(planned, totals);
    EXPECT_DOUBLE_EQ(out(0, 0), 6.0);
    EXPECT_DOUBLE_EQ(out(1, 0), 2.0);
}

TEST(SplitInflow, UniformWhenPlanIsEmpty) {
    const std::vector<double> totals{4.0};
    const auto out = split_inflow(Matrix(2, 1), totals);
    EXPECT_DOUBLE_EQ(out(0, 0), 2.0);
    EXPECT_DOUBLE_EQ(out(1, 0), 2.0);
}

TEST(SplitInflow, ZeroRealizedZeroInflow) {
    const std::vector<double> totals{0.0, 0.0};
    EXPECT_EQ(split_inflow(Matrix(3, 2, 1.0), totals).sum(), 0.0);
}

TEST(Step, ServesUpToWeightCap) {
    auto c = one_module_two_priorities();
    c.link_capacity = 100.0;
    const std::vector<double> realized{8.0, 2.0};
    const auto [next, out] = step(PlantState::initial(c), decision_1x2(0.6, 0.4), realized, c);
    EXPECT_NEAR(out.outflows(0, 0), 6.0, 1e-12);
    EXPECT_NEAR(out.outflows(0, 1), 2.0, 1e-12);
    EXPECT_NEAR(next.queues(0, 0), 2.0, 1e-12);
    EXPECT_NEAR(next.queues(0, 1), 0.0, 1e-12);
    EXPECT_EQ(out.losses.sum(), 0.0);
    EXPECT_EQ(out.step_cost, 0.0);
}

TEST(Step, DropsCheapestPriorityFirst) {
    auto c = one_module_two_priorities();
    c.queue_capacity = 5.0;
    c.scheduler_period = 0.5;
    // Priority 1 gets all the service (2 packets), leaving occupancy (4, 3).
    const std::vector<double> realized{6.0, 3.0};
    const auto [next, out] = step(PlantState::initial(c), decision_1x2(1.0, 0.0), realized, c);
    EXPECT_DOUBLE_EQ(out.outflows(0, 0), 2.0);
    EXPECT_DOUBLE_EQ(next.queues(0, 0), 4.0);
    EXPECT_DOUBLE_EQ(next.queues(0, 1), 1.0);
    EXPECT_EQ(out.losses(0, 0), 0.0);
    EXPECT_DOUBLE_EQ(out.losses(0, 1), 2.0);
    EXPECT_DOUBLE_EQ(out.step_cost, 2.0);
}

TEST(Step, TiedCostsDropLaterPriorityFirst) {
    ScenarioConfig c;
    c.num_modules = 1;
    c.num_priorities = 3;
    c.loss_costs = {5.0, 2.0, 2.0};
    c.queue_capacity = 4.0;
    ControlDecision d{Matrix(1, 3), Matrix(1, 3, 1.0)};
    d.weights(0, 0) = 1.0;  // serves 10, clears priority 1 entirely
    const std::vector<double> realized{2.0, 3.0, 3.0};
    const auto [next, out] = step(PlantState::initial(c), d, realized, c);
    EXPECT_EQ(out.losses(0, 2), 2.0);
    EXPECT_EQ(out.losses(0, 1), 0.0);
    EXPECT_EQ(out.losses(0, 0), 0.0);
}

TEST(Step, IdleStepOnlyRecordsWeights) {
    const auto c = one_module_two_priorities();
    const std::vector<double> realized{0.0, 0.0};
    const auto d = decision_1x2(0.25, 0.75);
    const auto [next, out] = step(PlantState::initial(c), d, realized, c);
    EXPECT_EQ(next.queues, PlantState::initial(c).queues);
    ASSERT_TRUE(next.last_weights.has_value());
    EXPECT_EQ(*next.last_weights, d.weights);
    EXPECT_EQ(out.inflows.sum() + out.outflows.sum() + out.losses.sum(), 0.0);
}

class FixedController final : public Controller {
public:
    explicit FixedController(std::vector<ControlDecision> plan) : plan_(std::move(plan)) {}
    void prepare(const DemandTrajectory&) override {}
    ControlDecision decide(int t, const PlantState&) override { return plan_.at(static_cast<std::size_t>(t)); }
    PolicyKind kind() const override { return PolicyKind::mpc(1); }

private:
    std::vector<ControlDecision> plan_;
};

TEST(Rollout, ZeroDemandZeroCost) {
    auto c = one_module_two_priorities();
    DemandTrajectory demand{Matrix(3, 2), Matrix(3, 2)};
    for (auto kind : {PolicyKind::batch(), PolicyKind::static_weights(), PolicyKind::proportional(), PolicyKind::mpc(2)}) {
        auto ctl = make_controller(kind, c);
        EXPECT_EQ(rollout(c, *ctl, demand).cumulative_cost, 0.0) << kind.label();
    }
}

TEST(Rollout, MatchesIndependentGreedyOracle) {
    auto c = one_module_two_priorities();
    c.scheduler_period = 0.5;
    c.link_capacity = 2.0;
    c.queue_capacity = 3.0;
    Matrix realized(3, 2);
    const double values[] = {5, 1, 0, 4, 3, 3};
    std::copy(std::begin(values), std::end(values), realized.data().begin());
    std::vector<ControlDecision> plan;
    std::vector<std::vector<double>> w = {{0.7, 0.3}, {0.6, 0.4}, {0.5, 0.5}};
    for (const auto& row : w) plan.push_back(decision_1x2(row[0], row[1]));
    FixedController ctl(plan);
    const auto run = rollout(c, ctl, DemandTrajectory{realized, realized});
    const std::vector<std::vector<double>> d = {{5, 1}, {0, 4}, {3, 3}};
    EXPECT_NEAR(run.cumulative_cost, oracle::greedy_single_module_cost(c, w, d), 1e-12);
    EXPECT_EQ(run.invariants.total_violations(), 0);
}

TEST(Rollout, FlushChargesLeftovers) {
    auto c = one_module_two_priorities();
    c.horizon = 1;
    c.link_capacity = 1.0;
    Matrix realized(1, 2);
    realized(0, 0) = 3.0;
    FixedController ctl({decision_1x2(1.0, 0.0)});
    const auto run = rollout(c, ctl, DemandTrajectory{realized, realized});
    EXPECT_NEAR(run.terminal_cost, 20.0, 1e-12);
    EXPECT_NEAR(run.cumulative_cost, 20.0, 1e-12);
    c.terminal_flush = false;
    FixedController again({decision_1x2(1.0, 0.0)});
    EXPECT_EQ(rollout(c, again, DemandTrajectory{realized, realized}).cumulative_cost, 0.0);
}

// Every policy pays at least the hindsight optimum, and an offline plan
// without planned losses replays to exactly its LP objective.
TEST(Rollout, HindsightBoundOnRandomInstances) {
    int lossless = 0;
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        auto inst = oracle::random_small_instance(seed);
        inst.config.initial_queue = 0.0;
        const auto& c = inst.config;
        const DemandTrajectory demand{inst.flows, inst.flows};
        const double hindsight = lp::solve(build_batch(c, inst.flows).problem).objective_value;
        for (auto kind : {PolicyKind::batch(), PolicyKind::static_weights(), PolicyKind::proportional(),
                          PolicyKind::mpc(2), PolicyKind::windowless()}) {
            auto ctl = make_controller(kind, c);
            const auto run = rollout(c, *ctl, demand);
            EXPECT_EQ(run.invariants.total_violations(), 0) << "seed " << seed << " " << kind.label();
            EXPECT_GE(run.cumulative_cost, hindsight - 1e-6) << "seed " << seed << " " << kind.label();
            if (run.planned_objective && *run.planned_objective <= 1e-9) {
                EXPECT_NEAR(run.cumulative_cost, 0.0, 1e-6) << "seed " << seed << " " << kind.label();
                ++lossless;
            }
        }
    }
    EXPECT_GT(lossless, 0);
}

TEST(Rollout, LosslessPlanReplaysExactly) {
    ScenarioConfig c;
    c.num_modules = 3;
    c.horizon = 10;
    c.lambda_start = 2.0;
    c.lambda_end = 6.0;
    for (int run = 0; run < 5; ++run) {
        const auto demand = generate_demands(c, run);
        for (auto kind : {PolicyKind::batch(), PolicyKind::static_weights()}) {
            auto ctl = make_controller(kind, c);
            const auto traj = rollout(c, *ctl, demand);
            ASSERT_TRUE(traj.planned_objective.has_value());
            EXPECT_NEAR(*traj.planned_objective, 0.0, 1e-9) << kind.label();
            EXPECT_NEAR(traj.cumulative_cost, 0.0, 1e-9) << kind.label();
        }
    }
}

// With overflow the cheapest-first drop rule can keep packets the plan chose
// to discard; the replay then costs more than the plan but never less.
TEST(Rollout, OverflowReplayNeverBeatsPlan) {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        auto inst = oracle::random_small_instance(seed);
        inst.config.initial_queue = 0.0;
        for (auto kind : {PolicyKind::batch(), PolicyKind::static_weights(), PolicyKind::proportional()}) {
            auto ctl = make_controller(kind, inst.config);
            const auto run = rollout(inst.config, *ctl, DemandTrajectory{inst.flows, inst.flows});
            EXPECT_GE(run.cumulative_cost, *run.planned_objective - 1e-6 * std::max(1.0, *run.planned_objective));
        }
    }
}

TEST(Rollout, CountsStepsAndStates) {
    ScenarioConfig c;
    c.num_modules = 2;
    c.horizon = 5;
    auto demand = generate_demands(c, 0);
    auto ctl = make_controller(PolicyKind::proportional(), c);
    const auto run = rollout(c, *ctl, demand, 7);
    EXPECT_EQ(run.steps.size(), 5u);
    EXPECT_EQ(run.states.size(), 5u);
    EXPECT_EQ(run.run_index, 7);
    EXPECT_EQ(run.method, "proportional");
    EXPECT_EQ(run.invariants.steps_checked, 5);
}

}  // namespace
}  // namespace hts
