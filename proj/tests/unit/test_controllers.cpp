#include <gtest/gtest.h>

#include "htsroute/arrivals.hpp"
#include "htsroute/controllers.hpp"
#include "htsroute/plant.hpp"
#include "random_instances.hpp"

namespace hts {
namespace {

ScenarioConfig reduced() {
    ScenarioConfig c;
    c.num_modules = 3;
    c.horizon = 12;
    c.window = 4;
    c.lambda_start = 20.0;
    c.lambda_end = 90.0;
    c.link_capacity = 6.0;
    c.queue_capacity = 5.0;
    return c;
}

TEST(PolicyKind, LabelsAndParsing) {
    EXPECT_EQ(PolicyKind::batch().label(), "batch_hindsight");
    EXPECT_EQ(PolicyKind::static_weights().label(), "static_batch");
    EXPECT_EQ(PolicyKind::proportional().label(), "proportional");
    EXPECT_EQ(PolicyKind::mpc(10).label(), "mpc_w10");
    EXPECT_EQ(PolicyKind::windowless().label(), "windowless_mpc");
    EXPECT_EQ(PolicyKind::windowless().effective_window(), 1);

    EXPECT_EQ(parse_policy("batch", 10), PolicyKind::batch());
    EXPECT_EQ(parse_policy("static", 10), PolicyKind::static_weights());
    EXPECT_EQ(parse_policy("prop", 10), PolicyKind::proportional());
    EXPECT_EQ(parse_policy("mpc", 7), PolicyKind::mpc(7));
    EXPECT_EQ(parse_policy("mpc:3", 7), PolicyKind::mpc(3));
    EXPECT_EQ(parse_policy("mpc_w20", 7), PolicyKind::mpc(20));
    EXPECT_EQ(parse_policy("windowless", 7), PolicyKind::windowless());
    EXPECT_THROW(parse_policy("mpc:0", 7), std::invalid_argument);
    EXPECT_THROW(parse_policy("mpc:x", 7), std::invalid_argument);
    EXPECT_THROW(parse_policy("greedy", 7), std::invalid_argument);
}

TEST(Offline, ZeroFlowsNoPlannedLoss) {
    const auto c = reduced();
    const Matrix zero(12, 3);
    for (auto kind : {PolicyKind::batch(), PolicyKind::static_weights(), PolicyKind::proportional()}) {
        const auto traj = decide_offline(kind, c, zero);
        EXPECT_NEAR(traj.objective, 0.0, 1e-9);
        for (const auto& l : traj.planned_losses) EXPECT_EQ(l.sum(), 0.0);
        for (const auto& d : traj.decisions)
            for (std::size_t m = 0; m < 3; ++m) EXPECT_NEAR(d.weights.row_sum(m), 1.0, 1e-15);
    }
}

TEST(Offline, ProportionalWeightsEveryStep) {
    const auto c = reduced();
    const auto demand = generate_demands(c, 0);
    const auto traj = decide_offline(PolicyKind::proportional(), c, demand.realized);
    for (const auto& d : traj.decisions)
        for (std::size_t m = 0; m < 3; ++m) {
            EXPECT_NEAR(d.weights(m, 0), 2.0 / 3.0, 1e-12);
            EXPECT_NEAR(d.weights(m, 1), 4.0 / 15.0, 1e-12);
            EXPECT_NEAR(d.weights(m, 2), 1.0 / 15.0, 1e-12);
        }
}

TEST(Offline, BatchNoWorseThanStatic) {
    const auto c = reduced();
    for (int run = 0; run < 5; ++run) {
        const auto demand = generate_demands(c, run);
        const double b = decide_offline(PolicyKind::batch(), c, demand.realized).objective;
        const double s = decide_offline(PolicyKind::static_weights(), c, demand.realized).objective;
        EXPECT_LE(b, s + 1e-6);
    }
}

TEST(Offline, RejectsOnlinePolicy) {
    EXPECT_THROW(decide_offline(PolicyKind::mpc(3), reduced(), Matrix(12, 3)), std::invalid_argument);
}

TEST(Mpc, ZeroExpectedFlowGivesZeroInflow) {
    const auto c = reduced();
    const auto d = decide_step_mpc(c, PlantState::initial(c), 0, Matrix(12, 3), 4);
    EXPECT_EQ(d.inflow_plan.sum(), 0.0);
    for (std::size_t m = 0; m < 3; ++m) EXPECT_NEAR(d.weights.row_sum(m), 1.0, 1e-15);
}

TEST(Mpc, LastStepDrainsUpToCaps) {
    auto c = reduced();
    auto state = PlantState::initial(c);
    state.queues(0, 0) = 0.3;
    state.queues(1, 2) = 0.2;
    const auto d = decide_step_mpc(c, state, c.horizon - 1, Matrix(12, 3), 10);
    // Service needed is tiny, so every queue can drain; weights still form a simplex.
    for (std::size_t m = 0; m < 3; ++m) EXPECT_NEAR(d.weights.row_sum(m), 1.0, 1e-15);
    EXPECT_GE(d.weights(0, 0) / c.scheduler_period, 0.3 - 1e-9);
    EXPECT_GE(d.weights(1, 2) / c.scheduler_period, 0.2 - 1e-9);
}

TEST(Mpc, DecisionsRespectRampAgainstImplementedWeights) {
    const auto c = reduced();
    const auto demand = generate_demands(c, 1);
    auto controller = make_controller(PolicyKind::mpc(4), c);
    controller->prepare(demand);
    PlantState state = PlantState::initial(c);
    for (int t = 0; t < c.horizon; ++t) {
        const auto d = controller->decide(t, state);
        if (state.last_weights)
            for (std::size_t i = 0; i < d.weights.data().size(); ++i)
                EXPECT_LE(std::abs(d.weights.data()[i] - state.last_weights->data()[i]), c.max_weight_step + 1e-6)
                    << "t " << t;
        const std::vector<double> realized(demand.realized.data().begin() + t * 3,
                                           demand.realized.data().begin() + t * 3 + 3);
        state = step(state, d, realized, c).first;
    }
}

TEST(Mpc, WindowlessMatchesWindowOne) {
    const auto c = reduced();
    const auto demand = generate_demands(c, 2);
    auto a = make_controller(PolicyKind::windowless(), c);
    auto b = make_controller(PolicyKind::mpc(1), c);
    a->prepare(demand);
    b->prepare(demand);
    const auto ra = rollout(c, *a, demand);
    const auto rb = rollout(c, *b, demand);
    EXPECT_EQ(ra.cumulative_cost, rb.cumulative_cost);
    ASSERT_EQ(ra.states.size(), rb.states.size());
    for (std::size_t t = 0; t < ra.states.size(); ++t) {
        EXPECT_EQ(ra.states[t].queues, rb.states[t].queues);
        EXPECT_EQ(ra.states[t].last_weights, rb.states[t].last_weights);
    }
}

// Tightening a planned loss of priority p by eps can save at most eps * k_p;
// since the optimum is already minimal the tightened objective must not drop.
TEST(Mpc, LossShiftingCannotImproveWindowOptimum) {
    auto c = reduced();
    c.lambda_start = 60.0;
    Matrix expected(12, 3);
    for (int t = 0; t < 12; ++t)
        for (int p = 0; p < 3; ++p) expected(static_cast<std::size_t>(t), static_cast<std::size_t>(p)) = lambda_schedule(c, t, p);
    auto state = PlantState::initial(c);
    const auto f = build_mpc_window(c, state, 2, expected);
    const auto base = lp::solve(f.problem);
    ASSERT_TRUE(base.optimal());
    int checked = 0;
    const double eps = 0.01;
    for (int s = 0; s < f.vars.steps && checked < 12; ++s)
        for (int m = 0; m < 3; ++m)
            for (int p = 0; p + 1 < 3; ++p) {
                const int idx = f.vars.loss(s, m, p);
                const double planned = base.values[static_cast<std::size_t>(idx)];
                if (planned <= 1e-6) continue;
                auto tightened = f.problem;
                tightened.add_row({{idx, 1.0}}, lp::Relation::less_equal, planned - std::min(eps, planned));
                const auto alt = lp::solve(tightened);
                ASSERT_TRUE(alt.optimal());
                const double kq = c.loss_costs[static_cast<std::size_t>(p + 1)];
                EXPECT_GE(alt.objective_value, base.objective_value - eps * kq - 1e-6);
                EXPECT_GE(alt.objective_value, base.objective_value - 1e-6);
                ++checked;
            }
    SUCCEED() << checked << " positive high-priority losses probed";
}

TEST(Controllers, OfflineExposesPlannedObjective) {
    const auto c = reduced();
    auto ctl = make_controller(PolicyKind::batch(), c);
    ctl->prepare(generate_demands(c, 0));
    EXPECT_TRUE(ctl->planned_objective().has_value());
    auto online = make_controller(PolicyKind::mpc(2), c);
    EXPECT_FALSE(online->planned_objective().has_value());
}

}  // namespace
}  // namespace hts
