#include <gtest/gtest.h>

#include <algorithm>

#include "htsroute/domain.hpp"

namespace hts {
namespace {

bool has_issue(const std::vector<ConfigIssue>& issues, const std::string& tag) {
    return std::any_of(issues.begin(), issues.end(), [&](const ConfigIssue& i) { return i.tag() == tag; });
}

TEST(ValidateConfig, DefaultsMatchPublishedSetup) {
    const ScenarioConfig c;
    EXPECT_EQ(c.num_modules, 16);
    EXPECT_EQ(c.num_priorities, 3);
    EXPECT_EQ(c.horizon, 100);
    EXPECT_EQ(c.window, 10);
    EXPECT_EQ(c.loss_costs, (std::vector<double>{10, 4, 1}));
    EXPECT_EQ(c.queue_capacity, 10.0);
    EXPECT_EQ(c.initial_queue, 0.0);
    EXPECT_EQ(c.max_weight_step, 0.1);
    EXPECT_TRUE(config_issues(c).empty());
    EXPECT_EQ(validate_config(c), c);
}

TEST(ValidateConfig, NegativeCostIsRangeError) {
    ScenarioConfig c;
    c.loss_costs = {10, 4, -1};
    const auto issues = config_issues(c);
    ASSERT_EQ(issues.size(), 1u);
    EXPECT_EQ(issues[0].tag(), "invalid_range: loss_costs");
    EXPECT_THROW(validate_config(c), ConfigError);
}

TEST(ValidateConfig, CostLengthMismatchIsDimensionError) {
    ScenarioConfig c;
    c.loss_costs = {10, 4};
    EXPECT_TRUE(has_issue(config_issues(c), "invalid_dimension: loss_costs"));
}

TEST(ValidateConfig, ReportsEveryViolation) {
    ScenarioConfig c;
    c.horizon = 0;
    c.window = 0;
    c.max_weight_step = 1.5;
    c.scheduler_period = 0.0;
    c.initial_queue = 4.0;  // 3 * 4 > 10
    const auto issues = config_issues(c);
    EXPECT_TRUE(has_issue(issues, "invalid_dimension: horizon"));
    EXPECT_TRUE(has_issue(issues, "invalid_dimension: window"));
    EXPECT_TRUE(has_issue(issues, "invalid_range: max_weight_step"));
    EXPECT_TRUE(has_issue(issues, "invalid_range: scheduler_period"));
    EXPECT_TRUE(has_issue(issues, "invalid_range: initial_queue"));
    try {
        validate_config(c);
        FAIL() << "expected ConfigError";
    } catch (const ConfigError& e) {
        EXPECT_EQ(e.issues().size(), issues.size());
    }
}

TEST(ValidateConfig, IncreasingCostsRejected) {
    ScenarioConfig c;
    c.loss_costs = {1, 4, 10};
    EXPECT_TRUE(has_issue(config_issues(c), "invalid_range: loss_costs"));
}

TEST(LambdaSchedule, PublishedEndpoints) {
    const ScenarioConfig c;
    EXPECT_DOUBLE_EQ(lambda_schedule(c, 0, 0), 1.0);
    EXPECT_DOUBLE_EQ(lambda_schedule(c, 99, 2), 100.0);
    EXPECT_DOUBLE_EQ(lambda_schedule(c, 0, 1), 2.5);
}

TEST(LambdaSchedule, SingleStepHorizonUsesStartRate) {
    ScenarioConfig c;
    c.horizon = 1;
    EXPECT_DOUBLE_EQ(base_arrival_rate(c, 0), c.lambda_start);
}

TEST(LambdaSchedule, OutOfRangeIndexThrows) {
    const ScenarioConfig c;
    EXPECT_THROW(lambda_schedule(c, -1, 0), std::out_of_range);
    EXPECT_THROW(lambda_schedule(c, 100, 0), std::out_of_range);
    EXPECT_THROW(lambda_schedule(c, 0, 3), std::out_of_range);
}

TEST(LambdaSchedule, MonotoneInTimeAndPriority) {
    for (const auto& costs : {std::vector<double>{10, 4, 1}, std::vector<double>{5, 5, 2, 1}}) {
        ScenarioConfig c;
        c.num_priorities = static_cast<int>(costs.size());
        c.loss_costs = costs;
        c.horizon = 37;
        for (int t = 0; t < c.horizon; ++t) {
            for (int p = 0; p < c.num_priorities; ++p) {
                if (t > 0) EXPECT_GE(lambda_schedule(c, t, p), lambda_schedule(c, t - 1, p));
                if (p > 0) EXPECT_GE(lambda_schedule(c, t, p), lambda_schedule(c, t, p - 1));
            }
        }
    }
}

TEST(PlantState, InitialFillsWithQ0AndNoWeights) {
    ScenarioConfig c;
    c.initial_queue = 2.0;
    const auto s = PlantState::initial(c);
    EXPECT_EQ(s.queues.rows(), 16u);
    EXPECT_EQ(s.queues.cols(), 3u);
    EXPECT_DOUBLE_EQ(s.queues.sum(), 2.0 * 48);
    EXPECT_FALSE(s.last_weights.has_value());
}

}  // namespace
}  // namespace hts
