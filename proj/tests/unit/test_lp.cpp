#include <gtest/gtest.h>

#include <sstream>

#include "htsroute/arrivals.hpp"
#include "htsroute/lp.hpp"

namespace hts::lp {

void PrintTo(Backend b, std::ostream* os) { *os << (b == Backend::highs ? "highs" : "dense_simplex"); }

namespace {

class LpBackends : public ::testing::TestWithParam<Backend> {
protected:
    SolveOptions options() const { return {GetParam()}; }
};

TEST_P(LpBackends, LowerBoundForcesOptimum) {
    LpProblem lp;
    const int x = lp.add_variable();
    lp.objective = {{x, 1.0}};
    lp.add_row({{x, 1.0}}, Relation::greater_equal, 3.0);
    const auto sol = solve(lp, options());
    ASSERT_TRUE(sol.optimal());
    EXPECT_NEAR(sol.values[0], 3.0, 1e-9);
    EXPECT_NEAR(sol.objective_value, 3.0, 1e-9);
}

TEST_P(LpBackends, MaximizeToUpperRow) {
    LpProblem lp;
    const int x = lp.add_variable();
    lp.objective = {{x, -1.0}};
    lp.add_row({{x, 1.0}}, Relation::less_equal, 5.0);
    const auto sol = solve(lp, options());
    ASSERT_TRUE(sol.optimal());
    EXPECT_NEAR(sol.values[0], 5.0, 1e-9);
}

TEST_P(LpBackends, EmptyFeasibleSetIsInfeasible) {
    LpProblem lp;
    const int x = lp.add_variable();
    lp.objective = {{x, 1.0}};
    lp.add_row({{x, 1.0}}, Relation::less_equal, -1.0);
    EXPECT_EQ(solve(lp, options()).status, SolveStatus::infeasible);
}

TEST_P(LpBackends, UnboundedDirection) {
    LpProblem lp;
    const int x = lp.add_variable();
    const int y = lp.add_variable();
    lp.objective = {{x, -1.0}};
    lp.add_row({{x, 1.0}, {y, -1.0}}, Relation::less_equal, 1.0);
    EXPECT_EQ(solve(lp, options()).status, SolveStatus::unbounded);
}

TEST_P(LpBackends, FreeAndBoundedVariables) {
    // x + y = 1 turns the objective into 1 + y, so y sits at its lower bound.
    LpProblem lp;
    const int x = lp.add_variable(-kInf, kInf);
    const int y = lp.add_variable(-2.0, 4.0);
    lp.objective = {{x, 1.0}, {y, 2.0}};
    lp.add_row({{x, 1.0}, {y, 1.0}}, Relation::equal, 1.0);
    lp.add_row({{x, 1.0}}, Relation::greater_equal, -3.0);
    const auto sol = solve(lp, options());
    ASSERT_TRUE(sol.optimal());
    EXPECT_NEAR(sol.values[0], 3.0, 1e-9);
    EXPECT_NEAR(sol.values[1], -2.0, 1e-9);
    EXPECT_NEAR(sol.objective_value, -1.0, 1e-9);
}

TEST_P(LpBackends, NegativeUpperBoundOnly) {
    LpProblem lp;
    const int x = lp.add_variable(-kInf, -2.0);
    lp.objective = {{x, -1.0}};
    const auto sol = solve(lp, options());
    ASSERT_TRUE(sol.optimal());
    EXPECT_NEAR(sol.values[0], -2.0, 1e-9);
}

TEST_P(LpBackends, RepeatedSolveIsIdentical) {
    LpProblem lp;
    for (int i = 0; i < 4; ++i) lp.add_variable(0.0, 10.0);
    lp.objective = {{0, 1.0}, {1, 1.0}, {2, 1.0}, {3, 1.0}};  // degenerate: many optima
    lp.add_row({{0, 1.0}, {1, 1.0}, {2, 1.0}, {3, 1.0}}, Relation::greater_equal, 7.0);
    const auto a = solve(lp, options());
    const auto b = solve(lp, options());
    ASSERT_TRUE(a.optimal());
    EXPECT_EQ(a.values, b.values);
    EXPECT_NEAR(a.objective_value, b.objective_value, 1e-9);
}

INSTANTIATE_TEST_SUITE_P(Backends, LpBackends, ::testing::Values(Backend::highs, Backend::dense_simplex),
                         [](const auto& info) { return info.param == Backend::highs ? "highs" : "dense"; });

TEST(CheckSolution, FeasiblePointHasNoViolation) {
    LpProblem lp;
    const int x = lp.add_variable();
    lp.objective = {{x, 1.0}};
    lp.add_row({{x, 1.0}}, Relation::greater_equal, 3.0);
    const auto r = check_solution(lp, {3.0});
    EXPECT_EQ(r.max_violation(), 0.0);
    EXPECT_EQ(r.objective, 3.0);
}

TEST(CheckSolution, ReportsShortfall) {
    LpProblem lp;
    const int x = lp.add_variable();
    lp.add_row({{x, 1.0}}, Relation::greater_equal, 3.0);
    EXPECT_DOUBLE_EQ(check_solution(lp, {2.5}).max_constraint_violation, 0.5);
}

TEST(CheckSolution, VacuousWithoutRows) {
    LpProblem lp;
    lp.add_variable();
    EXPECT_EQ(check_solution(lp, {1.0}).max_violation(), 0.0);
}

TEST(CheckSolution, BoundViolation) {
    LpProblem lp;
    lp.add_variable(0.0, 1.0);
    EXPECT_DOUBLE_EQ(check_solution(lp, {1.25}).max_bound_violation, 0.25);
    EXPECT_DOUBLE_EQ(check_solution(lp, {-0.5}).max_bound_violation, 0.5);
}

TEST(CheckSolution, LengthMismatchThrows) {
    LpProblem lp;
    lp.add_variable();
    EXPECT_THROW(check_solution(lp, {}), std::invalid_argument);
}

TEST(WellFormed, RejectsBadIndexAndBounds) {
    LpProblem lp;
    lp.add_variable();
    lp.add_row({{3, 1.0}}, Relation::equal, 0.0);
    EXPECT_THROW(solve(lp), std::invalid_argument);

    LpProblem inverted;
    inverted.add_variable(2.0, 1.0);
    EXPECT_THROW(solve(inverted), std::invalid_argument);

    LpProblem nan_coef;
    nan_coef.add_variable();
    nan_coef.objective = {{0, std::numeric_limits<double>::quiet_NaN()}};
    EXPECT_THROW(solve(nan_coef), std::invalid_argument);
}

TEST(Listing, OneLinePerRow) {
    LpProblem lp;
    lp.add_variable(0.0, kInf, "x");
    lp.add_variable(0.0, kInf, "y");
    lp.objective = {{0, 1.0}};
    lp.add_row({{0, 1.0}, {1, -1.0}}, Relation::less_equal, 3.0);
    lp.add_row({{1, 1.0}}, Relation::equal, 1.0);
    std::ostringstream os;
    write_listing(os, lp);
    const auto text = os.str();
    EXPECT_NE(text.find("min:"), std::string::npos);
    EXPECT_NE(text.find("r0:"), std::string::npos);
    EXPECT_NE(text.find("r1:"), std::string::npos);
    EXPECT_NE(text.find("<= 3"), std::string::npos);
}

// Random dense LPs with a known feasible point: both backends must agree on
// the status and on the objective.
TEST(CrossCheck, DenseAgreesWithHighsOnRandomProblems) {
    SplitMix64 rng(99);
    int optimal = 0;
    for (int trial = 0; trial < 200; ++trial) {
        LpProblem lp;
        const int n = 2 + static_cast<int>(rng.next() % 6);
        const int m = 1 + static_cast<int>(rng.next() % 6);
        std::vector<double> x0(static_cast<std::size_t>(n));
        for (int j = 0; j < n; ++j) {
            x0[static_cast<std::size_t>(j)] = 3.0 * rng.next_unit();
            const bool boxed = rng.next_unit() < 0.5;
            lp.add_variable(0.0, boxed ? x0[static_cast<std::size_t>(j)] + 2.0 * rng.next_unit() : kInf);
            lp.objective.push_back({j, 2.0 * rng.next_unit() - 0.5});
        }
        for (int i = 0; i < m; ++i) {
            std::vector<Term> terms;
            double lhs = 0.0;
            for (int j = 0; j < n; ++j) {
                if (rng.next_unit() < 0.3) continue;
                const double a = 2.0 * rng.next_unit() - 1.0;
                terms.push_back({j, a});
                lhs += a * x0[static_cast<std::size_t>(j)];
            }
            const double u = rng.next_unit();
            const Relation rel = u < 0.4 ? Relation::less_equal : u < 0.8 ? Relation::greater_equal : Relation::equal;
            const double slack = rel == Relation::equal ? 0.0 : rng.next_unit();
            lp.add_row(std::move(terms), rel, rel == Relation::less_equal ? lhs + slack : lhs - slack);
        }
        const auto h = solve(lp, {Backend::highs});
        const auto d = solve(lp, {Backend::dense_simplex});
        ASSERT_EQ(h.status, d.status) << "trial " << trial;
        ASSERT_NE(h.status, SolveStatus::infeasible) << "trial " << trial;
        if (!h.optimal()) continue;
        ++optimal;
        EXPECT_NEAR(h.objective_value, d.objective_value, 1e-6 * std::max(1.0, std::abs(h.objective_value)));
        EXPECT_LE(check_solution(lp, h.values).max_violation(), kFeasibilityTol);
        EXPECT_LE(check_solution(lp, d.values).max_violation(), kFeasibilityTol);
    }
    EXPECT_GT(optimal, 50);
}

}  // namespace
}  // namespace hts::lp
