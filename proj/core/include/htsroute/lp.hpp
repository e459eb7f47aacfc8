#pragma once

#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

namespace hts::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Feasibility tolerance every optimal solution must meet.
inline constexpr double kFeasibilityTol = 1e-6;

enum class Relation { less_equal, equal, greater_equal };

struct Term {
    int var;
    double coef;
};

struct Row {
    std::vector<Term> terms;
    Relation relation;
    double rhs;
};

/// Minimization problem over bounded continuous variables.
struct LpProblem {
    int num_vars = 0;
    std::vector<Term> objective;
    std::vector<Row> constraints;
    std::vector<double> lower;
    std::vector<double> upper;
    std::vector<std::string> names;  // optional, empty or num_vars long

    int add_variable(double lo = 0.0, double hi = kInf, std::string name = {});
    void add_row(std::vector<Term> terms, Relation relation, double rhs);

    /// Throws std::invalid_argument when an index, bound or coefficient is malformed.
    void check_well_formed() const;
};

enum class SolveStatus { optimal, infeasible, unbounded, numeric_failure };

const char* to_string(SolveStatus status);

struct LpSolution {
    SolveStatus status = SolveStatus::numeric_failure;
    std::vector<double> values;  // num_vars entries when optimal
    double objective_value = 0.0;

    bool optimal() const { return status == SolveStatus::optimal; }
};

enum class Backend {
    highs,          // sparse dual simplex from the HiGHS library
    dense_simplex,  // self-contained two-phase tableau simplex, small problems only
};

struct SolveOptions {
    Backend backend = Backend::highs;
};

/// Deterministic for a fixed problem and backend. Infeasible, unbounded and
/// numerically failed problems come back as statuses, never exceptions.
LpSolution solve(const LpProblem& problem, const SolveOptions& options = {});

struct ResidualReport {
    double max_constraint_violation = 0.0;
    double max_bound_violation = 0.0;
    double objective = 0.0;

    double max_violation() const {
        return max_constraint_violation > max_bound_violation ? max_constraint_violation
                                                              : max_bound_violation;
    }
};

/// Throws std::invalid_argument when values has the wrong length.
ResidualReport check_solution(const LpProblem& problem, const std::vector<double>& values);

/// Plain-text listing for debugging, one row per line:
///   min: +10 L[0] +4 L[1] ...
///   r0: +1 x0 -1 x1 <= 3
///   bounds: 0 <= x0 <= inf
void write_listing(std::ostream& os, const LpProblem& problem);

namespace detail {
LpSolution solve_highs(const LpProblem& problem);
LpSolution solve_dense(const LpProblem& problem);
}  // namespace detail

}  // namespace hts::lp
