#include <Highs.h>

#include <algorithm>

#include "htsroute/lp.hpp"

namespace hts::lp::detail {

namespace {

HighsLp to_highs(const LpProblem& problem) {
    HighsLp lp;
    lp.num_col_ = problem.num_vars;
    lp.num_row_ = static_cast<HighsInt>(problem.constraints.size());
    lp.sense_ = ObjSense::kMinimize;
    lp.col_cost_.assign(static_cast<std::size_t>(problem.num_vars), 0.0);
    for (const auto& term : problem.objective) lp.col_cost_[static_cast<std::size_t>(term.var)] += term.coef;
    lp.col_lower_ = problem.lower;
    lp.col_upper_ = problem.upper;

    auto& a = lp.a_matrix_;
    a.format_ = MatrixFormat::kRowwise;
    a.num_col_ = lp.num_col_;
    a.num_row_ = lp.num_row_;
    a.start_.assign(1, 0);  // default-constructed matrix already holds a start entry
    a.start_.reserve(problem.constraints.size() + 1);
    lp.row_lower_.reserve(problem.constraints.size());
    lp.row_upper_.reserve(problem.constraints.size());

    std::vector<Term> merged;
    for (const auto& row : problem.constraints) {
        merged = row.terms;
        std::sort(merged.begin(), merged.end(), [](const Term& x, const Term& y) { return x.var < y.var; });
        for (std::size_t i = 0; i < merged.size(); ++i) {
            if (!a.index_.empty() && static_cast<HighsInt>(a.index_.size()) > a.start_.back() &&
                a.index_.back() == merged[i].var) {
                a.value_.back() += merged[i].coef;
            } else {
                a.index_.push_back(merged[i].var);
                a.value_.push_back(merged[i].coef);
            }
        }
        a.start_.push_back(static_cast<HighsInt>(a.index_.size()));
        switch (row.relation) {
            case Relation::less_equal:
                lp.row_lower_.push_back(-kHighsInf);
                lp.row_upper_.push_back(row.rhs);
                break;
            case Relation::greater_equal:
                lp.row_lower_.push_back(row.rhs);
                lp.row_upper_.push_back(kHighsInf);
                break;
            case Relation::equal:
                lp.row_lower_.push_back(row.rhs);
                lp.row_upper_.push_back(row.rhs);
                break;
        }
    }
    return lp;
}

void configure(Highs& highs, bool presolve) {
    highs.setOptionValue("output_flag", false);
    highs.setOptionValue("threads", 1);
    highs.setOptionValue("random_seed", 0);
    highs.setOptionValue("solver", std::string("simplex"));
    highs.setOptionValue("presolve", std::string(presolve ? "on" : "off"));
    highs.setOptionValue("primal_feasibility_tolerance", 1e-8);
    highs.setOptionValue("dual_feasibility_tolerance", 1e-8);
}

LpSolution run(const HighsLp& lp, const LpProblem& problem, bool presolve, bool& ambiguous) {
    Highs highs;
    configure(highs, presolve);
    LpSolution out;
    ambiguous = false;
    if (highs.passModel(lp) == HighsStatus::kError) return out;
    const HighsStatus run_status = highs.run();
    const HighsModelStatus status = highs.getModelStatus();
    switch (status) {
        case HighsModelStatus::kOptimal: {
            if (run_status == HighsStatus::kError) return out;
            out.status = SolveStatus::optimal;
            out.values = highs.getSolution().col_value;
            out.objective_value = 0.0;
            for (const auto& term : problem.objective)
                out.objective_value += term.coef * out.values[static_cast<std::size_t>(term.var)];
            return out;
        }
        case HighsModelStatus::kInfeasible:
            out.status = SolveStatus::infeasible;
            return out;
        case HighsModelStatus::kUnbounded:
            out.status = SolveStatus::unbounded;
            return out;
        case HighsModelStatus::kUnboundedOrInfeasible:
            ambiguous = true;
            return out;
        default:
            return out;
    }
}

}  // namespace

LpSolution solve_highs(const LpProblem& problem) {
    const HighsLp lp = to_highs(problem);
    bool ambiguous = false;
    LpSolution sol = run(lp, problem, true, ambiguous);
    if (ambiguous) {
        // Presolve cannot always tell the two apart; the plain simplex can.
        sol = run(lp, problem, false, ambiguous);
        if (ambiguous) sol.status = SolveStatus::infeasible;
    }
    return sol;
}

}  // namespace hts::lp::detail
