#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "htsroute/lp.hpp"

namespace hts::lp {

int LpProblem::add_variable(double lo, double hi, std::string name) {
    lower.push_back(lo);
    upper.push_back(hi);
    if (!name.empty() || !names.empty()) {
        names.resize(static_cast<std::size_t>(num_vars));
        names.push_back(std::move(name));
    }
    return num_vars++;
}

void LpProblem::add_row(std::vector<Term> terms, Relation relation, double rhs) {
    constraints.push_back(Row{std::move(terms), relation, rhs});
}

void LpProblem::check_well_formed() const {
    const auto n = static_cast<std::size_t>(num_vars);
    if (num_vars < 0 || lower.size() != n || upper.size() != n)
        throw std::invalid_argument("lp: bound vectors must have num_vars entries");
    if (!names.empty() && names.size() != n)
        throw std::invalid_argument("lp: names must be empty or have num_vars entries");
    for (std::size_t j = 0; j < n; ++j) {
        if (std::isnan(lower[j]) || std::isnan(upper[j]) || lower[j] > upper[j] ||
            lower[j] == kInf || upper[j] == -kInf)
            throw std::invalid_argument("lp: bad bounds on variable " + std::to_string(j));
    }
    auto check_terms = [&](const std::vector<Term>& terms) {
        for (const auto& term : terms) {
            if (term.var < 0 || term.var >= num_vars)
                throw std::invalid_argument("lp: variable index out of range");
            if (!std::isfinite(term.coef)) throw std::invalid_argument("lp: non-finite coefficient");
        }
    };
    check_terms(objective);
    for (const auto& row : constraints) {
        check_terms(row.terms);
        if (!std::isfinite(row.rhs)) throw std::invalid_argument("lp: non-finite right-hand side");
    }
}

const char* to_string(SolveStatus status) {
    switch (status) {
        case SolveStatus::optimal: return "optimal";
        case SolveStatus::infeasible: return "infeasible";
        case SolveStatus::unbounded: return "unbounded";
        case SolveStatus::numeric_failure: return "numeric_failure";
    }
    return "unknown";
}

LpSolution solve(const LpProblem& problem, const SolveOptions& options) {
    problem.check_well_formed();
    switch (options.backend) {
        case Backend::highs: return detail::solve_highs(problem);
        case Backend::dense_simplex: return detail::solve_dense(problem);
    }
    return {};
}

ResidualReport check_solution(const LpProblem& problem, const std::vector<double>& values) {
    if (values.size() != static_cast<std::size_t>(problem.num_vars))
        throw std::invalid_argument("check_solution: expected " + std::to_string(problem.num_vars) +
                                    " values, got " + std::to_string(values.size()));
    ResidualReport report;
    for (const auto& term : problem.objective)
        report.objective += term.coef * values[static_cast<std::size_t>(term.var)];
    for (const auto& row : problem.constraints) {
        double lhs = 0.0;
        for (const auto& term : row.terms) lhs += term.coef * values[static_cast<std::size_t>(term.var)];
        double violation = 0.0;
        switch (row.relation) {
            case Relation::less_equal: violation = lhs - row.rhs; break;
            case Relation::greater_equal: violation = row.rhs - lhs; break;
            case Relation::equal: violation = std::abs(lhs - row.rhs); break;
        }
        report.max_constraint_violation = std::max(report.max_constraint_violation, violation);
    }
    for (std::size_t j = 0; j < values.size(); ++j) {
        const double below = problem.lower[j] - values[j];
        const double above = values[j] - problem.upper[j];
        report.max_bound_violation = std::max({report.max_bound_violation, below, above});
    }
    return report;
}

namespace {

void write_terms(std::ostream& os, const LpProblem& p, const std::vector<Term>& terms) {
    for (const auto& term : terms) {
        os << ' ' << (term.coef < 0 ? '-' : '+') << std::abs(term.coef) << ' ';
        if (!p.names.empty()) os << p.names[static_cast<std::size_t>(term.var)];
        else os << 'x' << term.var;
    }
}

}  // namespace

void write_listing(std::ostream& os, const LpProblem& p) {
    os << "min:";
    write_terms(os, p, p.objective);
    os << '\n';
    for (std::size_t r = 0; r < p.constraints.size(); ++r) {
        const auto& row = p.constraints[r];
        os << 'r' << r << ':';
        write_terms(os, p, row.terms);
        switch (row.relation) {
            case Relation::less_equal: os << " <= "; break;
            case Relation::greater_equal: os << " >= "; break;
            case Relation::equal: os << " = "; break;
        }
        os << row.rhs << '\n';
    }
    for (int j = 0; j < p.num_vars; ++j) {
        const auto ju = static_cast<std::size_t>(j);
        os << "bounds: " << p.lower[ju] << " <= ";
        if (!p.names.empty()) os << p.names[ju];
        else os << 'x' << j;
        os << " <= " << p.upper[ju] << '\n';
    }
}

}  // namespace hts::lp
