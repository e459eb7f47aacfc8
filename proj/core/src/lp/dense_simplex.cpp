// Two-phase tableau simplex over the standard form
//   min c'y  s.t.  A y = b, y >= 0, b >= 0.
// Dense storage, so it is only meant for problems with a few hundred
// variables. Used as the independent backend in tests.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>

#include "htsroute/lp.hpp"

namespace hts::lp::detail {

namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kCostTol = 1e-9;

// How an original variable is recovered from standard-form columns.
struct VarMapping {
    enum class Kind { shifted, mirrored, split } kind;
    int col;         // main column
    int neg_col;     // second column for split variables
    double offset;   // lower bound (shifted) or upper bound (mirrored)
};

class Tableau {
public:
    Tableau(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * (cols + 1), 0.0) {}

    double& at(std::size_t r, std::size_t c) { return a_[r * (cols_ + 1) + c]; }
    double at(std::size_t r, std::size_t c) const { return a_[r * (cols_ + 1) + c]; }
    double& rhs(std::size_t r) { return at(r, cols_); }
    double rhs(std::size_t r) const { return at(r, cols_); }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    void pivot(std::size_t pr, std::size_t pc) {
        const double inv = 1.0 / at(pr, pc);
        for (std::size_t c = 0; c <= cols_; ++c) at(pr, c) *= inv;
        at(pr, pc) = 1.0;
        for (std::size_t r = 0; r < rows_; ++r) {
            if (r == pr) continue;
            const double f = at(r, pc);
            if (f == 0.0) continue;
            for (std::size_t c = 0; c <= cols_; ++c) at(r, c) -= f * at(pr, c);
            at(r, pc) = 0.0;
        }
    }

private:
    std::size_t rows_, cols_;
    std::vector<double> a_;
};

enum class PhaseResult { optimal, unbounded, stalled };

// Minimizes cost'y over the current basis. Columns with allowed[c] == false
// never enter. Dantzig pricing, falling back to Bland's rule when the
// objective stops moving so degenerate cycling cannot persist.
PhaseResult optimize(Tableau& tab, std::vector<std::size_t>& basis, const std::vector<double>& cost,
                     const std::vector<bool>& allowed) {
    const std::size_t m = tab.rows();
    const std::size_t n = tab.cols();
    std::vector<double> reduced(n);
    const std::size_t max_iter = 50 * (m + n) + 1000;
    std::size_t stale = 0;
    double last_obj = std::numeric_limits<double>::infinity();

    for (std::size_t iter = 0; iter < max_iter; ++iter) {
        double obj = 0.0;
        for (std::size_t r = 0; r < m; ++r) obj += cost[basis[r]] * tab.rhs(r);
        stale = (obj < last_obj - 1e-12) ? 0 : stale + 1;
        last_obj = std::min(last_obj, obj);
        const bool bland = stale > 20;

        for (std::size_t c = 0; c < n; ++c) reduced[c] = cost[c];
        for (std::size_t r = 0; r < m; ++r) {
            const double cb = cost[basis[r]];
            if (cb == 0.0) continue;
            for (std::size_t c = 0; c < n; ++c) reduced[c] -= cb * tab.at(r, c);
        }

        std::size_t enter = n;
        double best = -kCostTol;
        for (std::size_t c = 0; c < n; ++c) {
            if (!allowed[c] || reduced[c] >= -kCostTol) continue;
            if (bland) { enter = c; break; }
            if (reduced[c] < best) { best = reduced[c]; enter = c; }
        }
        if (enter == n) return PhaseResult::optimal;

        std::size_t leave = m;
        double best_ratio = std::numeric_limits<double>::infinity();
        for (std::size_t r = 0; r < m; ++r) {
            const double coef = tab.at(r, enter);
            if (coef <= kPivotTol) continue;
            const double ratio = tab.rhs(r) / coef;
            if (ratio < best_ratio - 1e-12 ||
                (std::abs(ratio - best_ratio) <= 1e-12 && leave < m && basis[r] < basis[leave])) {
                best_ratio = ratio;
                leave = r;
            }
        }
        if (leave == m) return PhaseResult::unbounded;
        tab.pivot(leave, enter);
        basis[leave] = enter;
    }
    return PhaseResult::stalled;
}

}  // namespace

LpSolution solve_dense(const LpProblem& problem) {
    const auto n_orig = static_cast<std::size_t>(problem.num_vars);

    // Column layout: transformed variables, then slacks, then artificials.
    std::vector<VarMapping> mapping(n_orig);
    std::size_t ncols = 0;
    struct ExtraRow { std::size_t col; double rhs; };
    std::vector<ExtraRow> upper_rows;
    for (std::size_t j = 0; j < n_orig; ++j) {
        const double lo = problem.lower[j];
        const double hi = problem.upper[j];
        if (std::isfinite(lo)) {
            mapping[j] = {VarMapping::Kind::shifted, static_cast<int>(ncols++), -1, lo};
            if (std::isfinite(hi)) upper_rows.push_back({static_cast<std::size_t>(mapping[j].col), hi - lo});
        } else if (std::isfinite(hi)) {
            mapping[j] = {VarMapping::Kind::mirrored, static_cast<int>(ncols++), -1, hi};
        } else {
            const int pos = static_cast<int>(ncols++);
            const int neg = static_cast<int>(ncols++);
            mapping[j] = {VarMapping::Kind::split, pos, neg, 0.0};
        }
    }
    const std::size_t n_struct = ncols;

    // Rows in the transformed space, before slacks.
    struct DenseRow {
        std::vector<std::pair<std::size_t, double>> terms;
        Relation rel;
        double rhs;
    };
    std::vector<DenseRow> rows;
    rows.reserve(problem.constraints.size() + upper_rows.size());
    for (const auto& row : problem.constraints) {
        DenseRow dr{{}, row.relation, row.rhs};
        for (const auto& term : row.terms) {
            const auto& mp = mapping[static_cast<std::size_t>(term.var)];
            switch (mp.kind) {
                case VarMapping::Kind::shifted:
                    dr.terms.emplace_back(mp.col, term.coef);
                    dr.rhs -= term.coef * mp.offset;
                    break;
                case VarMapping::Kind::mirrored:
                    dr.terms.emplace_back(mp.col, -term.coef);
                    dr.rhs -= term.coef * mp.offset;
                    break;
                case VarMapping::Kind::split:
                    dr.terms.emplace_back(mp.col, term.coef);
                    dr.terms.emplace_back(mp.neg_col, -term.coef);
                    break;
            }
        }
        rows.push_back(std::move(dr));
    }
    for (const auto& ur : upper_rows) rows.push_back(DenseRow{{{ur.col, 1.0}}, Relation::less_equal, ur.rhs});

    std::size_t n_slack = 0;
    for (const auto& r : rows) n_slack += (r.rel != Relation::equal) ? 1 : 0;
    const std::size_t m = rows.size();
    const std::size_t n_art_begin = n_struct + n_slack;
    const std::size_t n_total = n_art_begin + m;

    Tableau tab(m, n_total);
    std::vector<std::size_t> basis(m);
    std::size_t slack = n_struct;
    for (std::size_t r = 0; r < m; ++r) {
        const auto& dr = rows[r];
        for (const auto& [c, v] : dr.terms) tab.at(r, c) += v;
        if (dr.rel == Relation::less_equal) tab.at(r, slack++) = 1.0;
        else if (dr.rel == Relation::greater_equal) tab.at(r, slack++) = -1.0;
        tab.rhs(r) = dr.rhs;
        if (tab.rhs(r) < 0.0) {
            for (std::size_t c = 0; c <= n_total; ++c) tab.at(r, c) = -tab.at(r, c);
        }
        tab.at(r, n_art_begin + r) = 1.0;
        basis[r] = n_art_begin + r;
    }

    LpSolution out;

    // Phase I: minimize the sum of artificials.
    std::vector<double> phase1_cost(n_total, 0.0);
    for (std::size_t c = n_art_begin; c < n_total; ++c) phase1_cost[c] = 1.0;
    std::vector<bool> allowed(n_total, true);
    if (optimize(tab, basis, phase1_cost, allowed) != PhaseResult::optimal) {
        out.status = SolveStatus::numeric_failure;
        return out;
    }
    double infeas = 0.0;
    for (std::size_t r = 0; r < m; ++r)
        if (basis[r] >= n_art_begin) infeas += tab.rhs(r);
    if (infeas > 1e-7) {
        out.status = SolveStatus::infeasible;
        return out;
    }
    // Drive zero-level artificials out of the basis where possible.
    for (std::size_t r = 0; r < m; ++r) {
        if (basis[r] < n_art_begin) continue;
        for (std::size_t c = 0; c < n_art_begin; ++c) {
            if (std::abs(tab.at(r, c)) > 1e-7) {
                tab.pivot(r, c);
                basis[r] = c;
                break;
            }
        }
    }
    for (std::size_t c = n_art_begin; c < n_total; ++c) allowed[c] = false;

    // Phase II on the original objective.
    std::vector<double> cost(n_total, 0.0);
    for (const auto& term : problem.objective) {
        const auto& mp = mapping[static_cast<std::size_t>(term.var)];
        switch (mp.kind) {
            case VarMapping::Kind::shifted: cost[static_cast<std::size_t>(mp.col)] += term.coef; break;
            case VarMapping::Kind::mirrored: cost[static_cast<std::size_t>(mp.col)] -= term.coef; break;
            case VarMapping::Kind::split:
                cost[static_cast<std::size_t>(mp.col)] += term.coef;
                cost[static_cast<std::size_t>(mp.neg_col)] -= term.coef;
                break;
        }
    }
    switch (optimize(tab, basis, cost, allowed)) {
        case PhaseResult::optimal: break;
        case PhaseResult::unbounded: out.status = SolveStatus::unbounded; return out;
        case PhaseResult::stalled: out.status = SolveStatus::numeric_failure; return out;
    }

    std::vector<double> y(n_total, 0.0);
    for (std::size_t r = 0; r < m; ++r) y[basis[r]] = std::max(0.0, tab.rhs(r));
    out.values.resize(n_orig);
    for (std::size_t j = 0; j < n_orig; ++j) {
        const auto& mp = mapping[j];
        const double v = y[static_cast<std::size_t>(mp.col)];
        switch (mp.kind) {
            case VarMapping::Kind::shifted: out.values[j] = mp.offset + v; break;
            case VarMapping::Kind::mirrored: out.values[j] = mp.offset - v; break;
            case VarMapping::Kind::split: out.values[j] = v - y[static_cast<std::size_t>(mp.neg_col)]; break;
        }
    }
    out.status = SolveStatus::optimal;
    for (const auto& term : problem.objective)
        out.objective_value += term.coef * out.values[static_cast<std::size_t>(term.var)];
    return out;
}

}  // namespace hts::lp::detail
