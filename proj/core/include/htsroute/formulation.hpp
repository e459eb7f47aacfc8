#pragma once

#include <stdexcept>
#include <vector>

#include "htsroute/domain.hpp"
#include "htsroute/lp.hpp"

namespace hts {

/// Variable layout of one routing LP covering `steps` consecutive steps.
///
/// Families f_in, f_out, w, dQ and L are indexed by (s, m, p) with s the
/// window-local step; occupancies Q by (s, m, p) with s in [0, steps], where
/// Q(0) is the state entering the first step and Q(s + 1) the state after
/// step s.
struct VarMap {
    int steps = 0;
    int modules = 0;
    int priorities = 0;
    int first_step = 0;  // global index of window step 0

    int f_in(int s, int m, int p) const { return family(0, s, m, p); }
    int f_out(int s, int m, int p) const { return family(1, s, m, p); }
    int weight(int s, int m, int p) const { return family(2, s, m, p); }
    int delta_q(int s, int m, int p) const { return family(3, s, m, p); }
    int loss(int s, int m, int p) const { return family(4, s, m, p); }
    int queue(int s, int m, int p) const { return 5 * block() + (s * modules + m) * priorities + p; }

    int num_vars() const { return 5 * block() + (steps + 1) * modules * priorities; }

private:
    int block() const { return steps * modules * priorities; }
    int family(int f, int s, int m, int p) const { return f * block() + (s * modules + m) * priorities + p; }
};

/// Number of rows emitted per constraint family.
struct RowCounts {
    int balance = 0;
    int weight_sum = 0;
    int ramp = 0;
    int service = 0;
    int demand = 0;
    int queue_recursion = 0;
    int initial_queue = 0;
    int terminal_queue = 0;
    int buffer_capacity = 0;
    int weight_pin = 0;
};

struct Formulation {
    lp::LpProblem problem;
    VarMap vars;
    RowCounts rows;
};

/// Full-horizon problem on known flows (horizon x P), minimizing weighted loss.
Formulation build_batch(const ScenarioConfig& config, const Matrix& flows);

/// Batch problem with every step's weights pinned to the first step's.
Formulation build_static_batch(const ScenarioConfig& config, const Matrix& flows);

/// Batch problem with weights fixed to k_p / sum(k).
Formulation build_proportional(const ScenarioConfig& config, const Matrix& flows);

/// Window problem for step t, planned on `expected` (horizon x P rows; only
/// rows t .. t + window - 1 are read). Starts from state.queues and ramps
/// against state.last_weights when set. The terminal occupancy row is added
/// only when the window reaches the last step.
Formulation build_mpc_window(const ScenarioConfig& config, const PlantState& state, int t,
                             const Matrix& expected);

/// Proportional weight k_p / sum(k).
std::vector<double> proportional_weights(const ScenarioConfig& config);

struct DecisionTrajectory {
    std::vector<ControlDecision> decisions;  // one per step
    std::vector<Matrix> planned_outflows;    // M x P per step
    std::vector<Matrix> planned_losses;      // M x P per step
    double objective = 0.0;
};

class NotOptimal : public std::runtime_error {
public:
    explicit NotOptimal(lp::SolveStatus status);
    lp::SolveStatus status() const { return status_; }

private:
    lp::SolveStatus status_;
};

/// Decision at window-local step s: weights clamped to [0,1] and rescaled to
/// sum to one per module, inflows clamped at zero.
ControlDecision extract_step(const lp::LpSolution& solution, const VarMap& vars, int s);

DecisionTrajectory extract_trajectory(const lp::LpSolution& solution, const VarMap& vars);

/// Clamp to [0,1] and rescale each row to sum exactly to one.
void normalize_weights(Matrix& weights);

}  // namespace hts
