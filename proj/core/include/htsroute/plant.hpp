#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "htsroute/controllers.hpp"
#include "htsroute/domain.hpp"

namespace hts {

/// Realized quantities of one step, M x P each.
struct StepOutcome {
    Matrix inflows;
    Matrix outflows;
    Matrix losses;
    double step_cost = 0.0;
};

/// Violation counts from the per-step conservation, capacity and service checks.
struct InvariantReport {
    long steps_checked = 0;
    long conservation_violations = 0;
    long capacity_violations = 0;
    long service_violations = 0;

    long total_violations() const { return conservation_violations + capacity_violations + service_violations; }
    InvariantReport& operator+=(const InvariantReport& other);
};

struct RunTrajectory {
    std::string method;
    int run_index = 0;
    std::vector<StepOutcome> steps;
    std::vector<PlantState> states;  // state after each step
    Matrix terminal_losses;          // M x P, leftover occupancy flushed after the last step
    double terminal_cost = 0.0;
    double cumulative_cost = 0.0;
    std::optional<double> planned_objective;
    InvariantReport invariants;
};

/// Distributes each realized priority total over modules in proportion to the
/// planned split; uniform when the plan routes nothing for that priority.
Matrix split_inflow(const Matrix& planned, std::span<const double> realized_totals);

/// Applies one decision to the realized arrivals: split, serve, then drop
/// overflow lowest loss cost first.
std::pair<PlantState, StepOutcome> step(const PlantState& state, const ControlDecision& decision,
                                        std::span<const double> realized, const ScenarioConfig& config);

/// Runs the controller over the whole horizon. Controller failures are
/// rethrown as SolverFailure carrying the failing step.
RunTrajectory rollout(const ScenarioConfig& config, Controller& controller, const DemandTrajectory& demand,
                      int run_index = 0);

}  // namespace hts
