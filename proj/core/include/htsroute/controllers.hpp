#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "htsroute/domain.hpp"
#include "htsroute/formulation.hpp"
#include "htsroute/lp.hpp"

namespace hts {

/// One of the five routing policies.
struct PolicyKind {
    enum class Type { batch_hindsight, static_batch, proportional, mpc, windowless_mpc };

    Type type = Type::mpc;
    int window = 1;  // lookahead steps, meaningful for the MPC types

    static PolicyKind batch() { return {Type::batch_hindsight, 0}; }
    static PolicyKind static_weights() { return {Type::static_batch, 0}; }
    static PolicyKind proportional() { return {Type::proportional, 0}; }
    static PolicyKind mpc(int window) { return {Type::mpc, window}; }
    static PolicyKind windowless() { return {Type::windowless_mpc, 1}; }

    bool offline() const {
        return type == Type::batch_hindsight || type == Type::static_batch || type == Type::proportional;
    }
    /// Lookahead actually used by an online policy.
    int effective_window() const { return type == Type::windowless_mpc ? 1 : window; }

    /// "batch_hindsight", "static_batch", "proportional", "mpc_w10", "windowless_mpc".
    std::string label() const;

    bool operator==(const PolicyKind&) const = default;
};

/// Parses a label or alias: batch, static, proportional, windowless, mpc
/// (uses default_window), mpc:N / mpc_wN. Throws std::invalid_argument.
PolicyKind parse_policy(std::string_view text, int default_window);

/// A solver did not return an optimal solution. Carries the global step when
/// the failure happened inside an online rollout, -1 for offline solves.
class SolverFailure : public std::runtime_error {
public:
    SolverFailure(lp::SolveStatus status, int step, const std::string& context);
    lp::SolveStatus status() const { return status_; }
    int step() const { return step_; }

private:
    lp::SolveStatus status_;
    int step_;
};

/// Builds the offline LP for `kind` on realized flows, solves once and
/// extracts the whole trajectory.
DecisionTrajectory decide_offline(PolicyKind kind, const ScenarioConfig& config, const Matrix& realized,
                                  const lp::SolveOptions& solver = {});

/// Solves the window LP at step t from `state` and returns the step-t decision.
ControlDecision decide_step_mpc(const ScenarioConfig& config, const PlantState& state, int t,
                                const Matrix& expected, int window, const lp::SolveOptions& solver = {});

/// Per-step decision source used by the plant.
class Controller {
public:
    virtual ~Controller() = default;

    /// Called once per rollout before step 0 with that run's demand.
    virtual void prepare(const DemandTrajectory& demand) = 0;
    virtual ControlDecision decide(int t, const PlantState& state) = 0;

    /// Objective of the offline LP solved in prepare(); empty for online policies.
    virtual std::optional<double> planned_objective() const { return std::nullopt; }

    virtual PolicyKind kind() const = 0;
};

std::unique_ptr<Controller> make_controller(PolicyKind kind, const ScenarioConfig& config,
                                            const lp::SolveOptions& solver = {});

}  // namespace hts
