#include "htsroute/controllers.hpp"

#include <charconv>

namespace hts {

std::string PolicyKind::label() const {
    switch (type) {
        case Type::batch_hindsight: return "batch_hindsight";
        case Type::static_batch: return "static_batch";
        case Type::proportional: return "proportional";
        case Type::mpc: return "mpc_w" + std::to_string(window);
        case Type::windowless_mpc: return "windowless_mpc";
    }
    return "unknown";
}

namespace {

int parse_window(std::string_view digits, std::string_view whole) {
    int w = 0;
    const auto* end = digits.data() + digits.size();
    const auto [ptr, ec] = std::from_chars(digits.data(), end, w);
    if (ec != std::errc{} || ptr != end || w < 1)
        throw std::invalid_argument("bad MPC window in policy '" + std::string(whole) + "'");
    return w;
}

}  // namespace

PolicyKind parse_policy(std::string_view text, int default_window) {
    if (text == "batch" || text == "batch_hindsight") return PolicyKind::batch();
    if (text == "static" || text == "static_batch") return PolicyKind::static_weights();
    if (text == "proportional" || text == "prop") return PolicyKind::proportional();
    if (text == "windowless" || text == "windowless_mpc") return PolicyKind::windowless();
    if (text == "mpc") {
        if (default_window < 1) throw std::invalid_argument("MPC window must be >= 1");
        return PolicyKind::mpc(default_window);
    }
    if (text.starts_with("mpc:")) return PolicyKind::mpc(parse_window(text.substr(4), text));
    if (text.starts_with("mpc_w")) return PolicyKind::mpc(parse_window(text.substr(5), text));
    throw std::invalid_argument("unknown policy '" + std::string(text) + "'");
}

SolverFailure::SolverFailure(lp::SolveStatus status, int step, const std::string& context)
    : std::runtime_error(context + ": solver returned " + lp::to_string(status) +
                         (step >= 0 ? " at step " + std::to_string(step) : std::string())),
      status_(status),
      step_(step) {}

DecisionTrajectory decide_offline(PolicyKind kind, const ScenarioConfig& config, const Matrix& realized,
                                  const lp::SolveOptions& solver) {
    Formulation f;
    switch (kind.type) {
        case PolicyKind::Type::batch_hindsight: f = build_batch(config, realized); break;
        case PolicyKind::Type::static_batch: f = build_static_batch(config, realized); break;
        case PolicyKind::Type::proportional: f = build_proportional(config, realized); break;
        default: throw std::invalid_argument("decide_offline needs an offline policy, got " + kind.label());
    }
    const auto solution = lp::solve(f.problem, solver);
    if (!solution.optimal()) throw SolverFailure(solution.status, -1, kind.label());
    return extract_trajectory(solution, f.vars);
}

ControlDecision decide_step_mpc(const ScenarioConfig& config, const PlantState& state, int t,
                                const Matrix& expected, int window, const lp::SolveOptions& solver) {
    if (window < 1) throw std::invalid_argument("MPC window must be >= 1");
    ScenarioConfig windowed = config;
    windowed.window = window;
    const Formulation f = build_mpc_window(windowed, state, t, expected);
    const auto solution = lp::solve(f.problem, solver);
    if (!solution.optimal()) throw SolverFailure(solution.status, t, "mpc_w" + std::to_string(window));
    return extract_step(solution, f.vars, 0);
}

namespace {

class OfflineController final : public Controller {
public:
    OfflineController(PolicyKind kind, const ScenarioConfig& config, const lp::SolveOptions& solver)
        : kind_(kind), config_(config), solver_(solver) {}

    void prepare(const DemandTrajectory& demand) override {
        plan_ = decide_offline(kind_, config_, demand.realized, solver_);
    }

    ControlDecision decide(int t, const PlantState&) override {
        return plan_.decisions.at(static_cast<std::size_t>(t));
    }

    std::optional<double> planned_objective() const override { return plan_.objective; }
    PolicyKind kind() const override { return kind_; }

private:
    PolicyKind kind_;
    ScenarioConfig config_;
    lp::SolveOptions solver_;
    DecisionTrajectory plan_;
};

class MpcController final : public Controller {
public:
    MpcController(PolicyKind kind, const ScenarioConfig& config, const lp::SolveOptions& solver)
        : kind_(kind), config_(config), solver_(solver) {
        config_.window = kind.effective_window();
    }

    void prepare(const DemandTrajectory& demand) override { expected_ = demand.expected; }

    ControlDecision decide(int t, const PlantState& state) override {
        return decide_step_mpc(config_, state, t, expected_, config_.window, solver_);
    }

    PolicyKind kind() const override { return kind_; }

private:
    PolicyKind kind_;
    ScenarioConfig config_;
    lp::SolveOptions solver_;
    Matrix expected_;
};

}  // namespace

std::unique_ptr<Controller> make_controller(PolicyKind kind, const ScenarioConfig& config,
                                            const lp::SolveOptions& solver) {
    validate_config(config);
    if (kind.offline()) return std::make_unique<OfflineController>(kind, config, solver);
    if (kind.effective_window() < 1) throw std::invalid_argument("MPC window must be >= 1");
    return std::make_unique<MpcController>(kind, config, solver);
}

}  // namespace hts
