#include "htsroute/plant.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace hts {

namespace {

constexpr double kCheckTol = 1e-9;

// Priorities in drop order: cheapest loss first, ties to the larger index.
std::vector<std::size_t> drop_order(const ScenarioConfig& config) {
    std::vector<std::size_t> order(config.loss_costs.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const double ka = config.loss_costs[a];
        const double kb = config.loss_costs[b];
        return ka != kb ? ka < kb : a > b;
    });
    return order;
}

}  // namespace

InvariantReport& InvariantReport::operator+=(const InvariantReport& other) {
    steps_checked += other.steps_checked;
    conservation_violations += other.conservation_violations;
    capacity_violations += other.capacity_violations;
    service_violations += other.service_violations;
    return *this;
}

Matrix split_inflow(const Matrix& planned, std::span<const double> realized_totals) {
    const std::size_t M = planned.rows();
    const std::size_t P = planned.cols();
    if (realized_totals.size() != P) throw std::invalid_argument("split_inflow: priority count mismatch");
    Matrix out(M, P);
    for (std::size_t p = 0; p < P; ++p) {
        const double total = planned.col_sum(p);
        for (std::size_t m = 0; m < M; ++m) {
            out(m, p) = total > 1e-12 ? realized_totals[p] * (planned(m, p) / total)
                                      : realized_totals[p] / static_cast<double>(M);
        }
    }
    return out;
}

std::pair<PlantState, StepOutcome> step(const PlantState& state, const ControlDecision& decision,
                                        std::span<const double> realized, const ScenarioConfig& config) {
    const std::size_t M = state.queues.rows();
    const std::size_t P = state.queues.cols();
    StepOutcome outcome;
    outcome.inflows = split_inflow(decision.inflow_plan, realized);
    outcome.outflows = Matrix(M, P);
    outcome.losses = Matrix(M, P);

    PlantState next{state.queues, decision.weights};
    const double rate = config.service_per_weight();
    const auto order = drop_order(config);
    for (std::size_t m = 0; m < M; ++m) {
        double occupancy = 0.0;
        for (std::size_t p = 0; p < P; ++p) {
            const double available = state.queues(m, p) + outcome.inflows(m, p);
            const double served = std::min({decision.weights(m, p) * rate, config.link_capacity, available});
            outcome.outflows(m, p) = std::max(0.0, served);
            next.queues(m, p) = std::max(0.0, available - outcome.outflows(m, p));
            occupancy += next.queues(m, p);
        }
        for (std::size_t p : order) {
            const double excess = occupancy - config.queue_capacity;
            if (excess <= 0.0) break;
            const double dropped = std::min(excess, next.queues(m, p));
            next.queues(m, p) -= dropped;
            outcome.losses(m, p) += dropped;
            occupancy -= dropped;
        }
    }
    for (std::size_t m = 0; m < M; ++m)
        for (std::size_t p = 0; p < P; ++p) outcome.step_cost += config.loss_costs[p] * outcome.losses(m, p);
    return {std::move(next), std::move(outcome)};
}

namespace {

InvariantReport check_step(const PlantState& before, const PlantState& after, const ControlDecision& decision,
                           const StepOutcome& outcome, const ScenarioConfig& config) {
    InvariantReport r;
    r.steps_checked = 1;
    const double rate = config.service_per_weight();
    for (std::size_t m = 0; m < after.queues.rows(); ++m) {
        double occupancy = 0.0;
        for (std::size_t p = 0; p < after.queues.cols(); ++p) {
            const double q = after.queues(m, p);
            const double balance = before.queues(m, p) + outcome.inflows(m, p) - outcome.outflows(m, p) -
                                   outcome.losses(m, p) - q;
            const double scale = 1.0 + before.queues(m, p) + outcome.inflows(m, p);
            if (std::abs(balance) > kCheckTol * scale || q < 0.0 || outcome.losses(m, p) < 0.0)
                ++r.conservation_violations;
            if (outcome.outflows(m, p) > decision.weights(m, p) * rate + kCheckTol ||
                outcome.outflows(m, p) > config.link_capacity + kCheckTol || outcome.outflows(m, p) < 0.0)
                ++r.service_violations;
            occupancy += q;
        }
        if (occupancy > config.queue_capacity + kCheckTol) ++r.capacity_violations;
    }
    return r;
}

}  // namespace

RunTrajectory rollout(const ScenarioConfig& config, Controller& controller, const DemandTrajectory& demand,
                      int run_index) {
    validate_config(config);
    const auto T = static_cast<std::size_t>(config.horizon);
    const auto P = static_cast<std::size_t>(config.num_priorities);
    if (demand.realized.rows() != T || demand.realized.cols() != P)
        throw std::invalid_argument("rollout: demand must be horizon x num_priorities");

    RunTrajectory run;
    run.method = controller.kind().label();
    run.run_index = run_index;
    run.steps.reserve(T);
    run.states.reserve(T);

    controller.prepare(demand);
    run.planned_objective = controller.planned_objective();

    PlantState state = PlantState::initial(config);
    const Matrix initial = state.queues;
    for (std::size_t t = 0; t < T; ++t) {
        ControlDecision decision;
        try {
            decision = controller.decide(static_cast<int>(t), state);
        } catch (const SolverFailure&) {
            throw;
        } catch (const NotOptimal& e) {
            throw SolverFailure(e.status(), static_cast<int>(t), run.method);
        }
        const std::span<const double> realized(&demand.realized.data()[t * P], P);
        auto [next, outcome] = step(state, decision, realized, config);
        run.invariants += check_step(state, next, decision, outcome, config);
        run.cumulative_cost += outcome.step_cost;
        state = std::move(next);
        run.steps.push_back(std::move(outcome));
        run.states.push_back(state);
    }

    run.terminal_losses = Matrix(state.queues.rows(), state.queues.cols());
    if (config.terminal_flush) {
        run.terminal_losses = state.queues;
        for (std::size_t m = 0; m < state.queues.rows(); ++m)
            for (std::size_t p = 0; p < P; ++p) run.terminal_cost += config.loss_costs[p] * state.queues(m, p);
        run.cumulative_cost += run.terminal_cost;
    }

    // Whole-run conservation per (m, p).
    const Matrix& final_queues = run.states.empty() ? initial : run.states.back().queues;
    for (std::size_t m = 0; m < initial.rows(); ++m) {
        for (std::size_t p = 0; p < P; ++p) {
            double in = 0.0, out = 0.0, lost = 0.0;
            for (const auto& s : run.steps) {
                in += s.inflows(m, p);
                out += s.outflows(m, p);
                lost += s.losses(m, p);
            }
            const double drift = in - out - lost - (final_queues(m, p) - initial(m, p));
            if (std::abs(drift) > kCheckTol * (1.0 + in + initial(m, p))) ++run.invariants.conservation_violations;
        }
    }
    return run;
}

}  // namespace hts
