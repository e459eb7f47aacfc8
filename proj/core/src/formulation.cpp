#include "htsroute/formulation.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace hts {

namespace {

using lp::Relation;
using lp::Term;

enum class WeightMode { free, pinned_to_first, proportional };

struct WindowSpec {
    int first_step;
    int steps;
    const Matrix& demand;          // rows indexed by global step
    const Matrix* initial_queues;  // nullptr: every queue starts at Q0
    const Matrix* prev_weights;    // nullptr: no ramp row at window step 0
    bool terminal;
    WeightMode weights;
};

Formulation build(const ScenarioConfig& config, const WindowSpec& spec) {
    validate_config(config);
    const int S = spec.steps;
    const int M = config.num_modules;
    const int P = config.num_priorities;
    if (spec.demand.cols() != static_cast<std::size_t>(P) ||
        spec.demand.rows() < static_cast<std::size_t>(spec.first_step + S))
        throw std::invalid_argument("demand matrix does not cover the requested steps");

    Formulation out;
    out.vars = VarMap{S, M, P, spec.first_step};
    const VarMap& v = out.vars;
    auto& lp = out.problem;
    auto& counts = out.rows;

    const std::vector<double> prop = proportional_weights(config);

    // Variables in VarMap order.
    const int block = S * M * P;
    lp.lower.reserve(static_cast<std::size_t>(v.num_vars()));
    lp.upper.reserve(static_cast<std::size_t>(v.num_vars()));
    for (int i = 0; i < block; ++i) lp.add_variable(0.0, lp::kInf);                   // f_in
    for (int i = 0; i < block; ++i) lp.add_variable(0.0, config.link_capacity);       // f_out
    for (int i = 0; i < block; ++i) {                                                 // w
        if (spec.weights == WeightMode::proportional) {
            const double w = prop[static_cast<std::size_t>(i % P)];
            lp.add_variable(w, w);
        } else {
            lp.add_variable(0.0, 1.0);
        }
    }
    for (int i = 0; i < block; ++i) lp.add_variable(-lp::kInf, lp::kInf);             // dQ
    for (int i = 0; i < block; ++i) lp.add_variable(0.0, lp::kInf);                   // L
    for (int i = 0; i < (S + 1) * M * P; ++i) lp.add_variable(0.0, lp::kInf);         // Q

    lp.objective.reserve(static_cast<std::size_t>(block));
    for (int s = 0; s < S; ++s)
        for (int m = 0; m < M; ++m)
            for (int p = 0; p < P; ++p)
                lp.objective.push_back({v.loss(s, m, p), config.loss_costs[static_cast<std::size_t>(p)]});

    const double inv_ds = config.service_per_weight();
    const double dw = config.max_weight_step;
    const bool ramps = spec.weights != WeightMode::proportional;

    for (int s = 0; s < S; ++s) {
        for (int m = 0; m < M; ++m) {
            std::vector<Term> wsum;
            std::vector<Term> qsum;
            for (int p = 0; p < P; ++p) {
                lp.add_row({{v.f_in(s, m, p), 1.0}, {v.f_out(s, m, p), -1.0}, {v.delta_q(s, m, p), -1.0},
                            {v.loss(s, m, p), -1.0}},
                           Relation::equal, 0.0);
                ++counts.balance;

                lp.add_row({{v.f_out(s, m, p), 1.0}, {v.weight(s, m, p), -inv_ds}}, Relation::less_equal, 0.0);
                ++counts.service;

                lp.add_row({{v.queue(s + 1, m, p), 1.0}, {v.queue(s, m, p), -1.0}, {v.delta_q(s, m, p), -1.0}},
                           Relation::equal, 0.0);
                ++counts.queue_recursion;

                if (ramps && s > 0) {
                    lp.add_row({{v.weight(s, m, p), 1.0}, {v.weight(s - 1, m, p), -1.0}}, Relation::less_equal, dw);
                    ++counts.ramp;
                    if (config.ramp_two_sided) {
                        lp.add_row({{v.weight(s, m, p), -1.0}, {v.weight(s - 1, m, p), 1.0}},
                                   Relation::less_equal, dw);
                        ++counts.ramp;
                    }
                } else if (ramps && spec.prev_weights != nullptr) {
                    const double prev = (*spec.prev_weights)(static_cast<std::size_t>(m), static_cast<std::size_t>(p));
                    lp.add_row({{v.weight(0, m, p), 1.0}}, Relation::less_equal, prev + dw);
                    ++counts.ramp;
                    if (config.ramp_two_sided) {
                        lp.add_row({{v.weight(0, m, p), -1.0}}, Relation::less_equal, dw - prev);
                        ++counts.ramp;
                    }
                }

                if (spec.weights == WeightMode::pinned_to_first && s > 0) {
                    lp.add_row({{v.weight(s, m, p), 1.0}, {v.weight(0, m, p), -1.0}}, Relation::equal, 0.0);
                    ++counts.weight_pin;
                }

                wsum.push_back({v.weight(s, m, p), 1.0});
                qsum.push_back({v.queue(s + 1, m, p), 1.0});
            }
            lp.add_row(std::move(wsum), Relation::equal, 1.0);
            ++counts.weight_sum;
            lp.add_row(std::move(qsum), Relation::less_equal, config.queue_capacity);
            ++counts.buffer_capacity;
        }
        for (int p = 0; p < P; ++p) {
            std::vector<Term> inflow;
            inflow.reserve(static_cast<std::size_t>(M));
            for (int m = 0; m < M; ++m) inflow.push_back({v.f_in(s, m, p), 1.0});
            const double rhs = spec.demand(static_cast<std::size_t>(spec.first_step + s), static_cast<std::size_t>(p));
            lp.add_row(std::move(inflow), Relation::equal, rhs);
            ++counts.demand;
        }
    }

    for (int m = 0; m < M; ++m) {
        for (int p = 0; p < P; ++p) {
            const double q0 = spec.initial_queues != nullptr
                                  ? (*spec.initial_queues)(static_cast<std::size_t>(m), static_cast<std::size_t>(p))
                                  : config.initial_queue;
            lp.add_row({{v.queue(0, m, p), 1.0}}, Relation::equal, q0);
            ++counts.initial_queue;
            if (spec.terminal) {
                lp.add_row({{v.queue(S, m, p), 1.0}}, Relation::equal, config.initial_queue);
                ++counts.terminal_queue;
            }
        }
    }
    return out;
}

void check_flows(const ScenarioConfig& config, const Matrix& flows) {
    if (flows.rows() != static_cast<std::size_t>(config.horizon) ||
        flows.cols() != static_cast<std::size_t>(config.num_priorities))
        throw std::invalid_argument("flows must be horizon x num_priorities");
    for (double f : flows.data())
        if (!(f >= 0.0)) throw std::invalid_argument("flows must be nonnegative");
}

}  // namespace

std::vector<double> proportional_weights(const ScenarioConfig& config) {
    const double total = std::accumulate(config.loss_costs.begin(), config.loss_costs.end(), 0.0);
    std::vector<double> w(config.loss_costs.size());
    for (std::size_t p = 0; p < w.size(); ++p) w[p] = config.loss_costs[p] / total;
    return w;
}

Formulation build_batch(const ScenarioConfig& config, const Matrix& flows) {
    check_flows(config, flows);
    return build(config, {0, config.horizon, flows, nullptr, nullptr, true, WeightMode::free});
}

Formulation build_static_batch(const ScenarioConfig& config, const Matrix& flows) {
    check_flows(config, flows);
    return build(config, {0, config.horizon, flows, nullptr, nullptr, true, WeightMode::pinned_to_first});
}

Formulation build_proportional(const ScenarioConfig& config, const Matrix& flows) {
    check_flows(config, flows);
    return build(config, {0, config.horizon, flows, nullptr, nullptr, true, WeightMode::proportional});
}

Formulation build_mpc_window(const ScenarioConfig& config, const PlantState& state, int t,
                             const Matrix& expected) {
    if (t < 0 || t >= config.horizon) throw std::out_of_range("window start outside the horizon");
    check_flows(config, expected);
    const auto M = static_cast<std::size_t>(config.num_modules);
    const auto P = static_cast<std::size_t>(config.num_priorities);
    if (state.queues.rows() != M || state.queues.cols() != P)
        throw std::invalid_argument("plant state has the wrong shape");
    if (state.last_weights && (state.last_weights->rows() != M || state.last_weights->cols() != P))
        throw std::invalid_argument("previous weights have the wrong shape");
    const int last = std::min(t + config.window, config.horizon);
    const int steps = last - t;
    const bool terminal = last == config.horizon;
    return build(config, {t, steps, expected, &state.queues,
                          state.last_weights ? &*state.last_weights : nullptr, terminal, WeightMode::free});
}

NotOptimal::NotOptimal(lp::SolveStatus status)
    : std::runtime_error(std::string("not_optimal: solver status ") + lp::to_string(status)), status_(status) {}

void normalize_weights(Matrix& weights) {
    for (std::size_t m = 0; m < weights.rows(); ++m) {
        double total = 0.0;
        for (std::size_t p = 0; p < weights.cols(); ++p) {
            double& w = weights(m, p);
            w = std::clamp(w, 0.0, 1.0);
            total += w;
        }
        for (std::size_t p = 0; p < weights.cols(); ++p) {
            weights(m, p) = total > 0.0 ? weights(m, p) / total : 1.0 / static_cast<double>(weights.cols());
        }
    }
}

ControlDecision extract_step(const lp::LpSolution& solution, const VarMap& vars, int s) {
    if (!solution.optimal()) throw NotOptimal(solution.status);
    if (s < 0 || s >= vars.steps) throw std::out_of_range("step outside the solved window");
    const auto M = static_cast<std::size_t>(vars.modules);
    const auto P = static_cast<std::size_t>(vars.priorities);
    ControlDecision d{Matrix(M, P), Matrix(M, P)};
    for (int m = 0; m < vars.modules; ++m) {
        for (int p = 0; p < vars.priorities; ++p) {
            const auto mu = static_cast<std::size_t>(m);
            const auto pu = static_cast<std::size_t>(p);
            d.weights(mu, pu) = solution.values[static_cast<std::size_t>(vars.weight(s, m, p))];
            d.inflow_plan(mu, pu) = std::max(0.0, solution.values[static_cast<std::size_t>(vars.f_in(s, m, p))]);
        }
    }
    normalize_weights(d.weights);
    return d;
}

DecisionTrajectory extract_trajectory(const lp::LpSolution& solution, const VarMap& vars) {
    if (!solution.optimal()) throw NotOptimal(solution.status);
    const auto M = static_cast<std::size_t>(vars.modules);
    const auto P = static_cast<std::size_t>(vars.priorities);
    DecisionTrajectory out;
    out.objective = solution.objective_value;
    for (int s = 0; s < vars.steps; ++s) {
        out.decisions.push_back(extract_step(solution, vars, s));
        Matrix outflow(M, P);
        Matrix loss(M, P);
        for (int m = 0; m < vars.modules; ++m) {
            for (int p = 0; p < vars.priorities; ++p) {
                const auto mu = static_cast<std::size_t>(m);
                const auto pu = static_cast<std::size_t>(p);
                outflow(mu, pu) = std::max(0.0, solution.values[static_cast<std::size_t>(vars.f_out(s, m, p))]);
                loss(mu, pu) = std::max(0.0, solution.values[static_cast<std::size_t>(vars.loss(s, m, p))]);
            }
        }
        out.planned_outflows.push_back(std::move(outflow));
        out.planned_losses.push_back(std::move(loss));
    }
    return out;
}

}  // namespace hts
