#include "htsroute/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstring>
#include <exception>
#include <mutex>
#include <thread>

#include "htsroute/arrivals.hpp"

namespace hts {

std::optional<double> GapTable::gap(std::string_view label) const {
    for (const auto& [name, value] : gaps_percent)
        if (name == label) return value;
    return std::nullopt;
}

GapTable compute_gaps(const std::vector<std::pair<std::string, double>>& mean_costs, std::string_view baseline) {
    GapTable table;
    table.baseline = std::string(baseline);
    table.mean_costs = mean_costs;
    const auto it = std::find_if(mean_costs.begin(), mean_costs.end(),
                                 [&](const auto& entry) { return entry.first == baseline; });
    if (it == mean_costs.end()) throw std::invalid_argument("compute_gaps: baseline '" + table.baseline + "' missing");
    const double base = it->second;
    if (std::abs(base) <= kZeroCostTolerance) {
        table.zero_baseline = true;
        return table;
    }
    for (const auto& [name, cost] : mean_costs) table.gaps_percent.emplace_back(name, 100.0 * (cost - base) / base);
    return table;
}

const MethodMetrics* AggregateMetrics::find(std::string_view label) const {
    for (const auto& m : methods)
        if (m.label == label) return &m;
    return nullptr;
}

RolloutFailure::RolloutFailure(int run, std::string method, const std::string& what, bool solver_failure)
    : std::runtime_error("run " + std::to_string(run) + ", method " + method + ": " + what),
      run_(run),
      method_(std::move(method)),
      solver_failure_(solver_failure) {}

std::uint64_t hash_demand(const DemandTrajectory& demand) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (double v : demand.realized.data()) {
        unsigned char bytes[sizeof(double)];
        std::memcpy(bytes, &v, sizeof(double));
        for (unsigned char b : bytes) {
            h ^= b;
            h *= 0x100000001b3ULL;
        }
    }
    return h;
}

namespace {

struct MethodRun {
    double cost = 0.0;
    std::optional<double> planned;
    RunSeries series;
    InvariantReport invariants;
    std::uint64_t demand_hash = 0;
};

struct RunSlot {
    Matrix realized;
    std::uint64_t demand_hash = 0;
    std::vector<MethodRun> methods;
    std::optional<double> hindsight;
    std::exception_ptr error;
};

RunSeries summarize(const RunTrajectory& run, const ScenarioConfig& config) {
    const auto T = static_cast<std::size_t>(config.horizon);
    const auto P = static_cast<std::size_t>(config.num_priorities);
    RunSeries s{Matrix(T, P), Matrix(T, P), Matrix(T, P), Matrix(T, P)};
    for (std::size_t t = 0; t < T; ++t) {
        const auto& out = run.steps[t];
        const auto& queues = run.states[t].queues;
        for (std::size_t p = 0; p < P; ++p) {
            s.loss(t, p) = out.losses.col_sum(p);
            s.outflow(t, p) = out.outflows.col_sum(p);
            s.queue(t, p) = queues.col_sum(p);
        }
    }
    for (std::size_t p = 0; p < P; ++p) s.loss(T - 1, p) += run.terminal_losses.col_sum(p);
    for (std::size_t t = 0; t < T; ++t)
        for (std::size_t p = 0; p < P; ++p) s.cost(t, p) = config.loss_costs[p] * s.loss(t, p);
    return s;
}

void execute_run(const ScenarioConfig& config, const std::vector<PolicyKind>& methods, const HarnessOptions& options,
                 bool need_hindsight, int run, RunSlot& slot, std::mutex& hook_mutex) {
    const DemandTrajectory demand = generate_demands(config, run);
    slot.realized = demand.realized;
    slot.demand_hash = hash_demand(demand);
    slot.methods.resize(methods.size());
    for (std::size_t i = 0; i < methods.size(); ++i) {
        const std::string label = methods[i].label();
        try {
            auto controller = make_controller(methods[i], config, options.solver);
            const RunTrajectory traj = rollout(config, *controller, demand, run);
            auto& out = slot.methods[i];
            out.cost = traj.cumulative_cost;
            out.planned = traj.planned_objective;
            out.series = summarize(traj, config);
            out.invariants = traj.invariants;
            out.demand_hash = hash_demand(demand);
            if (methods[i].type == PolicyKind::Type::batch_hindsight) slot.hindsight = traj.planned_objective;
        } catch (const SolverFailure& e) {
            throw RolloutFailure(run, label, e.what(), true);
        } catch (const std::exception& e) {
            throw RolloutFailure(run, label, e.what(), false);
        }
        if (options.on_rollout) {
            std::lock_guard lock(hook_mutex);
            options.on_rollout(run, label);
        }
    }
    if (need_hindsight && !slot.hindsight) {
        try {
            slot.hindsight = decide_offline(PolicyKind::batch(), config, demand.realized, options.solver).objective;
        } catch (const SolverFailure& e) {
            throw RolloutFailure(run, "batch_hindsight", e.what(), true);
        }
    }
}

double mean_of(const std::vector<double>& xs) {
    double s = 0.0;
    for (double x : xs) s += x;
    return xs.empty() ? 0.0 : s / static_cast<double>(xs.size());
}

double sample_std(const std::vector<double>& xs, double mean) {
    if (xs.size() < 2) return 0.0;
    double s = 0.0;
    for (double x : xs) s += (x - mean) * (x - mean);
    return std::sqrt(s / static_cast<double>(xs.size() - 1));
}

}  // namespace

AggregateMetrics run_monte_carlo(const ScenarioConfig& config, const std::vector<PolicyKind>& methods,
                                 const HarnessOptions& options) {
    validate_config(config);
    if (methods.empty()) throw std::invalid_argument("run_monte_carlo: at least one method is required");
    const int runs = config.num_runs;
    const bool has_batch = std::any_of(methods.begin(), methods.end(),
                                       [](const PolicyKind& k) { return k.type == PolicyKind::Type::batch_hindsight; });
    const bool need_hindsight = has_batch || options.always_compute_hindsight;

    std::vector<RunSlot> slots(static_cast<std::size_t>(runs));
    std::mutex hook_mutex;
    std::atomic<int> next{0};
    auto worker = [&] {
        for (int run = next++; run < runs; run = next++) {
            auto& slot = slots[static_cast<std::size_t>(run)];
            try {
                execute_run(config, methods, options, need_hindsight, run, slot, hook_mutex);
            } catch (...) {
                slot.error = std::current_exception();
            }
        }
    };
    int threads = options.threads > 0 ? options.threads : static_cast<int>(std::thread::hardware_concurrency());
    threads = std::clamp(threads, 1, std::max(1, runs));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    }
    for (const auto& slot : slots)
        if (slot.error) std::rethrow_exception(slot.error);

    // Deterministic reduction in run order.
    const auto T = static_cast<std::size_t>(config.horizon);
    const auto P = static_cast<std::size_t>(config.num_priorities);
    AggregateMetrics agg;
    agg.config = config;
    agg.mean_demand = Matrix(T, P);
    agg.sample_demand = slots.front().realized;
    for (const auto& slot : slots) {
        agg.demand_hashes.push_back(slot.demand_hash);
        for (std::size_t i = 0; i < T * P; ++i) agg.mean_demand.data()[i] += slot.realized.data()[i];
        for (const auto& mr : slot.methods) {
            if (mr.demand_hash != slot.demand_hash) agg.paired = false;
            agg.invariants += mr.invariants;
        }
        if (slot.hindsight) agg.hindsight_objectives.push_back(*slot.hindsight);
    }
    for (double& v : agg.mean_demand.data()) v /= static_cast<double>(runs);

    for (std::size_t i = 0; i < methods.size(); ++i) {
        MethodMetrics mm;
        mm.kind = methods[i];
        mm.label = methods[i].label();
        mm.mean_loss = Matrix(T, P);
        mm.mean_outflow = Matrix(T, P);
        mm.mean_queue = Matrix(T, P);
        mm.mean_cumulative_cost.assign(T, 0.0);
        for (auto& slot : slots) {
            auto& mr = slot.methods[i];
            mm.run_costs.push_back(mr.cost);
            mm.planned_objectives.push_back(mr.planned);
            double cumulative = 0.0;
            for (std::size_t t = 0; t < T; ++t) {
                for (std::size_t p = 0; p < P; ++p) {
                    mm.mean_loss(t, p) += mr.series.loss(t, p);
                    mm.mean_outflow(t, p) += mr.series.outflow(t, p);
                    mm.mean_queue(t, p) += mr.series.queue(t, p);
                    cumulative += mr.series.cost(t, p);
                }
                mm.mean_cumulative_cost[t] += cumulative;
            }
            if (options.keep_run_series) mm.runs.push_back(std::move(mr.series));
        }
        const double n = static_cast<double>(runs);
        for (double& v : mm.mean_loss.data()) v /= n;
        for (double& v : mm.mean_outflow.data()) v /= n;
        for (double& v : mm.mean_queue.data()) v /= n;
        for (double& v : mm.mean_cumulative_cost) v /= n;
        mm.mean_cost = mean_of(mm.run_costs);
        mm.std_cost = sample_std(mm.run_costs, mm.mean_cost);
        agg.methods.push_back(std::move(mm));
    }

    if (has_batch) {
        std::vector<std::pair<std::string, double>> means;
        for (const auto& mm : agg.methods) means.emplace_back(mm.label, mm.mean_cost);
        agg.gaps = compute_gaps(means, "batch_hindsight");
    }
    return agg;
}

WindowSweep sweep_window(const ScenarioConfig& config, const std::vector<int>& windows,
                         const HarnessOptions& options) {
    if (windows.empty()) throw std::invalid_argument("sweep_window: window list is empty");
    std::vector<PolicyKind> methods;
    for (int w : windows) {
        if (w < 1) throw std::invalid_argument("sweep_window: every window must be >= 1");
        methods.push_back(PolicyKind::mpc(w));
    }
    WindowSweep sweep;
    sweep.windows = windows;
    sweep.metrics = run_monte_carlo(config, methods, options);
    for (const auto& mm : sweep.metrics.methods) {
        sweep.mean_costs.push_back(mm.mean_cost);
        sweep.std_costs.push_back(mm.std_cost);
    }
    const std::size_t n = windows.size();
    sweep.pct_diff.assign(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double base = sweep.mean_costs[j];
            sweep.pct_diff[i][j] = base != 0.0 ? 100.0 * (sweep.mean_costs[i] - base) / base
                                               : (sweep.mean_costs[i] == base ? 0.0 : std::nan(""));
        }
    }
    return sweep;
}

}  // namespace hts
