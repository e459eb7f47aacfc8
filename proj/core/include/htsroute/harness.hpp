#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "htsroute/controllers.hpp"
#include "htsroute/domain.hpp"
#include "htsroute/lp.hpp"
#include "htsroute/plant.hpp"

namespace hts {

/// Per-step totals over modules for one (run, method), horizon x P each.
/// The last step's loss and cost include the end-of-horizon flush.
struct RunSeries {
    Matrix loss;
    Matrix outflow;
    Matrix queue;
    Matrix cost;
};

struct MethodMetrics {
    PolicyKind kind;
    std::string label;
    std::vector<double> run_costs;
    std::vector<std::optional<double>> planned_objectives;  // offline LP objective per run
    double mean_cost = 0.0;
    double std_cost = 0.0;  // sample standard deviation
    Matrix mean_loss;
    Matrix mean_outflow;
    Matrix mean_queue;
    std::vector<double> mean_cumulative_cost;  // per step
    std::vector<RunSeries> runs;               // empty unless kept
};

struct GapTable {
    std::string baseline;
    bool zero_baseline = false;  // hindsight mean is 0, only absolute costs are meaningful
    std::vector<std::pair<std::string, double>> mean_costs;
    std::vector<std::pair<std::string, double>> gaps_percent;  // empty when zero_baseline

    std::optional<double> gap(std::string_view label) const;
};

/// Mean costs at or below this are treated as zero (solver round-off).
inline constexpr double kZeroCostTolerance = 1e-9;

/// Percentage of each mean cost above the baseline's. Throws
/// std::invalid_argument when the baseline label is missing.
GapTable compute_gaps(const std::vector<std::pair<std::string, double>>& mean_costs,
                      std::string_view baseline = "batch_hindsight");

struct AggregateMetrics {
    ScenarioConfig config;
    std::vector<MethodMetrics> methods;
    Matrix mean_demand;    // horizon x P, realized arrivals averaged over runs
    Matrix sample_demand;  // realized arrivals of run 0
    std::vector<std::uint64_t> demand_hashes;  // per run
    bool paired = true;    // every method consumed the same demand per run
    std::vector<double> hindsight_objectives;  // batch LP objective per run, when computed
    InvariantReport invariants;
    GapTable gaps;

    const MethodMetrics* find(std::string_view label) const;
};

struct HarnessOptions {
    int threads = 1;  // 0 = hardware concurrency
    lp::SolveOptions solver;
    bool keep_run_series = true;
    bool always_compute_hindsight = false;  // solve the batch LP even when it is not a listed method
    std::function<void(int run, std::string_view method)> on_rollout;  // progress hook, serialized
};

/// Error from one (run, method) rollout.
class RolloutFailure : public std::runtime_error {
public:
    RolloutFailure(int run, std::string method, const std::string& what, bool solver_failure);
    int run() const { return run_; }
    const std::string& method() const { return method_; }
    bool solver_failure() const { return solver_failure_; }

private:
    int run_;
    std::string method_;
    bool solver_failure_;
};

/// Rolls every method out on the same realized demand per run. Results depend
/// only on the config and seed, never on thread count or scheduling.
AggregateMetrics run_monte_carlo(const ScenarioConfig& config, const std::vector<PolicyKind>& methods,
                                 const HarnessOptions& options = {});

struct WindowSweep {
    std::vector<int> windows;
    std::vector<double> mean_costs;
    std::vector<double> std_costs;
    std::vector<std::vector<double>> pct_diff;  // [i][j] = 100 (cost_i - cost_j) / cost_j
    AggregateMetrics metrics;
};

WindowSweep sweep_window(const ScenarioConfig& config, const std::vector<int>& windows,
                         const HarnessOptions& options = {});

/// FNV-1a over the realized arrivals.
std::uint64_t hash_demand(const DemandTrajectory& demand);

}  // namespace hts
