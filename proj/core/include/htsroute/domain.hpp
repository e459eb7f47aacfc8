#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hts {

/// Dense row-major matrix of doubles. Used for every (t,p), (m,p) table.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return data_.empty(); }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

    double row_sum(std::size_t r) const;
    double col_sum(std::size_t c) const;
    double sum() const;

    bool operator==(const Matrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// All model parameters of one scenario. Indices in the library are 0-based:
/// steps t in [0, horizon), modules m in [0, num_modules), priorities p in
/// [0, num_priorities) with p = 0 the most valuable class.
struct ScenarioConfig {
    int num_modules = 16;
    int num_priorities = 3;
    int horizon = 100;
    int window = 10;
    std::vector<double> loss_costs{10.0, 4.0, 1.0};
    double queue_capacity = 10.0;
    double initial_queue = 0.0;
    double max_weight_step = 0.1;
    double scheduler_period = 0.1;
    double link_capacity = 10.0;
    double lambda_start = 10.0;
    double lambda_end = 100.0;
    bool ramp_two_sided = true;
    bool terminal_flush = true;
    int num_runs = 100;
    std::uint64_t base_seed = 20240518;
    double time_step_duration = 1.0;  // metadata only

    /// Per-module per-priority service cap implied by a unit weight.
    double service_per_weight() const { return 1.0 / scheduler_period; }

    bool operator==(const ScenarioConfig&) const = default;
};

struct ConfigIssue {
    enum class Kind { invalid_dimension, invalid_range };
    Kind kind;
    std::string field;
    std::string message;

    /// "invalid_range: loss_costs" style tag.
    std::string tag() const;
};

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<ConfigIssue> issues);
    const std::vector<ConfigIssue>& issues() const { return issues_; }

private:
    std::vector<ConfigIssue> issues_;
};

/// Every violated invariant of the config; empty when valid.
std::vector<ConfigIssue> config_issues(const ScenarioConfig& config);

/// Returns the config unchanged, or throws ConfigError carrying the full list.
const ScenarioConfig& validate_config(const ScenarioConfig& config);

/// Base arrival rate at step t, linear from lambda_start to lambda_end.
double base_arrival_rate(const ScenarioConfig& config, int t);

/// Mean arrivals of priority p at step t: base rate divided by k_p.
double lambda_schedule(const ScenarioConfig& config, int t, int p);

/// Realized and expected arrivals, both horizon x num_priorities.
struct DemandTrajectory {
    Matrix realized;
    Matrix expected;
};

/// Scheduler weights and planned inflow split for one step, both M x P.
struct ControlDecision {
    Matrix weights;
    Matrix inflow_plan;
};

struct PlantState {
    Matrix queues;                       // M x P occupancies
    std::optional<Matrix> last_weights;  // unset before the first step

    static PlantState initial(const ScenarioConfig& config);
};

}  // namespace hts
