#include "htsroute/domain.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace hts {

double Matrix::row_sum(std::size_t r) const {
    double s = 0.0;
    for (std::size_t c = 0; c < cols_; ++c) s += (*this)(r, c);
    return s;
}

double Matrix::col_sum(std::size_t c) const {
    double s = 0.0;
    for (std::size_t r = 0; r < rows_; ++r) s += (*this)(r, c);
    return s;
}

double Matrix::sum() const { return std::accumulate(data_.begin(), data_.end(), 0.0); }

std::string ConfigIssue::tag() const {
    return std::string(kind == Kind::invalid_dimension ? "invalid_dimension" : "invalid_range") +
           ": " + field;
}

namespace {

std::string join_issues(const std::vector<ConfigIssue>& issues) {
    std::ostringstream os;
    os << "invalid scenario config";
    for (const auto& issue : issues) os << "\n  " << issue.tag() << " (" << issue.message << ")";
    return os.str();
}

}  // namespace

ConfigError::ConfigError(std::vector<ConfigIssue> issues)
    : std::runtime_error(join_issues(issues)), issues_(std::move(issues)) {}

std::vector<ConfigIssue> config_issues(const ScenarioConfig& c) {
    std::vector<ConfigIssue> out;
    auto dim = [&](const char* field, std::string msg) {
        out.push_back({ConfigIssue::Kind::invalid_dimension, field, std::move(msg)});
    };
    auto range = [&](const char* field, std::string msg) {
        out.push_back({ConfigIssue::Kind::invalid_range, field, std::move(msg)});
    };
    auto finite_positive = [](double v) { return std::isfinite(v) && v > 0.0; };
    auto finite_nonneg = [](double v) { return std::isfinite(v) && v >= 0.0; };

    if (c.num_modules < 1) dim("num_modules", "must be >= 1");
    if (c.num_priorities < 1) dim("num_priorities", "must be >= 1");
    if (c.horizon < 1) dim("horizon", "must be >= 1");
    if (c.window < 1) dim("window", "must be >= 1");
    if (c.num_runs < 1) dim("num_runs", "must be >= 1");

    if (c.num_priorities >= 1 &&
        c.loss_costs.size() != static_cast<std::size_t>(c.num_priorities)) {
        dim("loss_costs", "expected " + std::to_string(c.num_priorities) + " entries, got " +
                              std::to_string(c.loss_costs.size()));
    } else {
        bool positive = true;
        bool ordered = true;
        for (std::size_t p = 0; p < c.loss_costs.size(); ++p) {
            if (!finite_positive(c.loss_costs[p])) positive = false;
            if (p > 0 && c.loss_costs[p] > c.loss_costs[p - 1]) ordered = false;
        }
        if (!positive) range("loss_costs", "every cost must be finite and > 0");
        else if (!ordered) range("loss_costs", "costs must be nonincreasing in priority");
    }

    if (!finite_nonneg(c.queue_capacity)) range("queue_capacity", "must be >= 0");
    if (!finite_nonneg(c.initial_queue)) range("initial_queue", "must be >= 0");
    if (finite_nonneg(c.queue_capacity) && finite_nonneg(c.initial_queue) && c.num_priorities >= 1 &&
        c.initial_queue * c.num_priorities > c.queue_capacity + 1e-12) {
        range("initial_queue", "initial_queue * num_priorities exceeds queue_capacity");
    }
    if (!(std::isfinite(c.max_weight_step) && c.max_weight_step > 0.0 && c.max_weight_step <= 1.0))
        range("max_weight_step", "must lie in (0, 1]");
    if (!finite_positive(c.scheduler_period)) range("scheduler_period", "must be > 0");
    if (!finite_positive(c.link_capacity)) range("link_capacity", "must be > 0");
    if (!finite_nonneg(c.lambda_start)) range("lambda_start", "must be >= 0");
    if (!finite_nonneg(c.lambda_end)) range("lambda_end", "must be >= 0");
    if (!finite_positive(c.time_step_duration)) range("time_step_duration", "must be > 0");
    return out;
}

const ScenarioConfig& validate_config(const ScenarioConfig& config) {
    auto issues = config_issues(config);
    if (!issues.empty()) throw ConfigError(std::move(issues));
    return config;
}

double base_arrival_rate(const ScenarioConfig& config, int t) {
    if (t < 0 || t >= config.horizon) throw std::out_of_range("step index out of range");
    if (config.horizon == 1) return config.lambda_start;
    const double frac = static_cast<double>(t) / static_cast<double>(config.horizon - 1);
    return config.lambda_start + (config.lambda_end - config.lambda_start) * frac;
}

double lambda_schedule(const ScenarioConfig& config, int t, int p) {
    if (p < 0 || p >= config.num_priorities ||
        static_cast<std::size_t>(p) >= config.loss_costs.size())
        throw std::out_of_range("priority index out of range");
    return base_arrival_rate(config, t) / config.loss_costs[static_cast<std::size_t>(p)];
}

PlantState PlantState::initial(const ScenarioConfig& config) {
    return PlantState{Matrix(static_cast<std::size_t>(config.num_modules),
                             static_cast<std::size_t>(config.num_priorities), config.initial_queue),
                      std::nullopt};
}

}  // namespace hts
