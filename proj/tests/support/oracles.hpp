#pragma once

// Test-only reference computations. Nothing here calls into the code paths
// it is used to check.

#include <cmath>
#include <cstdint>
#include <vector>

#include "htsroute/arrivals.hpp"
#include "htsroute/domain.hpp"

namespace hts::oracle {

/// Poisson CDF by direct summation of lgamma-based terms.
inline double poisson_cdf(double mean, std::uint64_t k) {
    if (mean == 0.0) return 1.0;
    double s = 0.0;
    for (std::uint64_t i = 0; i <= k; ++i)
        s += std::exp(static_cast<double>(i) * std::log(mean) - mean - std::lgamma(static_cast<double>(i) + 1.0));
    return s;
}

/// Smallest k with CDF(k) > u.
inline std::uint64_t poisson_quantile(double mean, double u) {
    std::uint64_t k = 0;
    while (poisson_cdf(mean, k) <= u) ++k;
    return k;
}

/// Greedy single-module plant with cost-ordered overflow drops and end-of-
/// horizon flush, written independently of the library plant.
/// weights[t][p], demand[t][p]; returns total loss cost.
inline double greedy_single_module_cost(const ScenarioConfig& c, const std::vector<std::vector<double>>& weights,
                                        const std::vector<std::vector<double>>& demand) {
    const std::size_t P = c.loss_costs.size();
    std::vector<double> q(P, c.initial_queue);
    double cost = 0.0;
    for (std::size_t t = 0; t < demand.size(); ++t) {
        double total = 0.0;
        for (std::size_t p = 0; p < P; ++p) {
            const double avail = q[p] + demand[t][p];
            const double served = std::min({weights[t][p] / c.scheduler_period, c.link_capacity, avail});
            q[p] = avail - served;
            total += q[p];
        }
        // Drop from the last (cheapest, given nonincreasing costs) priority up.
        for (std::size_t i = P; i-- > 0 && total > c.queue_capacity;) {
            const double d = std::min(total - c.queue_capacity, q[i]);
            q[i] -= d;
            total -= d;
            cost += c.loss_costs[i] * d;
        }
    }
    if (c.terminal_flush)
        for (std::size_t p = 0; p < P; ++p) cost += c.loss_costs[p] * q[p];
    return cost;
}

}  // namespace hts::oracle
