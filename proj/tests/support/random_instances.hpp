#pragma once

#include <cmath>
#include <cstdint>

#include "htsroute/arrivals.hpp"
#include "htsroute/domain.hpp"

namespace hts::oracle {

/// Small random scenario (M <= 3, P <= 3, T <= 6) plus a realized flow matrix.
struct SmallInstance {
    ScenarioConfig config;
    Matrix flows;
};

inline SmallInstance random_small_instance(std::uint64_t seed) {
    SplitMix64 rng(seed);
    auto pick = [&](int lo, int hi) { return lo + static_cast<int>(rng.next() % static_cast<std::uint64_t>(hi - lo + 1)); };
    SmallInstance inst;
    auto& c = inst.config;
    c.num_modules = pick(1, 3);
    c.num_priorities = pick(1, 3);
    c.horizon = pick(1, 6);
    c.window = pick(1, 4);
    c.loss_costs.clear();
    double k = 1.0 + 9.0 * rng.next_unit();
    for (int p = 0; p < c.num_priorities; ++p) {
        c.loss_costs.push_back(k);
        k *= 0.3 + 0.7 * rng.next_unit();
    }
    c.queue_capacity = 8.0 * rng.next_unit();
    c.initial_queue = rng.next_unit() < 0.5 ? 0.0 : c.queue_capacity / c.num_priorities * rng.next_unit();
    c.max_weight_step = 0.05 + 0.95 * rng.next_unit();
    c.scheduler_period = 0.1 + 0.4 * rng.next_unit();
    c.link_capacity = 1.0 + 9.0 * rng.next_unit();
    c.ramp_two_sided = rng.next_unit() < 0.7;
    c.lambda_start = 1.0 + 5.0 * rng.next_unit();
    c.lambda_end = c.lambda_start + 15.0 * rng.next_unit();
    inst.flows = Matrix(static_cast<std::size_t>(c.horizon), static_cast<std::size_t>(c.num_priorities));
    for (double& v : inst.flows.data()) v = std::floor(20.0 * rng.next_unit());
    return inst;
}

}  // namespace hts::oracle
