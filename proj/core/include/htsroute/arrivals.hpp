#pragma once

#include <cstdint>

#include "htsroute/domain.hpp"

namespace hts {

/// SplitMix64 generator. The sequence depends only on the seed, so streams
/// are reproducible across platforms and languages.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed = 0) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1) from the top 53 bits.
    double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    std::uint64_t state() const { return state_; }

private:
    std::uint64_t state_;
};

/// Seed for the (base, run, priority) stream.
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t run, std::uint64_t priority);

inline constexpr double kPoissonMeanLimit = 1e6;

/// Smallest k whose Poisson(mean) CDF exceeds u, u in [0, 1).
/// Throws std::domain_error("mean_overflow") above kPoissonMeanLimit.
std::uint64_t poisson_inverse_cdf(double mean, double u);

/// One Poisson draw by inverse transform on a single uniform.
std::uint64_t sample_poisson(SplitMix64& rng, double mean);

DemandTrajectory generate_demands(const ScenarioConfig& config, int run_index);

}  // namespace hts
