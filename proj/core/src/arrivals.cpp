#include "htsroute/arrivals.hpp"

#include <cmath>
#include <stdexcept>

namespace hts {

std::uint64_t mix_seed(std::uint64_t base, std::uint64_t run, std::uint64_t priority) {
    SplitMix64 mixer(base ^ (run * 0x9E3779B97F4A7C15ULL) ^ (priority * 0xBF58476D1CE4E5B9ULL));
    return mixer.next();
}

std::uint64_t poisson_inverse_cdf(double mean, double u) {
    if (!(mean >= 0.0)) throw std::domain_error("poisson mean must be >= 0");
    if (mean > kPoissonMeanLimit) throw std::domain_error("mean_overflow");
    if (mean == 0.0) return 0;

    // e^-mean underflows past ~745; switch to log-space terms there.
    constexpr double kDirectLimit = 700.0;
    std::uint64_t k = 0;
    if (mean <= kDirectLimit) {
        double pmf = std::exp(-mean);
        double cdf = pmf;
        while (cdf <= u) {
            pmf = pmf * mean / static_cast<double>(k + 1);
            ++k;
            cdf += pmf;
            // Tail mass is below double resolution; u < 1 guarantees progress
            // except when rounding leaves cdf stuck just under u.
            if (pmf == 0.0 && static_cast<double>(k) > mean) break;
        }
        return k;
    }
    const double log_mean = std::log(mean);
    double log_pmf = -mean;
    double cdf = 0.0;
    for (;;) {
        cdf += std::exp(log_pmf);
        if (cdf > u) return k;
        log_pmf += log_mean - std::log(static_cast<double>(k + 1));
        ++k;
        if (static_cast<double>(k) > mean && std::exp(log_pmf) == 0.0) return k;
    }
}

std::uint64_t sample_poisson(SplitMix64& rng, double mean) {
    if (mean > kPoissonMeanLimit) throw std::domain_error("mean_overflow");
    const double u = rng.next_unit();
    return poisson_inverse_cdf(mean, u);
}

DemandTrajectory generate_demands(const ScenarioConfig& config, int run_index) {
    if (run_index < 0) throw std::invalid_argument("run_index must be >= 0");
    const auto T = static_cast<std::size_t>(config.horizon);
    const auto P = static_cast<std::size_t>(config.num_priorities);
    DemandTrajectory d{Matrix(T, P), Matrix(T, P)};
    for (std::size_t p = 0; p < P; ++p) {
        SplitMix64 rng(mix_seed(config.base_seed, static_cast<std::uint64_t>(run_index), p));
        for (std::size_t t = 0; t < T; ++t) {
            const double rate = lambda_schedule(config, static_cast<int>(t), static_cast<int>(p));
            d.expected(t, p) = rate;
            d.realized(t, p) = static_cast<double>(sample_poisson(rng, rate));
        }
    }
    return d;
}

}  // namespace hts
