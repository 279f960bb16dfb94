#pragma once

#include <cstdint>
#include <string_view>

#include "randsum/random.hpp"
#include "randsum/severity.hpp"

namespace randsum {

enum class RateLink { Log, Identity };

std::string_view to_string(RateLink link) noexcept;
RateLink parse_rate_link(std::string_view name);

// Poisson yearly counts N_t ~ Poi(lambda_t) with
//   Log link:       lambda_t = exp(alpha0 + alpha1 * t)
//   Identity link:  lambda_t = alpha0 + alpha1 * t   (validated > 0 over the horizon)
class FrequencyModel {
public:
    FrequencyModel(double alpha0, double alpha1, RateLink link, Horizon horizon);

    double alpha0() const noexcept { return alpha0_; }
    double alpha1() const noexcept { return alpha1_; }
    RateLink link() const noexcept { return link_; }
    const Horizon& horizon() const noexcept { return horizon_; }

    // lambda_t = E[N|t] = Var(N|t). Throws ModelError outside the horizon.
    double rate(double t) const;

    std::uint64_t sample(double t, RandomStream& rng) const;

    // Var(N)/E[N]; 1 for every Poisson model.
    double dispersion() const noexcept { return 1.0; }
    // Var(N)/E[N] - 1, the convention that puts Poisson counts at 0.
    double mailier_dispersion() const noexcept { return dispersion() - 1.0; }

private:
    double alpha0_;
    double alpha1_;
    RateLink link_;
    Horizon horizon_;
};

// Exact Poisson variate: sequential-search inversion below a rate of 30,
// Hormann's PTRS transformed rejection at and above it.
std::uint64_t sample_poisson(double lambda, RandomStream& rng);

}  // namespace randsum
