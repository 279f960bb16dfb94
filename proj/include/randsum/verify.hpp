#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "randsum/simulate.hpp"

namespace randsum {

// One Monte Carlo estimate compared against its closed-form target.
struct CheckResult {
    std::string name;
    double estimate = 0.0;
    double target = 0.0;
    double std_error = 0.0;
    double tolerance_sigma = 4.0;

    double z_score() const noexcept;
    bool passed() const noexcept;
};

struct VerificationReport {
    double t = 0.0;
    std::size_t replicates = 0;
    double tolerance_sigma = 4.0;
    std::vector<CheckResult> checks;

    bool all_passed() const noexcept;
};

// Draws config.replicates fixed-year (N, S) pairs at year index t and checks
// E[N], Var(N), Wald, Blackwell-Girshick, cov(N,S), cor(N,S), cov(X,S) and
// the J-equation against the closed forms at `sigma` standard errors.
VerificationReport verify_fixed_year(const SimulationConfig& config, double t, double sigma = 4.0,
                                     unsigned threads = 1);

}  // namespace randsum
