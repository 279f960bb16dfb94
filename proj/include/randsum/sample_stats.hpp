#pragma once

#include <cstddef>
#include <optional>
#include <span>

namespace randsum {

// A point estimate with its asymptotic standard error.
struct Estimate {
    double value = 0.0;
    double std_error = 0.0;
};

double sample_mean(std::span<const double> x);
// Denominator n.
double population_variance(std::span<const double> x);

// Pearson correlation; nullopt when fewer than two points or either
// variable has zero variance.
std::optional<double> pearson(std::span<const double> x, std::span<const double> y);

// Standard errors below are sd(influence function) / sqrt(n), which do not
// assume normality; they need finite fourth moments to be meaningful.
Estimate mean_estimate(std::span<const double> x);
Estimate variance_estimate(std::span<const double> x);  // denominator n - 1
Estimate covariance_estimate(std::span<const double> x, std::span<const double> y);
Estimate correlation_estimate(std::span<const double> x, std::span<const double> y);
// Var(N)/E[N].
Estimate dispersion_estimate(std::span<const double> n);
// rho(N,S)^2 / (phi (1 - rho(N,S)^2)) with phi = Var(N)/E[N].
Estimate j_equation_estimate(std::span<const double> n, std::span<const double> s);

}  // namespace randsum
