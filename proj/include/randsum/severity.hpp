#pragma once

#include <string>
#include <string_view>

#include "randsum/random.hpp"

namespace randsum {

// Closed interval of year indices over which a model has been validated.
struct Horizon {
    double first = 1.0;
    double last = 1.0;

    bool contains(double t) const noexcept { return t >= first && t <= last; }
};

// Linear time trend of a severity model's scale driver: driver(t) = intercept + slope * t.
struct TrendParams {
    double intercept = 0.0;
    double slope = 0.0;

    double at(double t) const noexcept { return intercept + slope * t; }
};

enum class SeverityFamily { Uniform, Gamma, Exponential, LogNormal, GPD };

std::string_view to_string(SeverityFamily family) noexcept;
// Case-insensitive; accepts "lognormal"/"log-normal" and "gpd"/"generalised-pareto".
SeverityFamily parse_severity_family(std::string_view name);

struct Moments {
    double mean = 0.0;
    double variance = 0.0;
    double second_moment = 0.0;
};

// Distribution of a single event intensity in year t.
//
//   Uniform      Unif(0, mu_t)
//   Gamma        shape theta, scale mu_t
//   Exponential  mean mu_t
//   LogNormal    log X ~ Normal(mu_t, sigma^2), sigma constant in time
//   GPD          threshold 0, scale 1/mu_t, shape xi < 1/2
//
// where mu_t is the trend driver. For every family except LogNormal the
// driver must be strictly positive over the horizon; LogNormal's driver
// is a log-location and may take any sign.
class SeverityModel {
public:
    // `shape` is theta for Gamma, sigma for LogNormal, xi for GPD and is
    // ignored for Uniform and Exponential.
    SeverityModel(SeverityFamily family, TrendParams trend, double shape, Horizon horizon);

    static SeverityModel uniform(TrendParams trend, Horizon horizon);
    static SeverityModel gamma(TrendParams trend, double theta, Horizon horizon);
    static SeverityModel exponential(TrendParams trend, Horizon horizon);
    static SeverityModel lognormal(TrendParams trend, double sigma, Horizon horizon);
    static SeverityModel gpd(TrendParams trend, double xi, Horizon horizon);

    SeverityFamily family() const noexcept { return family_; }
    const TrendParams& trend() const noexcept { return trend_; }
    double shape() const noexcept { return shape_; }
    const Horizon& horizon() const noexcept { return horizon_; }

    // Trend driver mu_t. Throws ModelError outside the horizon.
    double driver(double t) const;

    Moments moments(double t) const;

    // E[X]^2 / Var(X): a function of the shape alone.
    double j_squared() const noexcept;

    double sample(double t, RandomStream& rng) const;

    // Quantile function at probability u in [0, 1).
    double inverse_cdf(double t, double u) const;

private:
    SeverityFamily family_;
    TrendParams trend_;
    double shape_;
    Horizon horizon_;
};

// Marsaglia-Tsang; shape < 1 is handled by the U^(1/shape) boost.
double sample_standard_gamma(double shape, RandomStream& rng);

}  // namespace randsum
