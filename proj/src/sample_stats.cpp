#include "randsum/sample_stats.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "randsum/error.hpp"

namespace randsum {

namespace {

void require_size(std::span<const double> x, std::size_t minimum) {
    if (x.size() < minimum) throw EstimationError("not enough observations for the estimator");
}

void require_paired(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw EstimationError("paired samples differ in length");
}

Estimate from_influence(double value, const std::vector<double>& influence) {
    const double n = static_cast<double>(influence.size());
    double ss = 0.0;
    for (double v : influence) ss += v * v;
    return {value, std::sqrt(ss / n) / std::sqrt(n)};
}

struct Centered {
    double mean_x, mean_y, var_x, var_y, cov;
};

Centered centered_moments(std::span<const double> x, std::span<const double> y) {
    Centered c{sample_mean(x), sample_mean(y), 0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double a = x[i] - c.mean_x;
        const double b = y[i] - c.mean_y;
        c.var_x += a * a;
        c.var_y += b * b;
        c.cov += a * b;
    }
    const double n = static_cast<double>(x.size());
    c.var_x /= n;
    c.var_y /= n;
    c.cov /= n;
    return c;
}

// Influence values of the Pearson correlation at each observation.
std::vector<double> correlation_influence(std::span<const double> x, std::span<const double> y, const Centered& c,
                                          double rho) {
    const double sx = std::sqrt(c.var_x);
    const double sy = std::sqrt(c.var_y);
    std::vector<double> inf(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double za = (x[i] - c.mean_x) / sx;
        const double zb = (y[i] - c.mean_y) / sy;
        inf[i] = za * zb - 0.5 * rho * (za * za + zb * zb);
    }
    return inf;
}

}  // namespace

double sample_mean(std::span<const double> x) {
    require_size(x, 1);
    double sum = 0.0;
    for (double v : x) sum += v;
    return sum / static_cast<double>(x.size());
}

double population_variance(std::span<const double> x) {
    const double m = sample_mean(x);
    double ss = 0.0;
    for (double v : x) ss += (v - m) * (v - m);
    return ss / static_cast<double>(x.size());
}

std::optional<double> pearson(std::span<const double> x, std::span<const double> y) {
    require_paired(x, y);
    if (x.size() < 2) return std::nullopt;
    const auto c = centered_moments(x, y);
    if (!(c.var_x > 0.0) || !(c.var_y > 0.0)) return std::nullopt;
    const double r = c.cov / std::sqrt(c.var_x * c.var_y);
    return std::clamp(r, -1.0, 1.0);
}

Estimate mean_estimate(std::span<const double> x) {
    require_size(x, 2);
    const double m = sample_mean(x);
    std::vector<double> inf(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) inf[i] = x[i] - m;
    return from_influence(m, inf);
}

Estimate variance_estimate(std::span<const double> x) {
    require_size(x, 2);
    const double m = sample_mean(x);
    const double pop = population_variance(x);
    std::vector<double> inf(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) inf[i] = (x[i] - m) * (x[i] - m) - pop;
    const double n = static_cast<double>(x.size());
    return from_influence(pop * n / (n - 1.0), inf);
}

Estimate covariance_estimate(std::span<const double> x, std::span<const double> y) {
    require_paired(x, y);
    require_size(x, 2);
    const auto c = centered_moments(x, y);
    std::vector<double> inf(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) inf[i] = (x[i] - c.mean_x) * (y[i] - c.mean_y) - c.cov;
    const double n = static_cast<double>(x.size());
    return from_influence(c.cov * n / (n - 1.0), inf);
}

Estimate correlation_estimate(std::span<const double> x, std::span<const double> y) {
    require_paired(x, y);
    require_size(x, 3);
    const auto c = centered_moments(x, y);
    if (!(c.var_x > 0.0) || !(c.var_y > 0.0)) throw EstimationError("correlation undefined: zero variance");
    const double rho = c.cov / std::sqrt(c.var_x * c.var_y);
    return from_influence(rho, correlation_influence(x, y, c, rho));
}

Estimate dispersion_estimate(std::span<const double> n) {
    require_size(n, 2);
    const double m = sample_mean(n);
    if (!(m > 0.0)) throw EstimationError("dispersion undefined: zero mean");
    const double v = population_variance(n);
    std::vector<double> inf(n.size());
    for (std::size_t i = 0; i < n.size(); ++i) {
        const double a = n[i] - m;
        inf[i] = (a * a - v) / m - v * a / (m * m);
    }
    return from_influence(v / m, inf);
}

Estimate j_equation_estimate(std::span<const double> n, std::span<const double> s) {
    require_paired(n, s);
    require_size(n, 3);
    const auto c = centered_moments(n, s);
    if (!(c.mean_x > 0.0) || !(c.var_x > 0.0) || !(c.var_y > 0.0)) {
        throw EstimationError("J-equation estimate undefined: zero mean or variance");
    }
    const double rho = c.cov / std::sqrt(c.var_x * c.var_y);
    const double phi = c.var_x / c.mean_x;
    const double r2 = rho * rho;
    if (!(r2 < 1.0)) throw EstimationError("J-equation estimate undefined: |rho| = 1");
    const double j2 = r2 / (phi * (1.0 - r2));
    const double d_rho = 2.0 * rho / (phi * (1.0 - r2) * (1.0 - r2));
    const double d_phi = -j2 / phi;

    auto inf = correlation_influence(n, s, c, rho);
    for (std::size_t i = 0; i < n.size(); ++i) {
        const double a = n[i] - c.mean_x;
        const double inf_phi = (a * a - c.var_x) / c.mean_x - c.var_x * a / (c.mean_x * c.mean_x);
        inf[i] = d_rho * inf[i] + d_phi * inf_phi;
    }
    return from_influence(j2, inf);
}

}  // namespace randsum
