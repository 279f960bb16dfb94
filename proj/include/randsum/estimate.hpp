#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "randsum/catalog.hpp"

namespace randsum {

// Cumulative estimates over years first_year..year of a catalog.
// Statistics that the data cannot support at a cutoff are absent, never 0.
struct LongRunPoint {
    int year = 0;
    std::size_t cutoff = 0;  // number of years included
    double e_n = 0.0;        // sum N_y / t
    double e_s = 0.0;        // sum S_y / t
    std::optional<double> e_x;    // sum S_y / sum N_y
    std::optional<double> phi;    // population Var(N) / mean(N)
    std::optional<double> rho;    // Pearson cor of (N_y, S_y)
    std::optional<double> rho_lo; // approximate Fisher interval
    std::optional<double> rho_hi;
    std::optional<double> j2phi;  // phi * e_x^2 / pooled event variance
};

struct LongRunSeries {
    double ci_level = 0.95;
    std::optional<std::size_t> window;
    std::vector<LongRunPoint> points;
};

// With `window`, the rho columns hold the trailing-window correlation
// ending at each cutoff instead of the expanding one.
LongRunSeries long_run_series(const EventCatalog& catalog, double ci_level = 0.95,
                              std::optional<std::size_t> window = std::nullopt);

struct CorrelationPoint {
    int year = 0;       // last year of the sample
    std::size_t n = 0;  // number of years in the sample
    std::optional<double> rho;
    std::optional<double> lo;
    std::optional<double> hi;
};

// Correlation of (N_y, S_y) over years up to each cutoff; rho needs n >= 3,
// the interval n >= 4 and |rho| < 1.
std::vector<CorrelationPoint> expanding_correlation(const EventCatalog& catalog, double ci_level = 0.95);

// Same statistic over each trailing window of `window` years (window >= 3).
std::vector<CorrelationPoint> moving_window_correlation(const EventCatalog& catalog, std::size_t window,
                                                        double ci_level = 0.95);

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

// Approximate interval from z = atanh(rho) ~ Normal(atanh(rho), 1/sqrt(n-3)).
Interval fisher_interval(double rho, std::size_t n, double level);

// Pearson correlation of N_y and the mean intensity S_y / N_y over years
// with N_y > 0. Throws with fewer than 3 such years; nullopt if either
// series is constant.
std::optional<double> nx_independence(const EventCatalog& catalog);

enum class SeasonActivity { Active, Inactive };

std::string_view to_string(SeasonActivity activity) noexcept;

// Active iff N_y > mean + sd (sample sd, n - 1); ties are Inactive.
std::vector<SeasonActivity> season_activity(std::span<const std::uint64_t> counts);

// Var(N)/mean(N) - 1 with the population variance; 0 for Poisson counts.
double mailier_index(std::span<const std::uint64_t> counts);

}  // namespace randsum
