#include "randsum/estimate.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/distributions/normal.hpp>

#include "randsum/error.hpp"
#include "randsum/sample_stats.hpp"

namespace randsum {

namespace {

void require_level(double level) {
    if (!(level > 0.0 && level < 1.0)) throw EstimationError("confidence level must lie in (0, 1)");
}

// Population Var(N)/mean(N) from running sums; the literal
// (sum N^2 / t - mean^2) / mean form shared by the long-run series and the
// Mailier index.
std::optional<double> dispersion_from_sums(double sum, double sum_sq, double t) {
    const double mean = sum / t;
    if (!(mean > 0.0)) return std::nullopt;
    const double var = std::max(0.0, sum_sq / t - mean * mean);
    return var / mean;
}

// Online co-moments of (x, y) pairs.
class RunningCorrelation {
public:
    void add(double x, double y) {
        ++n_;
        const double n = static_cast<double>(n_);
        const double dx = x - mean_x_;
        mean_x_ += dx / n;
        const double dy = y - mean_y_;
        mean_y_ += dy / n;
        m2_x_ += dx * (x - mean_x_);
        m2_y_ += dy * (y - mean_y_);
        c_xy_ += dx * (y - mean_y_);
    }

    std::size_t size() const noexcept { return n_; }

    std::optional<double> correlation() const {
        if (!(m2_x_ > 0.0) || !(m2_y_ > 0.0)) return std::nullopt;
        return std::clamp(c_xy_ / std::sqrt(m2_x_ * m2_y_), -1.0, 1.0);
    }

private:
    std::size_t n_ = 0;
    double mean_x_ = 0.0;
    double mean_y_ = 0.0;
    double m2_x_ = 0.0;
    double m2_y_ = 0.0;
    double c_xy_ = 0.0;
};

CorrelationPoint correlation_point(int year, std::size_t n, std::optional<double> rho, double level) {
    CorrelationPoint p;
    p.year = year;
    p.n = n;
    if (n < 3) return p;
    p.rho = rho;
    if (rho && n >= 4 && std::fabs(*rho) < 1.0) {
        const auto ci = fisher_interval(*rho, n, level);
        p.lo = ci.lo;
        p.hi = ci.hi;
    }
    return p;
}

std::vector<double> as_doubles(std::span<const std::uint64_t> counts) {
    return {counts.begin(), counts.end()};
}

}  // namespace

LongRunSeries long_run_series(const EventCatalog& catalog, double ci_level, std::optional<std::size_t> window) {
    require_level(ci_level);
    if (window && *window < 3) throw EstimationError("moving window must span at least 3 years");
    const auto counts = catalog.counts();
    const auto sums = catalog.sums();

    LongRunSeries series;
    series.ci_level = ci_level;
    series.window = window;
    series.points.reserve(counts.size());

    double sum_n = 0.0, sum_n2 = 0.0, sum_s = 0.0;
    // Pooled per-event moments (Welford over every intensity so far).
    double events = 0.0, event_mean = 0.0, event_m2 = 0.0;
    RunningCorrelation corr;

    for (std::size_t i = 0; i < counts.size(); ++i) {
        const double n = static_cast<double>(counts[i]);
        sum_n += n;
        sum_n2 += n * n;
        sum_s += sums[i];
        for (const auto& e : catalog.year_events(i)) {
            events += 1.0;
            const double d = e.intensity - event_mean;
            event_mean += d / events;
            event_m2 += d * (e.intensity - event_mean);
        }
        corr.add(n, sums[i]);

        const double t = static_cast<double>(i + 1);
        LongRunPoint p;
        p.year = catalog.first_year() + static_cast<int>(i);
        p.cutoff = i + 1;
        p.e_n = sum_n / t;
        p.e_s = sum_s / t;
        if (sum_n > 0.0) p.e_x = sum_s / sum_n;
        p.phi = dispersion_from_sums(sum_n, sum_n2, t);

        if (!window) {
            const auto cp = correlation_point(p.year, p.cutoff, corr.correlation(), ci_level);
            p.rho = cp.rho;
            p.rho_lo = cp.lo;
            p.rho_hi = cp.hi;
        }

        const double event_var = events > 0.0 ? event_m2 / events : 0.0;
        if (p.phi && p.e_x && event_var > 0.0) p.j2phi = *p.phi * (*p.e_x * *p.e_x) / event_var;
        series.points.push_back(p);
    }

    if (window && *window <= counts.size()) {
        const auto windowed = moving_window_correlation(catalog, *window, ci_level);
        for (std::size_t k = 0; k < windowed.size(); ++k) {
            auto& p = series.points[k + *window - 1];
            p.rho = windowed[k].rho;
            p.rho_lo = windowed[k].lo;
            p.rho_hi = windowed[k].hi;
        }
    }
    return series;
}

std::vector<CorrelationPoint> expanding_correlation(const EventCatalog& catalog, double ci_level) {
    require_level(ci_level);
    if (catalog.year_count() < 3) throw EstimationError("expanding correlation needs at least 3 years");
    const auto counts = catalog.counts();
    const auto sums = catalog.sums();
    std::vector<CorrelationPoint> out;
    out.reserve(counts.size());
    RunningCorrelation corr;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        corr.add(static_cast<double>(counts[i]), sums[i]);
        out.push_back(correlation_point(catalog.first_year() + static_cast<int>(i), i + 1, corr.correlation(),
                                        ci_level));
    }
    return out;
}

std::vector<CorrelationPoint> moving_window_correlation(const EventCatalog& catalog, std::size_t window,
                                                        double ci_level) {
    require_level(ci_level);
    if (window < 3) throw EstimationError("moving window must span at least 3 years");
    if (window > catalog.year_count()) throw EstimationError("moving window exceeds catalog length");
    const auto n = as_doubles(catalog.counts());
    const auto sums = catalog.sums();
    std::vector<CorrelationPoint> out;
    out.reserve(n.size() - window + 1);
    for (std::size_t end = window; end <= n.size(); ++end) {
        const std::size_t begin = end - window;
        const auto rho = pearson(std::span(n).subspan(begin, window), sums.subspan(begin, window));
        out.push_back(correlation_point(catalog.first_year() + static_cast<int>(end - 1), window, rho, ci_level));
    }
    return out;
}

Interval fisher_interval(double rho, std::size_t n, double level) {
    require_level(level);
    if (!(std::fabs(rho) < 1.0)) throw EstimationError("Fisher interval needs |rho| < 1");
    if (n <= 3) throw EstimationError("Fisher interval needs n >= 4");
    const boost::math::normal_distribution<double> standard;
    const double q = boost::math::quantile(standard, 0.5 * (1.0 + level));
    const double z = std::atanh(rho);
    const double half_width = q / std::sqrt(static_cast<double>(n) - 3.0);
    return {std::tanh(z - half_width), std::tanh(z + half_width)};
}

std::optional<double> nx_independence(const EventCatalog& catalog) {
    std::vector<double> n, mean_x;
    const auto counts = catalog.counts();
    const auto sums = catalog.sums();
    for (std::size_t i = 0; i < counts.size(); ++i) {
        if (counts[i] == 0) continue;
        n.push_back(static_cast<double>(counts[i]));
        mean_x.push_back(sums[i] / static_cast<double>(counts[i]));
    }
    if (n.size() < 3) throw EstimationError("N-X independence needs at least 3 years with events");
    return pearson(n, mean_x);
}

std::string_view to_string(SeasonActivity activity) noexcept {
    return activity == SeasonActivity::Active ? "active" : "inactive";
}

std::vector<SeasonActivity> season_activity(std::span<const std::uint64_t> counts) {
    if (counts.size() < 2) throw EstimationError("season activity needs at least 2 years");
    const auto values = as_doubles(counts);
    const double mean = sample_mean(values);
    const double m = static_cast<double>(values.size());
    const double sd = std::sqrt(population_variance(values) * m / (m - 1.0));
    const double threshold = mean + sd;
    std::vector<SeasonActivity> out;
    out.reserve(values.size());
    for (double v : values) out.push_back(v > threshold ? SeasonActivity::Active : SeasonActivity::Inactive);
    return out;
}

double mailier_index(std::span<const std::uint64_t> counts) {
    if (counts.size() < 2) throw EstimationError("Mailier index needs at least 2 years");
    double sum = 0.0, sum_sq = 0.0;
    for (auto c : counts) {
        const double v = static_cast<double>(c);
        sum += v;
        sum_sq += v * v;
    }
    const auto phi = dispersion_from_sums(sum, sum_sq, static_cast<double>(counts.size()));
    if (!phi) throw EstimationError("Mailier index undefined: mean count is zero");
    return *phi - 1.0;
}

}  // namespace randsum
