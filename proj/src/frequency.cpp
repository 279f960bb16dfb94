#include "randsum/frequency.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "linear_trend.hpp"
#include "randsum/error.hpp"

namespace randsum {

namespace {

constexpr double kInversionLimit = 30.0;

std::uint64_t poisson_inversion(double lambda, RandomStream& rng) {
    const double p0 = std::exp(-lambda);
    for (;;) {
        const double u = rng.uniform();
        double p = p0;
        double cdf = p0;
        std::uint64_t k = 0;
        // Beyond ~200 terms the pmf has underflowed for any lambda < 30; the
        // only way to get there is u landing in the rounding gap of the cdf.
        while (u > cdf && k < 200) {
            ++k;
            p *= lambda / static_cast<double>(k);
            cdf += p;
        }
        if (k < 200) return k;
    }
}

std::uint64_t poisson_ptrs(double lambda, RandomStream& rng) {
    const double slam = std::sqrt(lambda);
    const double loglam = std::log(lambda);
    const double b = 0.931 + 2.53 * slam;
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double vr = 0.9277 - 3.6224 / (b - 2.0);
    for (;;) {
        const double u = rng.uniform() - 0.5;
        const double v = rng.uniform();
        const double us = 0.5 - std::fabs(u);
        const double k = std::floor((2.0 * a / us + b) * u + lambda + 0.43);
        if (us >= 0.07 && v <= vr) return static_cast<std::uint64_t>(k);
        if (k < 0.0 || (us < 0.013 && v > us)) continue;
        const double lhs = std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b);
        const double rhs = -lambda + k * loglam - std::lgamma(k + 1.0);
        if (lhs <= rhs) return static_cast<std::uint64_t>(k);
    }
}

}  // namespace

std::string_view to_string(RateLink link) noexcept {
    return link == RateLink::Log ? "log" : "identity";
}

RateLink parse_rate_link(std::string_view name) {
    std::string key(name);
    std::transform(key.begin(), key.end(), key.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (key == "log") return RateLink::Log;
    if (key == "identity") return RateLink::Identity;
    throw ModelError("unknown rate link '" + std::string(name) + "' (expected log or identity)");
}

FrequencyModel::FrequencyModel(double alpha0, double alpha1, RateLink link, Horizon horizon)
    : alpha0_(alpha0), alpha1_(alpha1), link_(link), horizon_(horizon) {
    detail::validate_horizon(horizon_);
    if (!std::isfinite(alpha0_) || !std::isfinite(alpha1_)) throw ModelError("rate parameters must be finite");
    if (link_ == RateLink::Identity) {
        if (auto bad = detail::first_nonpositive(alpha0_, alpha1_, horizon_)) {
            throw ModelError("rate non-positive at t>=" + detail::format_number(*bad) +
                             " (identity link requires alpha0 + alpha1*t > 0 over the horizon)");
        }
    } else {
        for (double t : {horizon_.first, horizon_.last}) {
            const double lambda = std::exp(alpha0_ + alpha1_ * t);
            if (!(lambda > 0.0) || !std::isfinite(lambda)) {
                throw ModelError("log-link rate under/overflows at t=" + detail::format_number(t));
            }
        }
    }
}

double FrequencyModel::rate(double t) const {
    detail::require_in_horizon(horizon_, t);
    const double eta = alpha0_ + alpha1_ * t;
    return link_ == RateLink::Log ? std::exp(eta) : eta;
}

std::uint64_t FrequencyModel::sample(double t, RandomStream& rng) const {
    return sample_poisson(rate(t), rng);
}

std::uint64_t sample_poisson(double lambda, RandomStream& rng) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw ModelError("poisson rate must be positive and finite");
    return lambda < kInversionLimit ? poisson_inversion(lambda, rng) : poisson_ptrs(lambda, rng);
}

}  // namespace randsum
