#include "randsum/severity.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/distributions/normal.hpp>

#include "linear_trend.hpp"
#include "randsum/error.hpp"

namespace randsum {

std::string_view to_string(SeverityFamily family) noexcept {
    switch (family) {
        case SeverityFamily::Uniform: return "uniform";
        case SeverityFamily::Gamma: return "gamma";
        case SeverityFamily::Exponential: return "exponential";
        case SeverityFamily::LogNormal: return "lognormal";
        case SeverityFamily::GPD: return "gpd";
    }
    return "unknown";
}

SeverityFamily parse_severity_family(std::string_view name) {
    std::string key(name);
    std::transform(key.begin(), key.end(), key.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (key == "uniform") return SeverityFamily::Uniform;
    if (key == "gamma") return SeverityFamily::Gamma;
    if (key == "exponential") return SeverityFamily::Exponential;
    if (key == "lognormal" || key == "log-normal") return SeverityFamily::LogNormal;
    if (key == "gpd" || key == "generalised-pareto" || key == "generalized-pareto") return SeverityFamily::GPD;
    throw ModelError("unknown severity family '" + std::string(name) +
                     "' (expected uniform, gamma, exponential, lognormal or gpd)");
}

SeverityModel::SeverityModel(SeverityFamily family, TrendParams trend, double shape, Horizon horizon)
    : family_(family), trend_(trend), shape_(shape), horizon_(horizon) {
    detail::validate_horizon(horizon_);
    if (!std::isfinite(trend_.intercept) || !std::isfinite(trend_.slope)) {
        throw ModelError("trend parameters must be finite");
    }
    switch (family_) {
        case SeverityFamily::Uniform:
        case SeverityFamily::Exponential:
            shape_ = 0.0;
            break;
        case SeverityFamily::Gamma:
            if (!(shape_ > 0.0) || !std::isfinite(shape_)) throw ModelError("gamma shape must be > 0");
            break;
        case SeverityFamily::LogNormal:
            // sigma = 0 would make J^2 infinite and cor(N,S) = 1.
            if (!(shape_ > 0.0) || !std::isfinite(shape_)) throw ModelError("lognormal sigma must be > 0");
            break;
        case SeverityFamily::GPD:
            if (!std::isfinite(shape_)) throw ModelError("gpd shape must be finite");
            if (!(shape_ < 0.5)) throw ModelError("shape must be < 0.5 for finite variance");
            break;
    }
    if (family_ != SeverityFamily::LogNormal) {
        if (auto bad = detail::first_nonpositive(trend_.intercept, trend_.slope, horizon_)) {
            throw ModelError("scale driver beta0 + beta1*t is non-positive at t=" + detail::format_number(*bad));
        }
    }
}

SeverityModel SeverityModel::uniform(TrendParams trend, Horizon horizon) {
    return {SeverityFamily::Uniform, trend, 0.0, horizon};
}

SeverityModel SeverityModel::gamma(TrendParams trend, double theta, Horizon horizon) {
    return {SeverityFamily::Gamma, trend, theta, horizon};
}

SeverityModel SeverityModel::exponential(TrendParams trend, Horizon horizon) {
    return {SeverityFamily::Exponential, trend, 0.0, horizon};
}

SeverityModel SeverityModel::lognormal(TrendParams trend, double sigma, Horizon horizon) {
    return {SeverityFamily::LogNormal, trend, sigma, horizon};
}

SeverityModel SeverityModel::gpd(TrendParams trend, double xi, Horizon horizon) {
    return {SeverityFamily::GPD, trend, xi, horizon};
}

double SeverityModel::driver(double t) const {
    detail::require_in_horizon(horizon_, t);
    return trend_.at(t);
}

Moments SeverityModel::moments(double t) const {
    const double mu = driver(t);
    Moments m;
    switch (family_) {
        case SeverityFamily::Uniform:
            m.mean = mu / 2.0;
            m.variance = mu * mu / 12.0;
            break;
        case SeverityFamily::Gamma:
            m.mean = shape_ * mu;
            m.variance = shape_ * mu * mu;
            break;
        case SeverityFamily::Exponential:
            m.mean = mu;
            m.variance = mu * mu;
            break;
        case SeverityFamily::LogNormal: {
            const double s2 = shape_ * shape_;
            m.mean = std::exp(mu + s2 / 2.0);
            m.variance = std::expm1(s2) * std::exp(2.0 * mu + s2);
            break;
        }
        case SeverityFamily::GPD: {
            const double xi = shape_;
            m.mean = 1.0 / (mu * (1.0 - xi));
            m.variance = 1.0 / (mu * mu * (1.0 - xi) * (1.0 - xi) * (1.0 - 2.0 * xi));
            break;
        }
    }
    m.second_moment = m.variance + m.mean * m.mean;
    return m;
}

double SeverityModel::j_squared() const noexcept {
    switch (family_) {
        case SeverityFamily::Uniform: return 3.0;
        case SeverityFamily::Gamma: return shape_;
        case SeverityFamily::Exponential: return 1.0;
        case SeverityFamily::LogNormal: return 1.0 / std::expm1(shape_ * shape_);
        case SeverityFamily::GPD: return 1.0 - 2.0 * shape_;
    }
    return 0.0;
}

double SeverityModel::sample(double t, RandomStream& rng) const {
    const double mu = driver(t);
    switch (family_) {
        case SeverityFamily::Uniform:
            return mu * rng.uniform_open();
        case SeverityFamily::Gamma:
            return mu * sample_standard_gamma(shape_, rng);
        case SeverityFamily::Exponential:
            return -mu * std::log1p(-rng.uniform_open());
        case SeverityFamily::LogNormal:
            return std::exp(mu + shape_ * rng.standard_normal());
        case SeverityFamily::GPD:
            return inverse_cdf(t, rng.uniform_open());
    }
    return 0.0;
}

double SeverityModel::inverse_cdf(double t, double u) const {
    if (!(u >= 0.0 && u < 1.0)) throw ModelError("inverse_cdf probability must lie in [0, 1)");
    const double mu = driver(t);
    switch (family_) {
        case SeverityFamily::Uniform:
            return mu * u;
        case SeverityFamily::Gamma:
            return mu * boost::math::gamma_p_inv(shape_, u);
        case SeverityFamily::Exponential:
            return -mu * std::log1p(-u);
        case SeverityFamily::LogNormal: {
            if (u == 0.0) return 0.0;
            const boost::math::normal_distribution<double> standard;
            return std::exp(mu + shape_ * boost::math::quantile(standard, u));
        }
        case SeverityFamily::GPD: {
            const double scale = 1.0 / mu;
            const double xi = shape_;
            const double log_tail = std::log1p(-u);
            // (scale/xi) * ((1-u)^(-xi) - 1), written with expm1 so xi -> 0 is smooth.
            if (xi == 0.0) return -scale * log_tail;
            return scale / xi * std::expm1(-xi * log_tail);
        }
    }
    return 0.0;
}

double sample_standard_gamma(double shape, RandomStream& rng) {
    if (shape < 1.0) {
        const double boost_u = rng.uniform_open();
        return sample_standard_gamma(shape + 1.0, rng) * std::pow(boost_u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = rng.standard_normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = rng.uniform_open();
        const double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
        if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
    }
}

}  // namespace randsum
