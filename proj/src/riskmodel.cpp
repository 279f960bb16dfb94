#include "randsum/riskmodel.hpp"

#include <cmath>
#include <string>

#include "linear_trend.hpp"
#include "randsum/error.hpp"

namespace randsum {

namespace {

constexpr double kCrossCheckTolerance = 1e-12;

void require_agreement(const char* what, double a, double b) {
    const double scale = std::max(std::fabs(a), std::fabs(b));
    if (std::fabs(a - b) > kCrossCheckTolerance * scale) {
        throw ModelError(std::string(what) + ": routes disagree (" + detail::format_number(a) + " vs " +
                         detail::format_number(b) + ")");
    }
}

struct YearInputs {
    double e_n;
    double var_n;
    double phi;
    Moments x;
};

YearInputs year_inputs(const FrequencyModel& freq, const SeverityModel& sev, double t) {
    const double lambda = freq.rate(t);
    return {lambda, lambda, freq.dispersion(), sev.moments(t)};
}

}  // namespace

double expected_aggregate(const FrequencyModel& freq, const SeverityModel& sev, double t) {
    return freq.rate(t) * sev.moments(t).mean;
}

double blackwell_girshick(double e_n, double var_n, const Moments& x) {
    return e_n * x.variance + var_n * x.mean * x.mean;
}

double variance_aggregate_poisson(double lambda, const Moments& x) {
    return lambda * x.second_moment;
}

double variance_aggregate_phi_form(double e_n, double phi, const Moments& x) {
    if (!(e_n > 0.0)) throw ModelError("phi-form variance requires E[N] > 0");
    if (phi < 0.0) throw ModelError("phi-form variance requires phi >= 0");
    if (x.variance < 0.0) throw ModelError("phi-form variance requires Var(X) >= 0");
    return e_n * (x.variance + phi * x.mean * x.mean);
}

double variance_aggregate(const FrequencyModel& freq, const SeverityModel& sev, double t, CrossCheck check) {
    const auto in = year_inputs(freq, sev, t);
    const double direct = blackwell_girshick(in.e_n, in.var_n, in.x);
    if (check == CrossCheck::On) {
        require_agreement("Var(S) Poisson shortcut", direct, variance_aggregate_poisson(in.e_n, in.x));
        require_agreement("Var(S) phi form", direct, variance_aggregate_phi_form(in.e_n, in.phi, in.x));
    }
    return direct;
}

double cov_ns(const FrequencyModel& freq, const SeverityModel& sev, double t, CrossCheck check) {
    const auto in = year_inputs(freq, sev, t);
    const double direct = in.x.mean * in.var_n;
    if (check == CrossCheck::On) {
        require_agreement("cov(N,S) = phi E[S]", direct, in.phi * in.e_n * in.x.mean);
    }
    return direct;
}

double cov_xs(const SeverityModel& sev, double t) {
    return sev.moments(t).variance;
}

double cor_xs(const FrequencyModel& freq, const SeverityModel& sev, double t) {
    const auto in = year_inputs(freq, sev, t);
    const double var_s = blackwell_girshick(in.e_n, in.var_n, in.x);
    if (!(var_s > 0.0)) throw ModelError("cor(X,S) undefined: Var(S) is zero");
    return std::sqrt(in.x.variance / var_s);
}

double cor_ns_direct(double e_n, double var_n, const Moments& x) {
    const double var_s = blackwell_girshick(e_n, var_n, x);
    if (!(var_n > 0.0) || !(var_s > 0.0)) throw ModelError("cor(N,S) undefined: zero variance");
    return x.mean * std::sqrt(var_n / var_s);
}

double cor_ns_phi_form(double phi, const Moments& x) {
    const double denom = x.variance + phi * x.mean * x.mean;
    if (!(phi > 0.0) || !(denom > 0.0)) throw ModelError("cor(N,S) undefined: zero variance");
    return std::sqrt(phi) * x.mean / std::sqrt(denom);
}

double cor_ns(const FrequencyModel& freq, const SeverityModel& sev, double t, CrossCheck check) {
    const auto in = year_inputs(freq, sev, t);
    const double direct = cor_ns_direct(in.e_n, in.var_n, in.x);
    if (check == CrossCheck::On) require_agreement("cor(N,S) phi form", direct, cor_ns_phi_form(in.phi, in.x));
    return direct;
}

double j_equation(double rho, double phi) {
    if (!(phi > 0.0)) throw ModelError("J-equation requires phi > 0");
    if (!(rho > 0.0) || !(rho < 1.0)) {
        throw ModelError("J-equation requires 0 < rho < 1 (rho = 1 means a degenerate severity)");
    }
    const double r2 = rho * rho;
    return r2 / (phi * (1.0 - r2));
}

RiskSummary summarize(const FrequencyModel& freq, const SeverityModel& sev, double t, CrossCheck check) {
    const auto in = year_inputs(freq, sev, t);
    RiskSummary s;
    s.t = t;
    s.e_n = in.e_n;
    s.var_n = in.var_n;
    s.phi = in.phi;
    s.e_x = in.x.mean;
    s.var_x = in.x.variance;
    s.e_s = in.e_n * in.x.mean;
    s.var_s = blackwell_girshick(in.e_n, in.var_n, in.x);
    s.cov_ns = in.x.mean * in.var_n;
    s.cor_ns = cor_ns_direct(in.e_n, in.var_n, in.x);
    s.cov_xs = in.x.variance;
    s.cor_xs = std::sqrt(in.x.variance / s.var_s);
    s.j_squared = sev.j_squared();
    if (check == CrossCheck::On) {
        require_agreement("Var(S) Poisson shortcut", s.var_s, variance_aggregate_poisson(s.e_n, in.x));
        require_agreement("Var(S) phi form", s.var_s, variance_aggregate_phi_form(s.e_n, s.phi, in.x));
        require_agreement("cov(N,S) = phi E[S]", s.cov_ns, s.phi * s.e_s);
        require_agreement("cor(N,S) phi form", s.cor_ns, cor_ns_phi_form(s.phi, in.x));
        require_agreement("J^2 from moments", s.j_squared, s.e_x * s.e_x / s.var_x);
    }
    return s;
}

RiskSummary table1_row(SeverityFamily family, Table1Params params, double t, double lambda) {
    const Horizon year{t, t};
    const FrequencyModel freq(lambda, 0.0, RateLink::Identity, year);
    const SeverityModel sev(family, TrendParams{params.mu, 0.0}, params.shape, year);
    return summarize(freq, sev, t, CrossCheck::On);
}

double table1_correlation(SeverityFamily family, double shape) {
    switch (family) {
        case SeverityFamily::Uniform: return std::sqrt(3.0) / 2.0;
        case SeverityFamily::Gamma: return shape / std::sqrt(shape + shape * shape);
        case SeverityFamily::Exponential: return std::sqrt(2.0) / 2.0;
        case SeverityFamily::LogNormal: return std::exp(-0.5 * shape * shape);
        case SeverityFamily::GPD: return std::sqrt((1.0 - 2.0 * shape) / (2.0 - 2.0 * shape));
    }
    return 0.0;
}

}  // namespace randsum
