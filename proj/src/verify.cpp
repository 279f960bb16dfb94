#include "randsum/verify.hpp"

#include <cmath>

#include "randsum/error.hpp"
#include "randsum/riskmodel.hpp"
#include "randsum/sample_stats.hpp"

namespace randsum {

double CheckResult::z_score() const noexcept {
    const double diff = estimate - target;
    if (std_error > 0.0) return diff / std_error;
    return diff == 0.0 ? 0.0 : std::copysign(INFINITY, diff);
}

bool CheckResult::passed() const noexcept {
    return std::isfinite(estimate) && std::fabs(z_score()) <= tolerance_sigma;
}

bool VerificationReport::all_passed() const noexcept {
    for (const auto& c : checks) {
        if (!c.passed()) return false;
    }
    return !checks.empty();
}

VerificationReport verify_fixed_year(const SimulationConfig& config, double t, double sigma, unsigned threads) {
    if (!(sigma > 0.0)) throw ModelError("verification tolerance must be positive");
    const auto draws = replicate_fixed_year(config, t, threads);
    const auto truth = summarize(config.freq, config.sev, t, CrossCheck::On);

    std::vector<double> n, s, first_x, s_given_event;
    n.reserve(draws.size());
    s.reserve(draws.size());
    for (const auto& d : draws) {
        n.push_back(static_cast<double>(d.count));
        s.push_back(d.aggregate);
        if (d.first_intensity) {
            first_x.push_back(*d.first_intensity);
            s_given_event.push_back(d.aggregate);
        }
    }

    VerificationReport report;
    report.t = t;
    report.replicates = draws.size();
    report.tolerance_sigma = sigma;
    const auto add = [&](std::string name, Estimate e, double target) {
        report.checks.push_back({std::move(name), e.value, target, e.std_error, sigma});
    };

    add("E[N] = lambda", mean_estimate(n), truth.e_n);
    add("Var(N) = lambda", variance_estimate(n), truth.var_n);
    add("E[S] = E[N]E[X] (Wald)", mean_estimate(s), truth.e_s);
    add("Var(S) = E[N]Var(X) + Var(N)E[X]^2 (Blackwell-Girshick)", variance_estimate(s), truth.var_s);
    add("cov(N,S) = E[X]Var(N)", covariance_estimate(n, s), truth.cov_ns);
    add("cor(N,S)", correlation_estimate(n, s), truth.cor_ns);
    // Given N >= 1, cov(X_1, S) = Var(X) exactly, so conditioning on an event costs nothing.
    if (first_x.size() >= 3) add("cov(X,S) = Var(X)", covariance_estimate(first_x, s_given_event), truth.cov_xs);
    add("rho^2/(phi(1-rho^2)) = J^2 (J-equation)", j_equation_estimate(n, s), truth.j_squared);
    return report;
}

}  // namespace randsum
