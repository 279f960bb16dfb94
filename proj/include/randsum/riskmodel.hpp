#pragma once

#include "randsum/frequency.hpp"
#include "randsum/severity.hpp"

namespace randsum {

// Closed-form second-order summary of the yearly aggregate S = X_1 + ... + X_N
// under conditional independence of N and the X_i given the year.
struct RiskSummary {
    double t = 0.0;
    double e_n = 0.0;
    double e_x = 0.0;
    double e_s = 0.0;
    double var_n = 0.0;
    double var_x = 0.0;
    double var_s = 0.0;
    double cov_ns = 0.0;
    double cor_ns = 0.0;
    double cov_xs = 0.0;
    double cor_xs = 0.0;
    double phi = 0.0;
    double j_squared = 0.0;
};

// When On, every quantity that has two algebraic routes is computed both
// ways and a ModelError is raised if they disagree beyond 1e-12 relative.
enum class CrossCheck { Off, On };

#ifdef NDEBUG
inline constexpr CrossCheck kDefaultCrossCheck = CrossCheck::Off;
#else
inline constexpr CrossCheck kDefaultCrossCheck = CrossCheck::On;
#endif

// Wald: E[N] E[X].
double expected_aggregate(const FrequencyModel& freq, const SeverityModel& sev, double t);

// Blackwell-Girshick: E[N] Var(X) + Var(N) E[X]^2.
double variance_aggregate(const FrequencyModel& freq, const SeverityModel& sev, double t,
                          CrossCheck check = kDefaultCrossCheck);
double blackwell_girshick(double e_n, double var_n, const Moments& x);
// Poisson counts: E[N] E[X^2].
double variance_aggregate_poisson(double lambda, const Moments& x);
// E[N] (Var(X) + phi E[X]^2).
double variance_aggregate_phi_form(double e_n, double phi, const Moments& x);

double cov_ns(const FrequencyModel& freq, const SeverityModel& sev, double t, CrossCheck check = kDefaultCrossCheck);
double cov_xs(const SeverityModel& sev, double t);
double cor_xs(const FrequencyModel& freq, const SeverityModel& sev, double t);

double cor_ns(const FrequencyModel& freq, const SeverityModel& sev, double t, CrossCheck check = kDefaultCrossCheck);
// E[X] sqrt(Var(N) / Var(S)).
double cor_ns_direct(double e_n, double var_n, const Moments& x);
// sqrt(phi) E[X] / sqrt(Var(X) + phi E[X]^2); E[N] cancels.
double cor_ns_phi_form(double phi, const Moments& x);

// rho^2 / (phi (1 - rho^2)), which equals E[X]^2/Var(X) when rho and phi
// come from the same compound model.
double j_equation(double rho, double phi);

RiskSummary summarize(const FrequencyModel& freq, const SeverityModel& sev, double t,
                      CrossCheck check = kDefaultCrossCheck);

// Parameters for one row of the family table. `mu` is the scale driver
// mu_T; `shape` is theta / sigma / xi as for SeverityModel.
struct Table1Params {
    double mu = 1.0;
    double shape = 1.0;
};

// Summary for a single year with rate `lambda` and a trend-free severity.
RiskSummary table1_row(SeverityFamily family, Table1Params params, double t, double lambda);

// The table's symbolic cor(N,S) column, evaluated independently of the
// moment-based route: sqrt(3)/2, theta/sqrt(theta+theta^2), sqrt(2)/2,
// exp(-sigma^2/2), sqrt((1-2xi)/(2-2xi)).
double table1_correlation(SeverityFamily family, double shape);

}  // namespace randsum
