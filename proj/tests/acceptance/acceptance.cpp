// Acceptance runner: one PASS/FAIL line per criterion.
//
//   acceptance                 run everything
//   acceptance --criterion 4   run one
//
// Exit status is non-zero if any selected criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "oracles.hpp"
#include "randsum/cli.hpp"
#include "randsum/error.hpp"
#include "randsum/estimate.hpp"
#include "randsum/io.hpp"
#include "randsum/riskmodel.hpp"
#include "randsum/sample_stats.hpp"
#include "randsum/simulate.hpp"
#include "randsum/verify.hpp"

using namespace randsum;
using randsum::testing::kAllFamilies;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* pattern, auto... args) {
    char buffer[512];
    std::snprintf(buffer, sizeof buffer, pattern, args...);
    return buffer;
}

double rel_err(double a, double b) {
    const double scale = std::max({std::fabs(a), std::fabs(b), 1e-300});
    return std::fabs(a - b) / scale;
}

// ---- 1: algebraic identities ------------------------------------------------

Outcome algebraic_identities() {
    constexpr double tol = 1e-12;
    constexpr int instances = 1000;
    RandomStream rng(20240601);
    double worst = 0.0;
    std::string worst_name;
    const auto track = [&](const char* name, double a, double b) {
        const double e = rel_err(a, b);
        if (e > worst) {
            worst = e;
            worst_name = name;
        }
    };

    std::size_t cutoffs = 0;
    for (int i = 0; i < instances; ++i) {
        const auto family = kAllFamilies[i % 5];
        const double years = 30.0;
        const auto sev = randsum::testing::random_severity(family, rng, years);
        const double a0 = 0.2 + 30.0 * rng.uniform();
        const FrequencyModel freq(a0, a0 * (-0.02 + 0.04 * rng.uniform()), RateLink::Identity, {1.0, years});
        const double t = 1.0 + (years - 1.0) * rng.uniform();
        const double lambda = freq.rate(t);
        const auto m = sev.moments(t);

        // Wald against the moments as written per family.
        track("Wald", expected_aggregate(freq, sev, t), lambda * m.mean);

        // Var(S): Blackwell-Girshick, Poisson shortcut and phi-form with phi = 1.
        const double bg = blackwell_girshick(lambda, lambda, m);
        track("BG vs Poisson shortcut", bg, variance_aggregate_poisson(lambda, m));
        track("BG vs phi-form", bg, variance_aggregate_phi_form(lambda, 1.0, m));
        track("BG vs model", bg, variance_aggregate(freq, sev, t, CrossCheck::Off));

        // Overdispersed counts exercise the phi-form away from phi = 1.
        const double phi = 0.2 + 3.0 * rng.uniform();
        track("BG vs phi-form (phi != 1)", blackwell_girshick(lambda, phi * lambda, m),
              variance_aggregate_phi_form(lambda, phi, m));

        // cov(N,S) = E[X] Var(N) = phi E[S].
        const double cov = cov_ns(freq, sev, t, CrossCheck::Off);
        track("cov(N,S) = E[X]Var(N)", cov, m.mean * lambda);
        track("cov(N,S) = phi E[S]", cov, freq.dispersion() * expected_aggregate(freq, sev, t));

        // J-equation round-trip, at phi = 1 and at the overdispersed phi.
        track("J-equation", j_equation(cor_ns(freq, sev, t, CrossCheck::Off), 1.0), sev.j_squared());
        track("J-equation (phi != 1)", j_equation(cor_ns_phi_form(phi, m), phi), sev.j_squared());
        track("cor direct vs phi-form", cor_ns_direct(phi * lambda, phi * phi * lambda, m), cor_ns_phi_form(phi, m));

        // Long-run Wald at every cutoff of a short simulated catalog.
        const auto catalog = simulate_catalog({freq, sev, YearRange{1, static_cast<int>(years)}, 7000u + i});
        for (const auto& p : long_run_series(catalog).points) {
            if (!p.e_x) continue;
            track("long-run Wald", p.e_n * *p.e_x, p.e_s);
            ++cutoffs;
        }
    }
    return {worst <= tol, fmt("%d instances, %zu long-run cutoffs; max relative error %.2e (%s), tolerance %.0e",
                              instances, cutoffs, worst, worst_name.c_str(), tol)};
}

// ---- 2: family table -----------------------------------------------------------

Outcome family_table() {
    constexpr double tol = 1e-12;
    struct Case {
        std::vector<std::string> args;
        double theta, sigma, xi;
    };
    const Case cases[] = {
        {{"--json", "theory", "--table1"}, 1.0, 1.0, 0.0},
        {{"--json", "theory", "--table1", "--theta", "2.5", "--sigma", "0.7", "--xi", "0.3", "--mu", "4",
          "--lambda", "12"},
         2.5, 0.7, 0.3},
        {{"--json", "theory", "--table1", "--theta", "0.4", "--sigma", "1.3", "--xi", "-0.5"}, 0.4, 1.3, -0.5},
    };
    double worst = 0.0;
    for (const auto& c : cases) {
        std::ostringstream out, err;
        const auto report = cli::run(c.args, out, err);
        if (report.status != cli::ExitStatus::Ok) return {false, "theory --table1 failed: " + err.str()};
        const auto json = nlohmann::json::parse(out.str());
        const auto& rows = json["rows"];
        if (rows.size() != 5) return {false, "expected 5 rows"};
        // Columns written out from the symbolic forms.
        const double cor[] = {std::sqrt(3.0) / 2.0, c.theta / std::sqrt(c.theta + c.theta * c.theta),
                              std::sqrt(2.0) / 2.0, std::exp(-c.sigma * c.sigma / 2.0),
                              std::sqrt((1.0 - 2.0 * c.xi) / (2.0 - 2.0 * c.xi))};
        const double j2[] = {3.0, c.theta, 1.0, 1.0 / (std::exp(c.sigma * c.sigma) - 1.0), 1.0 - 2.0 * c.xi};
        for (std::size_t i = 0; i < 5; ++i) {
            worst = std::max(worst, rel_err(rows[i]["cor_ns"].get<double>(), cor[i]));
            worst = std::max(worst, rel_err(rows[i]["cor_ns_symbolic"].get<double>(), cor[i]));
            worst = std::max(worst, rel_err(rows[i]["j_squared"].get<double>(), j2[i]));
        }
    }
    return {worst <= tol, fmt("3 parameter sets x 5 families; max relative error %.2e, tolerance %.0e", worst, tol)};
}

// ---- 3: Monte Carlo oracle -------------------------------------------------------

Outcome monte_carlo_oracle() {
    constexpr std::size_t replicates = 1'000'000;
    constexpr double sigma = 4.0;
    const Horizon h{1.0, 1.0};
    const FrequencyModel freq(20.0, 0.0, RateLink::Identity, h);
    const SeverityModel models[] = {
        SeverityModel::uniform({10.0, 0.0}, h),
        SeverityModel::gamma({3.0, 0.0}, 2.0, h),
        SeverityModel::exponential({2.0, 0.0}, h),
        SeverityModel::lognormal({1.0, 0.0}, 0.5, h),
        SeverityModel::gpd({0.5, 0.0}, 0.1, h),
    };
    bool pass = true;
    double worst_z = 0.0;
    std::string worst;
    std::size_t checks = 0;
    std::uint64_t seed = 1;
    for (const auto& sev : models) {
        SimulationConfig config{freq, sev, YearRange{1, 1}, seed++, replicates};
        const auto report = verify_fixed_year(config, 1.0, sigma, 0);
        for (const auto& c : report.checks) {
            ++checks;
            pass = pass && c.passed();
            if (std::fabs(c.z_score()) > std::fabs(worst_z)) {
                worst_z = c.z_score();
                worst = std::string(to_string(sev.family())) + " " + c.name;
            }
            std::printf("    %-12s %-58s z %+.2f\n", std::string(to_string(sev.family())).c_str(), c.name.c_str(),
                        c.z_score());
        }
    }
    return {pass, fmt("%zu checks over 5 families at %zu replicates; largest |z| %.2f (%s), tolerance %.0f SE", checks,
                      replicates, std::fabs(worst_z), worst.c_str(), sigma)};
}

// ---- 4: simulated GPD model ------------------------------------------------------

Outcome simulated_gpd() {
    constexpr int replicates = 500;
    constexpr int years = 60;
    constexpr double xi = 0.2;
    const double j2phi_target = (1.0 - 2.0 * xi) * (1.0 - 2.0 * xi);  // 0.36
    const double rho_target = std::sqrt((1.0 - 2.0 * xi) / (2.0 - 2.0 * xi));
    const Horizon h{1.0, years};
    // Counts near 29.5 a year and mean intensity near 28, both with a mild trend.
    const FrequencyModel freq(28.0, 0.05, RateLink::Identity, h);
    const auto sev = SeverityModel::gpd({0.045, 0.00002}, xi, h);

    const double z_target = std::atanh(rho_target);
    const double half_width = 1.959963984540054 / std::sqrt(years - 3.0);
    double j2phi_sum = 0.0;
    int j2phi_count = 0;
    int inside = 0;
    for (int r = 0; r < replicates; ++r) {
        const auto catalog = simulate_catalog({freq, sev, YearRange{1, years}, 500000u + r});
        const auto& last = long_run_series(catalog).points.back();
        if (last.j2phi) {
            j2phi_sum += *last.j2phi;
            ++j2phi_count;
        }
        if (last.rho && std::fabs(std::atanh(*last.rho) - z_target) <= half_width) ++inside;
    }
    const double j2phi_mean = j2phi_sum / j2phi_count;
    const double share = static_cast<double>(inside) / replicates;
    const bool j2phi_ok = std::fabs(j2phi_mean - j2phi_target) <= 0.05;
    const bool rho_ok = share >= 0.90;
    return {j2phi_ok && rho_ok,
            fmt("replicate-mean terminal j2phi %.4f vs (1-2xi)^2 = %.2f +/- 0.05: %s "
                "[for reference 1-2xi = %.2f, off by %.4f]; terminal rho in 95%% Fisher band of %.4f: %.1f%% "
                "(need >= 90%%): %s",
                j2phi_mean, j2phi_target, j2phi_ok ? "ok" : "FAIL", 1.0 - 2.0 * xi, j2phi_mean - (1.0 - 2.0 * xi),
                rho_target, 100.0 * share, rho_ok ? "ok" : "FAIL")};
}

// ---- 5: Fisher interval coverage ---------------------------------------------------

Outcome fisher_coverage() {
    constexpr int trials = 2000;
    constexpr std::size_t n = 50;
    constexpr double rho = 0.6;
    int covered = 0;
    for (int trial = 0; trial < trials; ++trial) {
        RandomStream rng(77, StreamDomain::Auxiliary, static_cast<std::uint64_t>(trial));
        std::vector<double> x(n), y(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double a = rng.standard_normal();
            const double b = rng.standard_normal();
            x[i] = a;
            y[i] = rho * a + std::sqrt(1.0 - rho * rho) * b;
        }
        const auto ci = fisher_interval(*pearson(x, y), n, 0.95);
        covered += ci.lo < rho && rho < ci.hi ? 1 : 0;
    }
    const double coverage = static_cast<double>(covered) / trials;
    return {coverage >= 0.93 && coverage <= 0.97,
            fmt("%d trials, rho %.1f, n %zu: coverage %.2f%% (need 93%% to 97%%)", trials, rho, n, 100.0 * coverage)};
}

// ---- 6: dispersion convergence -------------------------------------------------------

Outcome dispersion_convergence() {
    constexpr int years = 10000;
    const Horizon h{1.0, years};
    const auto catalog = simulate_catalog({FrequencyModel(30.0, 0.0, RateLink::Identity, h),
                                           SeverityModel::exponential({26.7, 0.0}, h), YearRange{1, years}, 606});
    const double phi = *long_run_series(catalog).points.back().phi;
    const double mailier = mailier_index(catalog.counts());
    const bool ok = std::fabs(phi - 1.0) <= 0.05 && std::fabs(mailier) <= 0.05;
    return {ok, fmt("%d-year Poisson(30) catalog: terminal phi %.4f (1 +/- 0.05), Mailier index %.4f (0 +/- 0.05)",
                    years, phi, mailier)};
}

// ---- 7: independence diagnostic -------------------------------------------------------

Outcome independence_diagnostic() {
    constexpr int replicates = 200;
    constexpr int years = 500;
    const Horizon h{1.0, years};
    const FrequencyModel freq(29.5, 0.0, RateLink::Identity, h);
    const SeverityModel models[] = {
        SeverityModel::uniform({53.4, 0.0}, h),
        SeverityModel::gamma({13.35, 0.0}, 2.0, h),
        SeverityModel::exponential({26.7, 0.0}, h),
        SeverityModel::lognormal({3.16, 0.0}, 0.5, h),
        SeverityModel::gpd({0.03, 0.0}, 0.2, h),
    };
    int small = 0;
    double worst = 0.0;
    for (int r = 0; r < replicates; ++r) {
        const auto rho = nx_independence(simulate_catalog({freq, models[r % 5], YearRange{1, years}, 70000u + r}));
        small += rho && std::fabs(*rho) < 0.1 ? 1 : 0;
        if (rho) worst = std::max(worst, std::fabs(*rho));
    }
    const double share = static_cast<double>(small) / replicates;
    return {share >= 0.95,
            fmt("%d replicates x %d years across all families: |rho| < 0.1 in %.1f%% (need >= 95%%), max |rho| %.3f; "
                "the source climate-model data showed 0.1613",
                replicates, years, 100.0 * share, worst)};
}

// ---- 8: I/O round trip ------------------------------------------------------------------

Outcome io_round_trip() {
    int failures = 0;
    std::string first_failure;
    const auto fail = [&](const std::string& what) {
        if (failures++ == 0) first_failure = what;
    };

    for (int i = 0; i < 50; ++i) {
        RandomStream rng(800 + i);
        const auto sev = randsum::testing::random_severity(kAllFamilies[i % 5], rng, 40.0);
        const FrequencyModel freq(0.5 + 20.0 * rng.uniform(), 0.0, RateLink::Identity, {1.0, 40.0});
        const auto catalog = simulate_catalog({freq, sev, YearRange{1900 + i, 1939 + i}, 900u + i});
        if (catalog.total_events() == 0) continue;

        std::stringstream events;
        write_events_csv(catalog, events);
        std::istringstream events_in(events.str());
        if (parse_events_csv(events_in).events() != catalog.events()) fail("events CSV mismatch");

        const auto series = long_run_series(catalog);
        std::stringstream text;
        write_series_csv(series, text);
        std::istringstream series_in(text.str());
        const auto back = parse_series_csv(series_in);
        bool same = back.points.size() == series.points.size();
        for (std::size_t k = 0; same && k < back.points.size(); ++k) {
            const auto& a = series.points[k];
            const auto& b = back.points[k];
            same = a.year == b.year && a.e_n == b.e_n && a.e_s == b.e_s && a.e_x == b.e_x && a.phi == b.phi &&
                   a.rho == b.rho && a.rho_lo == b.rho_lo && a.rho_hi == b.rho_hi && a.j2phi == b.j2phi;
        }
        if (!same) fail("series CSV mismatch");
    }

    // Malformed inputs with the line the error must name.
    const std::pair<const char*, std::size_t> malformed[] = {
        {"year,intensity\n2040,-3\n", 2},     {"year;intensity\n2040,3\n", 1},
        {"year,intensity\n2040,3\n2041\n", 3}, {"year,intensity\n2040,3\n2041,x\n", 3},
        {"year,intensity\n20.5,3\n", 2},      {"year,intensity\n2040,3,4\n", 2},
        {"year,intensity\n2040,nan\n", 2},    {"year,intensity\n2040,1e999\n", 2},
    };
    for (const auto& [text, line] : malformed) {
        std::istringstream in(text);
        try {
            parse_events_csv(in);
            fail(std::string("accepted malformed input: ") + text);
        } catch (const ParseError& e) {
            if (e.line() != line) fail("wrong line for: " + std::string(text));
        }
    }

    // Random corruption: every outcome is a catalog or a located ParseError.
    const std::string base = "year,intensity\n2040,26.7\n2040,30.1\n2041,22.0\n";
    const std::string alphabet = "0123456789,.-e \n\r\"x";
    RandomStream rng(88);
    int mutants = 0;
    for (; mutants < 5000; ++mutants) {
        std::string text = base;
        for (int e = 0; e < 3; ++e) {
            const auto pos = static_cast<std::size_t>(rng.uniform() * text.size());
            text[pos] = alphabet[static_cast<std::size_t>(rng.uniform() * alphabet.size())];
        }
        std::istringstream in(text);
        try {
            parse_events_csv(in);
        } catch (const ParseError&) {
        } catch (const std::exception& e) {
            fail(std::string("unexpected exception: ") + e.what());
        }
    }
    return {failures == 0, failures == 0 ? fmt("50 catalog and series round trips exact; %zu malformed inputs located; "
                                                "%d corrupted inputs handled",
                                                std::size(malformed), mutants)
                                         : fmt("%d failures, first: %s", failures, first_failure.c_str())};
}

struct Criterion {
    int id;
    const char* title;
    double budget_seconds;  // 0 = none
    std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acceptance criteria"};
    std::vector<int> selected;
    app.add_option("--criterion", selected, "Criterion number (repeatable; default all)")->check(CLI::Range(1, 8));
    CLI11_PARSE(app, argc, argv);

    const std::vector<Criterion> criteria = {
        {1, "algebraic identities", 1.0, algebraic_identities},
        {2, "family table", 1.0, family_table},
        {3, "Monte Carlo oracle", 0.0, monte_carlo_oracle},
        {4, "simulated GPD model", 60.0, simulated_gpd},
        {5, "Fisher interval coverage", 10.0, fisher_coverage},
        {6, "dispersion convergence", 5.0, dispersion_convergence},
        {7, "independence diagnostic", 0.0, independence_diagnostic},
        {8, "I/O round trip", 0.0, io_round_trip},
    };

    bool all = true;
    for (const auto& c : criteria) {
        if (!selected.empty() && std::find(selected.begin(), selected.end(), c.id) == selected.end()) continue;
        const auto start = std::chrono::steady_clock::now();
        Outcome outcome;
        try {
            outcome = c.run();
        } catch (const std::exception& e) {
            outcome = {false, std::string("exception: ") + e.what()};
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_time = c.budget_seconds == 0.0 || seconds < c.budget_seconds;
        const bool pass = outcome.pass && in_time;
        all = all && pass;
        std::string timing = fmt("%.2f s", seconds);
        if (c.budget_seconds > 0.0) timing += fmt(" (budget %.0f s%s)", c.budget_seconds, in_time ? "" : ", exceeded");
        std::printf("[%s] criterion %d, %s: %s; %s\n", pass ? "PASS" : "FAIL", c.id, c.title, outcome.detail.c_str(),
                    timing.c_str());
        std::fflush(stdout);
    }
    return all ? 0 : 1;
}
