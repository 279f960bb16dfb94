#include "randsum/cli.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <boost/math/distributions/normal.hpp>

#include "randsum/error.hpp"
#include "randsum/estimate.hpp"
#include "randsum/io.hpp"
#include "randsum/riskmodel.hpp"
#include "randsum/simulate.hpp"
#include "randsum/verify.hpp"

namespace randsum::cli {

namespace {

using nlohmann::json;

struct Options {
    bool json_report = false;

    std::string config_path;
    std::string out_path;

    bool table1 = false;
    double mu = 1.0;
    double lambda = 1.0;
    double theta = 1.0;
    double sigma_ln = 1.0;
    double xi = 0.0;

    std::string input_path;
    std::optional<std::size_t> window;
    std::optional<double> level;

    std::optional<std::size_t> replicates;
    double sigma = 4.0;
    std::optional<int> year;
    unsigned threads = 1;
};

json optional_json(const std::optional<double>& x) {
    return x ? json(*x) : json(nullptr);
}

std::string fixed(double x, int digits = 6) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.*f", digits, x);
    return buffer;
}

std::optional<std::uint64_t> seed_from_env() {
    const char* raw = std::getenv("RANDSUM_SEED");
    if (!raw || !*raw) return std::nullopt;
    std::uint64_t value = 0;
    const std::string_view text(raw);
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw ConfigError("RANDSUM_SEED", "expected a non-negative integer");
    }
    return value;
}

RunConfig load_config(const Options& opt, RunMode mode) {
    RunConfig config = opt.config_path.empty() ? RunConfig{} : parse_config(opt.config_path);
    if (config.mode && *config.mode != mode) {
        throw ConfigError("mode", "config is for '" + std::string(to_string(*config.mode)) + "', not '" +
                                      std::string(to_string(mode)) + "'");
    }
    config.mode = mode;
    if (!config.seed) config.seed = seed_from_env();
    if (!opt.out_path.empty()) config.output = opt.out_path;
    return config;
}

// Writes through `writer` to the configured output file, or to `out` when
// none is set. Returns true when data went to `out`.
template <typename Writer>
bool emit_data(const std::optional<std::string>& path, std::ostream& out, Writer&& writer) {
    if (!path) {
        writer(out);
        return true;
    }
    std::ofstream file(*path, std::ios::binary);
    if (!file) throw std::runtime_error(*path + ": cannot open file for writing");
    writer(file);
    file.flush();
    if (!file) throw std::runtime_error(*path + ": write failed");
    return false;
}

// ---- theory ---------------------------------------------------------------

json summary_json(const RiskSummary& s) {
    return {{"t", s.t},           {"e_n", s.e_n},       {"e_x", s.e_x},     {"e_s", s.e_s},
            {"var_n", s.var_n},   {"var_x", s.var_x},   {"var_s", s.var_s}, {"cov_ns", s.cov_ns},
            {"cor_ns", s.cor_ns}, {"cov_xs", s.cov_xs}, {"cor_xs", s.cor_xs}, {"phi", s.phi},
            {"j_squared", s.j_squared}};
}

ExitReport run_table1(const Options& opt) {
    struct Row {
        SeverityFamily family;
        double shape;
        const char* shape_name;
    };
    const Row rows[] = {{SeverityFamily::Uniform, 0.0, ""},
                        {SeverityFamily::Gamma, opt.theta, "theta"},
                        {SeverityFamily::Exponential, 0.0, ""},
                        {SeverityFamily::LogNormal, opt.sigma_ln, "sigma"},
                        {SeverityFamily::GPD, opt.xi, "xi"}};

    ExitReport report;
    report.payload["command"] = "theory";
    report.payload["table1"] = true;
    report.payload["parameters"] = {
        {"mu", opt.mu}, {"lambda", opt.lambda}, {"theta", opt.theta}, {"sigma", opt.sigma_ln}, {"xi", opt.xi}};
    json out_rows = json::array();

    std::ostringstream table;
    table << "family        E[S|T]        Var(S|T)      cor(N,S)    J^2\n";
    for (const auto& row : rows) {
        const auto s = table1_row(row.family, {opt.mu, row.shape}, 1.0, opt.lambda);
        json j = summary_json(s);
        j["family"] = std::string(to_string(row.family));
        if (*row.shape_name) j[row.shape_name] = row.shape;
        j["cor_ns_symbolic"] = table1_correlation(row.family, row.shape);
        out_rows.push_back(j);

        char line[160];
        std::snprintf(line, sizeof line, "%-12s  %-12.6g  %-12.6g  %-10.6f  %.6g\n",
                      std::string(to_string(row.family)).c_str(), s.e_s, s.var_s, s.cor_ns, s.j_squared);
        table << line;
    }
    report.payload["rows"] = out_rows;
    report.summary = table.str();
    return report;
}

ExitReport run_theory(const Options& opt, std::ostream& out, bool& data_on_out) {
    if (opt.table1) return run_table1(opt);
    if (opt.config_path.empty()) throw ConfigError("", "theory needs --config or --table1");
    const auto config = load_config(opt, RunMode::Theory);
    if (!config.freq) throw ConfigError("frequency", "missing required field");
    if (!config.sev) throw ConfigError("severity", "missing required field");

    std::vector<RiskSummary> rows;
    for (std::size_t t = 1; t <= config.years->size(); ++t) {
        rows.push_back(summarize(*config.freq, *config.sev, static_cast<double>(t), CrossCheck::On));
    }
    data_on_out = emit_data(config.output, out,
                            [&](std::ostream& os) { write_summary_csv(rows, config.years->start, os); });

    ExitReport report;
    report.payload["command"] = "theory";
    report.payload["config"] = to_json(config);
    report.payload["years"] = rows.size();
    report.payload["first"] = summary_json(rows.front());
    report.payload["last"] = summary_json(rows.back());
    std::ostringstream text;
    text << "theory: " << rows.size() << " years; cor(N,S) " << fixed(rows.front().cor_ns) << " -> "
         << fixed(rows.back().cor_ns) << ", J^2 " << fixed(rows.front().j_squared) << "\n";
    report.summary = text.str();
    return report;
}

// ---- simulate -------------------------------------------------------------

ExitReport run_simulate(const Options& opt, std::ostream& out, bool& data_on_out) {
    const auto config = load_config(opt, RunMode::Simulate);
    const auto sim = config.simulation();
    const auto catalog = simulate_catalog(sim);
    data_on_out = emit_data(config.output, out, [&](std::ostream& os) { write_events_csv(catalog, os); });

    ExitReport report;
    report.payload["command"] = "simulate";
    report.payload["config"] = to_json(config);
    report.payload["seed"] = sim.seed;
    report.payload["years"] = catalog.year_count();
    report.payload["events"] = catalog.total_events();
    const auto counts = catalog.counts();
    std::size_t empty_years = 0;
    for (auto c : counts) empty_years += c == 0 ? 1 : 0;
    report.payload["empty_years"] = empty_years;
    if (counts.front() == 0 || counts.back() == 0) {
        report.payload["note"] = "leading or trailing years without events are not recoverable from the events CSV";
    }
    report.summary = "simulate: " + std::to_string(catalog.total_events()) + " events over " +
                     std::to_string(catalog.year_count()) + " years (seed " + std::to_string(sim.seed) + ")\n";
    return report;
}

// ---- analyze --------------------------------------------------------------

ExitReport run_analyze(const Options& opt, std::ostream& out, bool& data_on_out) {
    auto config = load_config(opt, RunMode::Analyze);
    if (!opt.input_path.empty()) config.input = opt.input_path;
    if (opt.window) config.window = opt.window;
    if (opt.level) config.ci_level = *opt.level;
    if (!config.input) throw ConfigError("input", "missing (use --input)");
    if (config.window && *config.window < 3) throw ConfigError("window", "must be >= 3");
    if (!(config.ci_level > 0.0 && config.ci_level < 1.0)) throw ConfigError("ci_level", "must lie in (0, 1)");

    const auto catalog = read_events_csv(*config.input);
    if (config.window && *config.window > catalog.year_count()) {
        throw ConfigError("window", "exceeds the catalog length of " + std::to_string(catalog.year_count()) + " years");
    }
    const auto series = long_run_series(catalog, config.ci_level, config.window);
    data_on_out = emit_data(config.output, out, [&](std::ostream& os) { write_series_csv(series, os); });

    ExitReport report;
    report.payload["command"] = "analyze";
    report.payload["config"] = to_json(config);
    report.payload["years"] = catalog.year_count();
    report.payload["events"] = catalog.total_events();
    const auto& last = series.points.back();
    report.payload["terminal"] = {{"year", last.year},
                                  {"e_n", last.e_n},
                                  {"e_s", last.e_s},
                                  {"e_x", optional_json(last.e_x)},
                                  {"phi", optional_json(last.phi)},
                                  {"rho", optional_json(last.rho)},
                                  {"rho_lo", optional_json(last.rho_lo)},
                                  {"rho_hi", optional_json(last.rho_hi)},
                                  {"j2phi", optional_json(last.j2phi)}};
    report.payload["correlation"] = config.window ? "moving window of " + std::to_string(*config.window) + " years"
                                                  : std::string("expanding");
    report.payload["ci_note"] = "approximate Fisher-z interval; assumes i.i.d. bivariate-normal (N, S)";

    std::optional<double> nx;
    try {
        nx = nx_independence(catalog);
        report.payload["nx_independence"] = optional_json(nx);
    } catch (const EstimationError& e) {
        report.payload["nx_independence"] = nullptr;
        report.payload["nx_independence_note"] = e.what();
    }

    std::optional<double> mailier;
    try {
        mailier = mailier_index(catalog.counts());
        report.payload["mailier_index"] = *mailier;
    } catch (const EstimationError& e) {
        report.payload["mailier_index"] = nullptr;
        report.payload["mailier_index_note"] = e.what();
    }

    json seasons = json::array();
    std::size_t active = 0;
    if (catalog.year_count() >= 2) {
        const auto activity = season_activity(catalog.counts());
        for (std::size_t i = 0; i < activity.size(); ++i) {
            active += activity[i] == SeasonActivity::Active ? 1 : 0;
            seasons.push_back({{"year", catalog.first_year() + static_cast<int>(i)},
                               {"activity", std::string(to_string(activity[i]))}});
        }
    }
    report.payload["season_activity"] = seasons;
    report.payload["active_years"] = active;

    std::ostringstream text;
    text << "analyze: " << catalog.year_count() << " years, " << catalog.total_events() << " events\n";
    text << "  E[N] " << fixed(last.e_n, 4) << "  E[S] " << fixed(last.e_s, 4);
    if (last.e_x) text << "  E[X] " << fixed(*last.e_x, 4);
    text << "\n";
    if (last.phi) text << "  phi " << fixed(*last.phi, 4);
    if (last.j2phi) text << "  J^2*phi " << fixed(*last.j2phi, 4);
    text << "\n";
    if (last.rho) {
        text << "  rho(N,S) " << fixed(*last.rho, 4);
        if (last.rho_lo) text << "  approx " << fixed(series.ci_level * 100.0, 1) << "% CI [" << fixed(*last.rho_lo, 4)
                              << ", " << fixed(*last.rho_hi, 4) << "]";
        text << "\n";
    }
    text << "  N-X correlation " << (nx ? fixed(*nx, 4) : std::string("undefined")) << "\n";
    text << "  Mailier index " << (mailier ? fixed(*mailier, 4) : std::string("undefined")) << ", active seasons "
         << active << "\n";
    report.summary = text.str();
    return report;
}

// ---- verify ---------------------------------------------------------------

ExitReport run_verify(const Options& opt) {
    auto config = load_config(opt, RunMode::Verify);
    if (opt.replicates) config.replicates = *opt.replicates;
    if (opt.year) config.fixed_year = *opt.year;
    if (!(opt.sigma > 0.0)) throw ConfigError("sigma", "must be positive");
    auto sim = config.simulation();
    if (sim.replicates < 2) throw ConfigError("replicates", "verify needs at least 2 replicates (use --replicates)");
    const int year = config.fixed_year.value_or(config.years->start);
    if (year < config.years->start || year > config.years->end) {
        throw ConfigError("fixed_year", "must lie inside years.start..years.end");
    }
    const double t = config.years->offset(year);
    const auto result = verify_fixed_year(sim, t, opt.sigma, opt.threads);

    const boost::math::normal_distribution<double> standard;
    const double per_check = 2.0 * boost::math::cdf(boost::math::complement(standard, opt.sigma));
    const double k = static_cast<double>(result.checks.size());

    ExitReport report;
    report.status = result.all_passed() ? ExitStatus::Ok : ExitStatus::VerificationFailure;
    report.payload["command"] = "verify";
    report.payload["config"] = to_json(config);
    report.payload["seed"] = sim.seed;
    report.payload["year"] = year;
    report.payload["t"] = t;
    report.payload["replicates"] = result.replicates;
    report.payload["tolerance_sigma"] = opt.sigma;
    report.payload["bonferroni_note"] =
        std::to_string(result.checks.size()) + " checks at " + fixed(opt.sigma, 2) +
        " standard errors; the chance of any false failure is at most " + fixed(k * per_check, 6);
    json checks = json::array();
    std::ostringstream text;
    text << "verify: year " << year << " (t=" << t << "), " << result.replicates << " replicates, seed " << sim.seed
         << ", tolerance " << opt.sigma << " SE\n";
    for (const auto& c : result.checks) {
        checks.push_back({{"name", c.name},
                          {"estimate", c.estimate},
                          {"target", c.target},
                          {"std_error", c.std_error},
                          {"z", c.z_score()},
                          {"pass", c.passed()}});
        char line[256];
        std::snprintf(line, sizeof line, "  [%s] %-58s est %-14.8g target %-14.8g se %-10.3g z %+.2f\n",
                      c.passed() ? "pass" : "FAIL", c.name.c_str(), c.estimate, c.target, c.std_error, c.z_score());
        text << line;
    }
    report.payload["checks"] = checks;
    text << (result.all_passed() ? "all checks passed\n" : "verification FAILED\n");
    report.summary = text.str();
    return report;
}

void finish(ExitReport& report, const Options& opt, std::ostream& report_stream) {
    report.payload["status"] = report.status == ExitStatus::Ok                    ? "ok"
                               : report.status == ExitStatus::VerificationFailure ? "verification_failure"
                                                                                  : "input_error";
    if (opt.json_report) {
        report_stream << report.payload.dump(2) << '\n';
    } else {
        report_stream << report.summary;
    }
}

}  // namespace

ExitReport run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options opt;
    CLI::App app{"Aggregate storm risk: closed-form theory, simulation, catalog analysis and Monte Carlo checks",
                 "randsum"};
    app.require_subcommand(1);
    app.add_flag("--json", opt.json_report, "Print the machine-readable JSON report");

    auto* theory = app.add_subcommand("theory", "Closed-form summaries per year, or the family table");
    theory->add_option("--config", opt.config_path, "Run configuration (JSON)");
    theory->add_option("--out", opt.out_path, "Output CSV");
    theory->add_flag("--table1", opt.table1, "Print one summary row per severity family");
    theory->add_option("--mu", opt.mu, "Scale driver mu_T for --table1")->capture_default_str();
    theory->add_option("--lambda", opt.lambda, "Poisson rate for --table1")->capture_default_str();
    theory->add_option("--theta", opt.theta, "Gamma shape for --table1")->capture_default_str();
    theory->add_option("--sigma", opt.sigma_ln, "Log-normal sigma for --table1")->capture_default_str();
    theory->add_option("--xi", opt.xi, "GPD shape for --table1")->capture_default_str();

    auto* simulate = app.add_subcommand("simulate", "Simulate an event catalog");
    simulate->add_option("--config", opt.config_path, "Run configuration (JSON)")->required();
    simulate->add_option("--out", opt.out_path, "Output events CSV");

    auto* analyze = app.add_subcommand("analyze", "Long-run estimators and diagnostics for an events CSV");
    analyze->add_option("--input", opt.input_path, "Events CSV (year,intensity)");
    analyze->add_option("--config", opt.config_path, "Run configuration (JSON)");
    analyze->add_option("--window", opt.window, "Trailing correlation window in years (default: expanding)");
    analyze->add_option("--level", opt.level, "Confidence level for correlation intervals");
    analyze->add_option("--out", opt.out_path, "Output series CSV");

    auto* verify = app.add_subcommand("verify", "Fixed-year Monte Carlo against the closed forms");
    verify->add_option("--config", opt.config_path, "Run configuration (JSON)")->required();
    verify->add_option("--replicates", opt.replicates, "Number of replicates");
    verify->add_option("--sigma", opt.sigma, "Tolerance in standard errors")->capture_default_str();
    verify->add_option("--year", opt.year, "Calendar year to verify (default: first year)");
    verify->add_option("--threads", opt.threads, "Worker threads (0 = all cores)")->capture_default_str();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return {};
    } catch (const CLI::ParseError& e) {
        ExitReport report;
        report.status = ExitStatus::InputError;
        report.summary = e.what();
        report.payload = {{"status", "input_error"}, {"error", e.what()}};
        err << "error: " << e.what() << "\n\n" << app.help();
        return report;
    }

    ExitReport report;
    bool data_on_out = false;
    try {
        if (theory->parsed()) {
            report = run_theory(opt, out, data_on_out);
        } else if (simulate->parsed()) {
            report = run_simulate(opt, out, data_on_out);
        } else if (analyze->parsed()) {
            report = run_analyze(opt, out, data_on_out);
        } else {
            report = run_verify(opt);
        }
    } catch (const std::exception& e) {
        report = {};
        report.status = ExitStatus::InputError;
        report.summary = std::string("error: ") + e.what() + "\n";
        report.payload = {{"error", e.what()}};
        finish(report, opt, err);
        return report;
    }
    finish(report, opt, data_on_out ? err : out);
    return report;
}

}  // namespace randsum::cli
