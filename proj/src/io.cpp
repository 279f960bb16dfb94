#include "randsum/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "randsum/error.hpp"

namespace randsum {

namespace {

using nlohmann::json;

// ---- CSV helpers ----------------------------------------------------------

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    for (;;) {
        const auto comma = line.find(',', start);
        fields.push_back(trim(line.substr(start, comma == std::string_view::npos ? comma : comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return fields;
}

template <typename T>
std::optional<T> parse_number(std::string_view text) {
    T value{};
    const char* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end || text.empty()) return std::nullopt;
    return value;
}

std::string format_double(double x) {
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.17g", x);
    return buffer;
}

std::string format_optional(const std::optional<double>& x) {
    return x ? format_double(*x) : std::string();
}

// Reads lines while tracking 1-based line numbers; strips a UTF-8 BOM and CR.
class LineReader {
public:
    explicit LineReader(std::istream& in) : in_(in) {}

    bool next(std::string& line) {
        if (!std::getline(in_, line)) return false;
        ++number_;
        if (number_ == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return true;
    }

    std::size_t number() const noexcept { return number_; }

private:
    std::istream& in_;
    std::size_t number_ = 0;
};

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path.string(), 0, "cannot open file for reading");
    return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error(path.string() + ": cannot open file for writing");
    return out;
}

void finish_output(std::ofstream& out, const std::filesystem::path& path) {
    out.flush();
    if (!out) throw std::runtime_error(path.string() + ": write failed");
}

constexpr std::string_view kSeriesHeader = "t,e_n,e_s,e_x,phi,rho,rho_lo,rho_hi,j2phi";

// ---- JSON config helpers --------------------------------------------------

std::string join_path(const std::string& parent, const std::string& key) {
    return parent.empty() ? key : parent + "." + key;
}

void reject_unknown(const json& object, const std::string& path, std::initializer_list<std::string_view> allowed) {
    for (const auto& [key, value] : object.items()) {
        bool known = false;
        for (auto a : allowed) known = known || key == a;
        if (!known) throw ConfigError(join_path(path, key), "unknown field");
    }
}

const json& require_object(const json& parent, const std::string& key, const std::string& path) {
    const auto it = parent.find(key);
    if (it == parent.end()) throw ConfigError(join_path(path, key), "missing required field");
    if (!it->is_object()) throw ConfigError(join_path(path, key), "expected an object");
    return *it;
}

double get_number(const json& parent, const std::string& key, const std::string& path) {
    const auto it = parent.find(key);
    if (it == parent.end()) throw ConfigError(join_path(path, key), "missing required field");
    if (!it->is_number()) throw ConfigError(join_path(path, key), "expected a number");
    const double value = it->get<double>();
    if (!std::isfinite(value)) throw ConfigError(join_path(path, key), "expected a finite number");
    return value;
}

std::optional<double> get_optional_number(const json& parent, const std::string& key, const std::string& path) {
    if (!parent.contains(key)) return std::nullopt;
    return get_number(parent, key, path);
}

long long get_integer(const json& parent, const std::string& key, const std::string& path) {
    const auto it = parent.find(key);
    if (it == parent.end()) throw ConfigError(join_path(path, key), "missing required field");
    if (!it->is_number_integer()) throw ConfigError(join_path(path, key), "expected an integer");
    if (it->is_number_unsigned()) {
        const auto u = it->get<std::uint64_t>();
        if (u > static_cast<std::uint64_t>(std::numeric_limits<long long>::max())) {
            throw ConfigError(join_path(path, key), "integer out of range");
        }
        return static_cast<long long>(u);
    }
    return it->get<long long>();
}

std::string get_string(const json& parent, const std::string& key, const std::string& path) {
    const auto it = parent.find(key);
    if (it == parent.end()) throw ConfigError(join_path(path, key), "missing required field");
    if (!it->is_string()) throw ConfigError(join_path(path, key), "expected a string");
    return it->get<std::string>();
}

RunMode parse_mode(const std::string& name) {
    if (name == "theory") return RunMode::Theory;
    if (name == "simulate") return RunMode::Simulate;
    if (name == "analyze") return RunMode::Analyze;
    if (name == "verify") return RunMode::Verify;
    throw ConfigError("mode", "expected one of theory, simulate, analyze, verify");
}

}  // namespace

// ---- events CSV -----------------------------------------------------------

EventCatalog parse_events_csv(std::istream& in, const std::string& source) {
    LineReader reader(in);
    std::string line;
    if (!reader.next(line)) throw ParseError(source, 0, "empty file");
    {
        const auto header = split_fields(line);
        if (header.size() != 2 || header[0] != "year" || header[1] != "intensity") {
            throw ParseError(source, reader.number(), "expected header 'year,intensity'");
        }
    }

    std::vector<Event> events;
    while (reader.next(line)) {
        if (trim(line).empty()) continue;
        const auto fields = split_fields(line);
        if (fields.size() != 2) {
            throw ParseError(source, reader.number(), "expected 2 fields, found " + std::to_string(fields.size()));
        }
        const auto year = parse_number<int>(fields[0]);
        if (!year) throw ParseError(source, reader.number(), "year is not an integer: '" + std::string(fields[0]) + "'");
        const auto intensity = parse_number<double>(fields[1]);
        if (!intensity) {
            throw ParseError(source, reader.number(), "intensity is not a number: '" + std::string(fields[1]) + "'");
        }
        if (!(*intensity > 0.0) || !std::isfinite(*intensity)) {
            throw ParseError(source, reader.number(), "intensity must be positive and finite");
        }
        events.push_back({*year, *intensity});
    }
    if (events.empty()) throw ParseError(source, reader.number(), "no event rows after the header");
    return EventCatalog(std::move(events));
}

EventCatalog read_events_csv(const std::filesystem::path& path) {
    auto in = open_input(path);
    return parse_events_csv(in, path.string());
}

void write_events_csv(const EventCatalog& catalog, std::ostream& out) {
    out << "year,intensity\n";
    for (const auto& e : catalog.events()) out << e.year << ',' << format_double(e.intensity) << '\n';
}

void write_events_csv(const EventCatalog& catalog, const std::filesystem::path& path) {
    auto out = open_output(path);
    write_events_csv(catalog, out);
    finish_output(out, path);
}

// ---- series CSV -----------------------------------------------------------

void write_series_csv(const LongRunSeries& series, std::ostream& out) {
    out << kSeriesHeader << '\n';
    for (const auto& p : series.points) {
        out << p.year << ',' << format_double(p.e_n) << ',' << format_double(p.e_s) << ',' << format_optional(p.e_x)
            << ',' << format_optional(p.phi) << ',' << format_optional(p.rho) << ',' << format_optional(p.rho_lo)
            << ',' << format_optional(p.rho_hi) << ',' << format_optional(p.j2phi) << '\n';
    }
}

void write_series_csv(const LongRunSeries& series, const std::filesystem::path& path) {
    auto out = open_output(path);
    write_series_csv(series, out);
    finish_output(out, path);
}

LongRunSeries parse_series_csv(std::istream& in, const std::string& source) {
    LineReader reader(in);
    std::string line;
    if (!reader.next(line)) throw ParseError(source, 0, "empty file");
    if (trim(line) != kSeriesHeader) throw ParseError(source, 1, "expected header '" + std::string(kSeriesHeader) + "'");

    static constexpr const char* names[] = {"t", "e_n", "e_s", "e_x", "phi", "rho", "rho_lo", "rho_hi", "j2phi"};
    LongRunSeries series;
    while (reader.next(line)) {
        if (trim(line).empty()) continue;
        const auto fields = split_fields(line);
        if (fields.size() != 9) {
            throw ParseError(source, reader.number(), "expected 9 fields, found " + std::to_string(fields.size()));
        }
        const auto optional_field = [&](std::size_t i) -> std::optional<double> {
            if (fields[i].empty()) return std::nullopt;
            const auto v = parse_number<double>(fields[i]);
            if (!v) throw ParseError(source, reader.number(), std::string(names[i]) + " is not a number");
            return v;
        };
        const auto required_field = [&](std::size_t i) {
            const auto v = optional_field(i);
            if (!v) throw ParseError(source, reader.number(), std::string(names[i]) + " must not be empty");
            return *v;
        };
        LongRunPoint p;
        const auto year = parse_number<int>(fields[0]);
        if (!year) throw ParseError(source, reader.number(), "t is not an integer");
        p.year = *year;
        p.cutoff = series.points.size() + 1;
        p.e_n = required_field(1);
        p.e_s = required_field(2);
        p.e_x = optional_field(3);
        p.phi = optional_field(4);
        p.rho = optional_field(5);
        p.rho_lo = optional_field(6);
        p.rho_hi = optional_field(7);
        p.j2phi = optional_field(8);
        series.points.push_back(p);
    }
    return series;
}

LongRunSeries read_series_csv(const std::filesystem::path& path) {
    auto in = open_input(path);
    return parse_series_csv(in, path.string());
}

void write_summary_csv(const std::vector<RiskSummary>& rows, int first_year, std::ostream& out) {
    out << "year,t,e_n,e_x,e_s,var_n,var_x,var_s,cov_ns,cor_ns,cov_xs,cor_xs,phi,j_squared\n";
    for (const auto& r : rows) {
        const int year = first_year + static_cast<int>(std::lround(r.t)) - 1;
        out << year;
        for (double v : {r.t, r.e_n, r.e_x, r.e_s, r.var_n, r.var_x, r.var_s, r.cov_ns, r.cor_ns, r.cov_xs, r.cor_xs,
                         r.phi, r.j_squared}) {
            out << ',' << format_double(v);
        }
        out << '\n';
    }
}

// ---- run configuration ----------------------------------------------------

std::string_view to_string(RunMode mode) noexcept {
    switch (mode) {
        case RunMode::Theory: return "theory";
        case RunMode::Simulate: return "simulate";
        case RunMode::Analyze: return "analyze";
        case RunMode::Verify: return "verify";
    }
    return "unknown";
}

SimulationConfig RunConfig::simulation() const {
    if (!freq) throw ConfigError("frequency", "missing required field");
    if (!sev) throw ConfigError("severity", "missing required field");
    if (!years) throw ConfigError("years", "missing required field");
    if (!seed) throw ConfigError("seed", "missing (set it in the config or via RANDSUM_SEED)");
    return SimulationConfig{*freq, *sev, *years, *seed, replicates};
}

RunConfig parse_config_text(std::string_view text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("", std::string("invalid JSON: ") + e.what());
    }
    if (!root.is_object()) throw ConfigError("", "top-level value must be a JSON object");
    reject_unknown(root, "",
                   {"mode", "frequency", "severity", "years", "seed", "replicates", "fixed_year", "window", "ci_level",
                    "input", "output"});

    RunConfig config;
    if (root.contains("mode")) config.mode = parse_mode(get_string(root, "mode", ""));

    if (root.contains("years")) {
        const auto& years = require_object(root, "years", "");
        reject_unknown(years, "years", {"start", "end"});
        const auto start = get_integer(years, "start", "years");
        const auto end = get_integer(years, "end", "years");
        constexpr long long limit = 1'000'000'000;
        if (std::llabs(start) > limit || std::llabs(end) > limit) throw ConfigError("years", "year out of range");
        if (start > end) throw ConfigError("years", "start must be <= end");
        config.years = YearRange{static_cast<int>(start), static_cast<int>(end)};
    }
    const Horizon horizon{1.0, config.years ? static_cast<double>(config.years->size()) : 1.0};

    if (root.contains("frequency")) {
        if (!config.years) throw ConfigError("years", "required when a frequency model is given");
        const auto& f = require_object(root, "frequency", "");
        reject_unknown(f, "frequency", {"link", "alpha0", "alpha1"});
        const auto link_name = get_string(f, "link", "frequency");
        RateLink link;
        try {
            link = parse_rate_link(link_name);
        } catch (const ModelError& e) {
            throw ConfigError("frequency.link", e.what());
        }
        const double alpha0 = get_number(f, "alpha0", "frequency");
        const double alpha1 = get_optional_number(f, "alpha1", "frequency").value_or(0.0);
        try {
            config.freq.emplace(alpha0, alpha1, link, horizon);
        } catch (const ModelError& e) {
            throw ConfigError("frequency", e.what());
        }
    }

    if (root.contains("severity")) {
        if (!config.years) throw ConfigError("years", "required when a severity model is given");
        const auto& s = require_object(root, "severity", "");
        reject_unknown(s, "severity", {"family", "beta0", "beta1", "shape"});
        SeverityFamily family;
        try {
            family = parse_severity_family(get_string(s, "family", "severity"));
        } catch (const ModelError& e) {
            throw ConfigError("severity.family", e.what());
        }
        const double beta0 = get_number(s, "beta0", "severity");
        const double beta1 = get_optional_number(s, "beta1", "severity").value_or(0.0);
        const bool needs_shape = family == SeverityFamily::Gamma || family == SeverityFamily::LogNormal ||
                                 family == SeverityFamily::GPD;
        double shape = 0.0;
        if (needs_shape) {
            shape = get_number(s, "shape", "severity");
        } else if (s.contains("shape")) {
            throw ConfigError("severity.shape", "not used by the " + std::string(to_string(family)) + " family");
        }
        try {
            config.sev.emplace(family, TrendParams{beta0, beta1}, shape, horizon);
        } catch (const ModelError& e) {
            const std::string what = e.what();
            throw ConfigError(what.find("shape") != std::string::npos || what.find("sigma") != std::string::npos
                                  ? "severity.shape"
                                  : "severity",
                              what);
        }
    }

    if (root.contains("seed")) {
        const auto& seed = root["seed"];
        if (!seed.is_number_unsigned() && !(seed.is_number_integer() && seed.get<long long>() >= 0)) {
            throw ConfigError("seed", "expected a non-negative integer");
        }
        config.seed = seed.get<std::uint64_t>();
    }
    if (root.contains("replicates")) {
        const auto r = get_integer(root, "replicates", "");
        if (r < 1) throw ConfigError("replicates", "must be a positive integer");
        config.replicates = static_cast<std::size_t>(r);
    }
    if (root.contains("fixed_year")) {
        const auto y = get_integer(root, "fixed_year", "");
        if (!config.years || y < config.years->start || y > config.years->end) {
            throw ConfigError("fixed_year", "must lie inside years.start..years.end");
        }
        config.fixed_year = static_cast<int>(y);
    }
    if (root.contains("window")) {
        const auto w = get_integer(root, "window", "");
        if (w < 3) throw ConfigError("window", "must be >= 3");
        config.window = static_cast<std::size_t>(w);
    }
    if (root.contains("ci_level")) {
        const double level = get_number(root, "ci_level", "");
        if (!(level > 0.0 && level < 1.0)) throw ConfigError("ci_level", "must lie in (0, 1)");
        config.ci_level = level;
    }
    if (root.contains("input")) config.input = get_string(root, "input", "");
    if (root.contains("output")) config.output = get_string(root, "output", "");
    return config;
}

RunConfig parse_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("", path.string() + ": cannot open file for reading");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str());
}

nlohmann::json to_json(const RunConfig& config) {
    json out = json::object();
    if (config.mode) out["mode"] = std::string(to_string(*config.mode));
    if (config.freq) {
        out["frequency"] = {{"link", std::string(to_string(config.freq->link()))},
                            {"alpha0", config.freq->alpha0()},
                            {"alpha1", config.freq->alpha1()}};
    }
    if (config.sev) {
        json s = {{"family", std::string(to_string(config.sev->family()))},
                  {"beta0", config.sev->trend().intercept},
                  {"beta1", config.sev->trend().slope}};
        const auto f = config.sev->family();
        if (f == SeverityFamily::Gamma || f == SeverityFamily::LogNormal || f == SeverityFamily::GPD) {
            s["shape"] = config.sev->shape();
        }
        out["severity"] = s;
    }
    if (config.years) out["years"] = {{"start", config.years->start}, {"end", config.years->end}};
    if (config.seed) out["seed"] = *config.seed;
    out["replicates"] = config.replicates;
    if (config.fixed_year) out["fixed_year"] = *config.fixed_year;
    if (config.window) out["window"] = *config.window;
    out["ci_level"] = config.ci_level;
    if (config.input) out["input"] = *config.input;
    if (config.output) out["output"] = *config.output;
    return out;
}

}  // namespace randsum
