#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "randsum/catalog.hpp"
#include "randsum/estimate.hpp"
#include "randsum/frequency.hpp"
#include "randsum/riskmodel.hpp"
#include "randsum/severity.hpp"
#include "randsum/simulate.hpp"

namespace randsum {

// ---------------------------------------------------------------------------
// Events CSV
//
//   year,intensity
//   2040,26.7
//   2040,30.1
//
// UTF-8 (an optional BOM is skipped), LF or CRLF line endings, '.' as the
// decimal separator. Rows may come in any order; blank lines are ignored.
// Errors carry the 1-based line number.
// ---------------------------------------------------------------------------
EventCatalog parse_events_csv(std::istream& in, const std::string& source = "<events>");
EventCatalog read_events_csv(const std::filesystem::path& path);
void write_events_csv(const EventCatalog& catalog, std::ostream& out);
void write_events_csv(const EventCatalog& catalog, const std::filesystem::path& path);

// Long-run series CSV: t,e_n,e_s,e_x,phi,rho,rho_lo,rho_hi,j2phi
// where t is the calendar year of the cutoff. Absent values are empty fields.
void write_series_csv(const LongRunSeries& series, std::ostream& out);
void write_series_csv(const LongRunSeries& series, const std::filesystem::path& path);
LongRunSeries parse_series_csv(std::istream& in, const std::string& source = "<series>");
LongRunSeries read_series_csv(const std::filesystem::path& path);

// Per-year closed-form summaries (theory output).
void write_summary_csv(const std::vector<RiskSummary>& rows, int first_year, std::ostream& out);

// ---------------------------------------------------------------------------
// Run configuration (JSON object). Unknown keys are rejected.
//
// {
//   "mode": "simulate",                      // theory | simulate | analyze | verify
//   "frequency": {"link": "log", "alpha0": 3.384, "alpha1": 0.0},
//   "severity": {"family": "exponential", "beta0": 26.7, "beta1": 0.0, "shape": 0.2},
//   "years": {"start": 1, "end": 60},
//   "seed": 1,
//   "replicates": 1,                         // default 1
//   "fixed_year": 1,                         // verify: calendar year, default years.start
//   "window": 10,                            // default absent (expanding)
//   "ci_level": 0.95,                        // default 0.95
//   "input": "events.csv",
//   "output": "out.csv"
// }
//
// Model horizons are set to year indices 1..(end - start + 1).
// ---------------------------------------------------------------------------
enum class RunMode { Theory, Simulate, Analyze, Verify };

std::string_view to_string(RunMode mode) noexcept;

struct RunConfig {
    std::optional<RunMode> mode;
    std::optional<FrequencyModel> freq;
    std::optional<SeverityModel> sev;
    std::optional<YearRange> years;
    std::optional<std::uint64_t> seed;
    std::size_t replicates = 1;
    std::optional<int> fixed_year;
    std::optional<std::size_t> window;
    double ci_level = 0.95;
    std::optional<std::string> input;
    std::optional<std::string> output;

    // Throws ConfigError naming the first missing field.
    SimulationConfig simulation() const;
};

RunConfig parse_config_text(std::string_view text);
RunConfig parse_config(const std::filesystem::path& path);

// Effective configuration, including defaults, in the input schema.
nlohmann::json to_json(const RunConfig& config);

}  // namespace randsum
