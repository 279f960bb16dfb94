#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "randsum/catalog.hpp"
#include "randsum/frequency.hpp"
#include "randsum/severity.hpp"

namespace randsum {

// Inclusive calendar-year range. Calendar year y maps to the model's year
// index t = y - start + 1, so models are written against t = 1..size().
struct YearRange {
    int start = 1;
    int end = 1;

    std::size_t size() const noexcept { return static_cast<std::size_t>(end - start + 1); }
    double offset(int year) const noexcept { return static_cast<double>(year - start + 1); }
};

struct SimulationConfig {
    FrequencyModel freq;
    SeverityModel sev;
    YearRange years;
    std::uint64_t seed = 0;
    std::size_t replicates = 1;
};

// Throws ModelError unless start <= end and both model horizons cover [1, end - start + 1].
void validate(const SimulationConfig& config);

// One marked point process realization. Year t draws N_t and then N_t
// intensities from its own substream keyed on (seed, t), so a year's
// events do not depend on which other years are simulated.
EventCatalog simulate_catalog(const SimulationConfig& config);

struct ReplicateDraw {
    std::uint64_t count = 0;
    double aggregate = 0.0;
    // First intensity of the replicate; absent when count == 0.
    std::optional<double> first_intensity;
};

// `config.replicates` independent (N_t, S_t) draws at year index t.
// Replicate r uses substream (seed, r); the result does not depend on
// `threads` (0 = hardware concurrency).
std::vector<ReplicateDraw> replicate_fixed_year(const SimulationConfig& config, double t, unsigned threads = 1);

}  // namespace randsum
