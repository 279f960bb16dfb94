#include "randsum/simulate.hpp"

#include <algorithm>
#include <thread>

#include "linear_trend.hpp"
#include "randsum/error.hpp"

namespace randsum {

namespace {

ReplicateDraw draw_year(const FrequencyModel& freq, const SeverityModel& sev, double t, RandomStream& rng,
                        std::vector<Event>* sink, int year) {
    ReplicateDraw draw;
    draw.count = freq.sample(t, rng);
    for (std::uint64_t i = 0; i < draw.count; ++i) {
        const double x = sev.sample(t, rng);
        if (i == 0) draw.first_intensity = x;
        draw.aggregate += x;
        if (sink) sink->push_back({year, x});
    }
    return draw;
}

}  // namespace

void validate(const SimulationConfig& config) {
    if (config.years.start > config.years.end) throw ModelError("years.start must be <= years.end");
    const Horizon needed{1.0, static_cast<double>(config.years.size())};
    for (const Horizon* h : {&config.freq.horizon(), &config.sev.horizon()}) {
        if (!h->contains(needed.first) || !h->contains(needed.last)) {
            throw ModelError("model horizon [" + detail::format_number(h->first) + ", " +
                             detail::format_number(h->last) + "] does not cover year indices 1.." +
                             std::to_string(config.years.size()));
        }
    }
    if (config.replicates == 0) throw ModelError("replicates must be positive");
}

EventCatalog simulate_catalog(const SimulationConfig& config) {
    validate(config);
    std::vector<Event> events;
    for (int year = config.years.start; year <= config.years.end; ++year) {
        const double t = config.years.offset(year);
        RandomStream rng(config.seed, StreamDomain::CatalogYear, static_cast<std::uint64_t>(t));
        draw_year(config.freq, config.sev, t, rng, &events, year);
    }
    return EventCatalog(std::move(events), config.years.start, config.years.end);
}

std::vector<ReplicateDraw> replicate_fixed_year(const SimulationConfig& config, double t, unsigned threads) {
    validate(config);
    if (config.replicates < 2) throw ModelError("fixed-year ensembles need at least 2 replicates");
    detail::require_in_horizon(config.freq.horizon(), t);
    detail::require_in_horizon(config.sev.horizon(), t);

    std::vector<ReplicateDraw> draws(config.replicates);
    const auto fill = [&](std::size_t begin, std::size_t end) {
        for (std::size_t r = begin; r < end; ++r) {
            RandomStream rng(config.seed, StreamDomain::Replicate, r);
            draws[r] = draw_year(config.freq, config.sev, t, rng, nullptr, 0);
        }
    };

    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, draws.size()));
    if (threads <= 1) {
        fill(0, draws.size());
        return draws;
    }
    const std::size_t chunk = (draws.size() + threads - 1) / threads;
    {
        std::vector<std::jthread> workers;
        for (unsigned w = 0; w < threads; ++w) {
            const std::size_t begin = w * chunk;
            const std::size_t end = std::min(draws.size(), begin + chunk);
            if (begin < end) workers.emplace_back(fill, begin, end);
        }
    }
    return draws;
}

}  // namespace randsum
