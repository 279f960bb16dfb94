#include "randsum/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "randsum/error.hpp"

namespace randsum {

namespace {

void check_intensities(const std::vector<Event>& events) {
    for (const auto& e : events) {
        if (!(e.intensity > 0.0) || !std::isfinite(e.intensity)) {
            throw ModelError("event intensity must be positive and finite (year " + std::to_string(e.year) + ")");
        }
    }
}

}  // namespace

EventCatalog::EventCatalog(std::vector<Event> events) : events_(std::move(events)) {
    if (events_.empty()) throw EstimationError("catalog has no events and no explicit year range");
    check_intensities(events_);
    const auto [lo, hi] = std::minmax_element(events_.begin(), events_.end(),
                                              [](const Event& a, const Event& b) { return a.year < b.year; });
    build(lo->year, hi->year);
}

EventCatalog::EventCatalog(std::vector<Event> events, int first_year, int last_year) : events_(std::move(events)) {
    if (first_year > last_year) throw ModelError("catalog year range is empty");
    check_intensities(events_);
    for (const auto& e : events_) {
        if (e.year < first_year || e.year > last_year) {
            throw ModelError("event year " + std::to_string(e.year) + " outside catalog range");
        }
    }
    build(first_year, last_year);
}

void EventCatalog::build(int first_year, int last_year) {
    first_year_ = first_year;
    last_year_ = last_year;
    std::stable_sort(events_.begin(), events_.end(), [](const Event& a, const Event& b) { return a.year < b.year; });

    const auto years = static_cast<std::size_t>(static_cast<long long>(last_year) - first_year + 1);
    counts_.assign(years, 0);
    sums_.assign(years, 0.0);
    offsets_.assign(years + 1, 0);
    for (const auto& e : events_) {
        const auto i = static_cast<std::size_t>(e.year - first_year);
        ++counts_[i];
        sums_[i] += e.intensity;
    }
    for (std::size_t i = 0; i < years; ++i) offsets_[i + 1] = offsets_[i] + counts_[i];
}

std::span<const Event> EventCatalog::year_events(std::size_t i) const {
    if (i >= counts_.size()) throw ModelError("year index out of range");
    return std::span<const Event>(events_).subspan(offsets_[i], counts_[i]);
}

}  // namespace randsum
