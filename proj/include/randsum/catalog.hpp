#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace randsum {

struct Event {
    int year = 0;
    double intensity = 0.0;

    friend bool operator==(const Event&, const Event&) = default;
};

// Events grouped into a contiguous run of years. Years without events are
// kept with n_t = 0 and s_t = 0 so estimators see the true count process.
class EventCatalog {
public:
    // Year range spans the smallest to largest event year; `events` must be non-empty.
    explicit EventCatalog(std::vector<Event> events);
    // Explicit range; every event year must fall inside [first_year, last_year].
    EventCatalog(std::vector<Event> events, int first_year, int last_year);

    // Sorted by year; events within a year keep their input order.
    const std::vector<Event>& events() const noexcept { return events_; }

    int first_year() const noexcept { return first_year_; }
    int last_year() const noexcept { return last_year_; }
    std::size_t year_count() const noexcept { return counts_.size(); }
    std::size_t total_events() const noexcept { return events_.size(); }

    // Indexed by year - first_year().
    std::span<const std::uint64_t> counts() const noexcept { return counts_; }
    std::span<const double> sums() const noexcept { return sums_; }

    // Intensities of year index i (0-based offset from first_year()).
    std::span<const Event> year_events(std::size_t i) const;

private:
    void build(int first_year, int last_year);

    std::vector<Event> events_;
    int first_year_ = 0;
    int last_year_ = 0;
    std::vector<std::uint64_t> counts_;
    std::vector<double> sums_;
    std::vector<std::size_t> offsets_;
};

}  // namespace randsum
