#pragma once

#include <cmath>
#include <cstdio>
#include <optional>
#include <string>

#include "randsum/error.hpp"
#include "randsum/severity.hpp"

namespace randsum::detail {

// First year in `horizon` at which intercept + slope * t <= 0, if any.
// The function is linear, so only the endpoints and the root matter.
inline std::optional<double> first_nonpositive(double intercept, double slope, const Horizon& horizon) {
    const auto value = [&](double t) { return intercept + slope * t; };
    if (value(horizon.first) <= 0.0) return horizon.first;
    if (value(horizon.last) > 0.0) return std::nullopt;
    return -intercept / slope;
}

inline std::string format_number(double x) {
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.10g", x);
    return buffer;
}

inline void validate_horizon(const Horizon& horizon) {
    if (!std::isfinite(horizon.first) || !std::isfinite(horizon.last) || horizon.first > horizon.last) {
        throw ModelError("horizon must be a finite interval with first <= last");
    }
}

inline void require_in_horizon(const Horizon& horizon, double t) {
    if (!horizon.contains(t)) {
        throw ModelError("year index t=" + format_number(t) + " outside the model horizon [" +
                         format_number(horizon.first) + ", " + format_number(horizon.last) + "]");
    }
}

}  // namespace randsum::detail
