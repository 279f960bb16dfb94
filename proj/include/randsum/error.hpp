#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace randsum {

// Raised when a model parameter or query violates a model invariant
// (non-positive rate, shape outside its family's range, year outside the
// validated horizon, ...).
class ModelError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Raised by estimators when the input cannot support the statistic at all
// (empty catalog, too few years, zero mean). Statistics that are merely
// undefined for a particular sample are returned as std::nullopt instead.
class EstimationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Malformed input file. Carries the 1-based line number when known (0 otherwise).
class ParseError : public std::runtime_error {
public:
    ParseError(std::string source, std::size_t line, const std::string& what)
        : std::runtime_error(format(source, line, what)), source_(std::move(source)), line_(line) {}

    const std::string& source() const noexcept { return source_; }
    std::size_t line() const noexcept { return line_; }

private:
    static std::string format(const std::string& source, std::size_t line, const std::string& what) {
        std::string out = source;
        if (line > 0) out += ":" + std::to_string(line);
        return out + ": " + what;
    }

    std::string source_;
    std::size_t line_;
};

// Run configuration rejected; `path` is the JSON field path (e.g. "severity.shape").
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string path, const std::string& what)
        : std::runtime_error(path.empty() ? what : path + ": " + what), path_(std::move(path)) {}

    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

}  // namespace randsum
