#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace randsum::cli {

enum class ExitStatus { Ok = 0, VerificationFailure = 1, InputError = 2 };

struct ExitReport {
    ExitStatus status = ExitStatus::Ok;
    std::string summary;
    nlohmann::json payload = nlohmann::json::object();
};

// Runs one command line (without the program name). Data goes to --out files
// when given, otherwise to `out`; the report goes to `out` (human summary, or
// JSON with --json) unless `out` already carries data, in which case `err`.
ExitReport run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace randsum::cli
