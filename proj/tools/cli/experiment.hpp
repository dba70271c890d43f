#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "kaczmarz/engine.hpp"

namespace kaczmarz::cli {

struct RunConfig {
    std::filesystem::path input;
    std::string control = "maxres";  // cyclic | maxres | random
    std::optional<std::uint64_t> seed;  // required iff control == random
    std::size_t max_iters = 10'000;
    double tol = 1e-10;
    std::string x0 = "zero";  // zero | PATH
    std::string reference = "none";  // none | oracle | PATH
    std::vector<std::string> emit = {"trace"};  // trace, histogram, tau, report
    std::optional<std::filesystem::path> output;  // stdout when empty
    std::optional<std::filesystem::path> csv_trace;
};

/// Throws InvalidArgument on an inconsistent configuration.
void validate(const RunConfig& config);

ControlStrategy make_strategy(const RunConfig& config);

struct ExperimentOutput {
    nlohmann::json document;
    StopReason stop_reason = StopReason::BudgetExhausted;
    std::string csv_trace;  // filled only when config.csv_trace is set
};

/// Loads the system, runs the solver and assembles the JSON document. The
/// only run-dependent field outside the computation is `generated_at`.
ExperimentOutput execute(const RunConfig& config, const std::string& timestamp);

/// execute() plus file output and error mapping. Returns 0 when converged,
/// 2 when the iteration budget ran out and 1 on any error (reported on `err`).
/// The document goes to config.output, or to `out` when no path is set.
int run_experiment(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Current UTC time as YYYY-MM-DDThh:mm:ssZ.
std::string iso8601_now();

}  // namespace kaczmarz::cli
