#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include <json.hpp>

namespace shiftlab {

/// One batch command.  Empty strings and unset optionals mean "use the
/// command default"; the resolved values are echoed in every report.
struct RunConfig {
    std::string command;                 // classify radii chain stability semicont beurling-index beurling-check
    std::string weight;                  // preset, poly:p or file
    std::optional<std::size_t> n;        // window size / max degree
    std::string lambda = "0.5";
    std::size_t m = 2;
    std::string roots = "0.3,-0.4";
    std::string eps;                     // comma separated, strictly decreasing
    std::string perturbation;            // dense_random, weight_jitter
    std::uint64_t seed = 42;
    double tol = 1e-8;
    std::string zeros;
    std::size_t sets = 50;
    std::size_t trials = 200;
    std::size_t copies = 1;
    std::size_t samples = 200;           // per degree band
    std::string out = "shiftlab";
};

struct RunResult {
    int exit_code = 0;
    nlohmann::json document;             // what was written to <out>.report.json
    std::string report_path;
    std::string steps_path;              // empty when no CSV was written
};

/// Resolves defaults, applies SHIFTLAB_SEED, runs the command and writes
/// the artifacts.  Throws ConfigError naming the offending key.
RunResult run(const RunConfig& config, std::ostream& log);

/// Command-line entry point.  0 ok, 2 verdict fail, 1 error.
int cli_main(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace shiftlab
