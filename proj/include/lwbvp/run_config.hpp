#pragma once

#include "lwbvp/certifier.hpp"
#include "lwbvp/json_support.hpp"
#include "lwbvp/problem.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace lwbvp {

enum class Mode { constants, certify, solve, sweep };
std::string to_string(Mode m);

struct SweepAxis {
    std::string name;  // alpha | beta | eta
    double lo = 0.0;
    double hi = 0.0;
    std::size_t steps = 1;

    /// Parses "name:lo:hi:steps".
    static SweepAxis parse(const std::string& text);
    std::string to_string() const;
    std::vector<double> values() const;

    friend bool operator==(const SweepAxis&, const SweepAxis&) = default;
};

struct RunTolerances {
    double picard = 1e-10;
    double residual = 1e-8;
    double dedup = 1e-4;

    friend bool operator==(const RunTolerances&, const RunTolerances&) = default;
};

/// Everything a batch run needs; parsed from and echoed to JSON.
struct RunConfig {
    Problem problem;
    std::optional<ThresholdTriple> thresholds;
    std::size_t grid_n = 2049;
    RunTolerances tolerances;
    std::size_t max_iter = 500;
    std::size_t shooting_starts = 16;
    std::size_t samples = 257;
    bool use_monotone_hint = true;
    std::optional<double> u_max;  // hypothesis sampling bound; default 2c or 10
    Mode mode = Mode::certify;
    std::string output_dir = ".";
    std::vector<SweepAxis> axes;

    /// Upper end of the u-range sampled for the H1 check.
    double hypothesis_u_max() const;
};

/// Throws ConfigError on schema violations (grid_n >= 65 and odd,
/// positive tolerances, known mode, well-formed problem and thresholds).
RunConfig parse_run_config(const Json& document);
RunConfig load_run_config(const std::string& path);

Json to_json(const RunConfig& config);

bool operator==(const RunConfig& a, const RunConfig& b);

}  // namespace lwbvp
