#pragma once

#include "lwbvp/json_support.hpp"
#include "lwbvp/run_config.hpp"

#include <string>
#include <vector>

namespace lwbvp {

inline constexpr const char* kReportSchemaVersion = "1.0";

/// Process exit codes of a run.
enum ExitCode : int {
    kExitOk = 0,
    kExitConfig = 2,
    kExitHypothesis = 3,
    kExitCertification = 4,
    kExitNumerical = 5,
};

struct RunOptions {
    bool timing = true;       // include per-stage wall time in the report
    bool write_files = true;  // report.json, solution_<k>.csv, sweep.csv
};

struct RunOutcome {
    Json report;
    int exit_code = kExitOk;
    std::vector<std::string> files;  // written artifacts, in write order
};

/// Executes the stages implied by config.mode and writes the artifacts
/// into config.output_dir. Library errors are mapped onto exit codes and
/// recorded under "error" in the report.
RunOutcome run(const RunConfig& config, const RunOptions& options = {});

struct SweepRow {
    double alpha = 0.0, beta = 0.0, eta = 0.0;
    double lambda = 0.0;
    std::optional<double> gamma, m, delta;  // empty on H2-fail rows
    std::string verdict;                    // true | false | n/a | H2-fail
};

/// Cartesian product of the axes (first axis outermost). Parameters not
/// on an axis keep their configured values.
std::vector<SweepRow> sweep(const RunConfig& config);

/// alpha,beta,eta,lambda,gamma,m,delta,verdict with 17 significant digits.
std::string sweep_csv(const std::vector<SweepRow>& rows);

/// Dumps a report the way report.json is written.
std::string render_report(const Json& report);

}  // namespace lwbvp
