#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

namespace fimcrb::cli {

enum ExitCode : int {
    kSuccess = 0,
    kVerificationFailure = 1,
    kUsageError = 2,
    kNumericError = 3,
};

/// Everything a run depends on. Serialized into every output so a run can be
/// repeated exactly.
struct RunConfig {
    std::string command;
    std::string family = "gaussian";  // gaussian | gg | student-t | compound-gaussian | gamma
    int n = 1;
    double s = 1.0;
    double nu = 5.0;
    std::string texture = "point:1.0";
    std::optional<double> m;            // default 1 for gamma, 0 otherwise
    double sigma2 = 1.0;
    int iid = 1;
    bool unknown_s = false;
    std::optional<std::size_t> samples;  // command-specific default when unset
    std::uint64_t seed = 20240611;
    std::string output;                 // empty = stdout
    std::string format = "table";       // table | json | csv
    bool quick = false;
    std::string inject_fault;           // "" | bad-normalization
    double s_min = 0.25;
    double s_max = 2.0;
    int steps = 8;

    double mean() const { return m.value_or(family == "gamma" ? 1.0 : 0.0); }
};

/// Compact single-line JSON of every field.
std::string serialize(const RunConfig& config);

/// Runs config.command, writing results to config.output (relative paths are
/// resolved against $FIMCRB_OUTPUT_DIR when set) or to `out`. Diagnostics go
/// to `err`. Library errors are mapped onto exit codes; nothing escapes.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

int cmd_coeffs(const RunConfig& config, std::ostream& out);
int cmd_crb(const RunConfig& config, std::ostream& out);
int cmd_sweep_s(const RunConfig& config, std::ostream& out);
int cmd_verify(const RunConfig& config, std::ostream& out);
int cmd_sample(const RunConfig& config, std::ostream& out);
int cmd_oracle(const RunConfig& config, std::ostream& out);

}  // namespace fimcrb::cli
