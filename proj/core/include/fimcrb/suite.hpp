#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "fimcrb/generators.hpp"

namespace fimcrb {

/// g~(t) = g(t / lambda) with sampler lambda Q: breaks both the delta_n
/// normalization and E[Q] = n when lambda != 1. Exists to exercise failure
/// reporting.
GeneratorPtr dilated_generator(GeneratorPtr base, double lambda);

struct SuiteConfig {
    std::vector<int> dimensions{1, 2, 4};
    std::vector<double> gg_shapes{0.25, 0.5, 1.0, 2.0, 4.0};
    std::vector<double> student_nu{5.0};
    std::vector<std::string> textures{"point:1.0", "two:0.5,1.5@0.5", "invgamma:2.5"};

    // Monte Carlo part; mc_samples = 0 disables it.
    std::size_t mc_samples = 1000000;
    std::vector<int> mc_dimensions{1, 2};
    std::vector<double> mc_gg_shapes{0.5, 2.0};
    std::vector<std::string> mc_textures{"two:0.5,1.5@0.5"};
    std::uint64_t seed = 20240611;
    unsigned threads = 0;

    bool inject_bad_normalization = false;
};

/// --quick: same checks, N = 10^4 (bands widen accordingly).
SuiteConfig quick_suite_config();

enum class CheckStatus { passed, failed, skipped };

const char* to_string(CheckStatus status);

struct CheckResult {
    std::string group;
    std::string name;
    std::string family;
    int n = 0;
    CheckStatus status = CheckStatus::skipped;
    double value = std::numeric_limits<double>::quiet_NaN();
    double bound = std::numeric_limits<double>::quiet_NaN();
    // Distance to the bound on the passing side; negative when failed.
    double margin = std::numeric_limits<double>::quiet_NaN();
    std::string detail;
};

struct SuiteReport {
    SuiteConfig config;
    std::vector<CheckResult> checks;

    std::size_t count(CheckStatus status) const;
    /// Logical AND over every non-skipped check.
    bool all_passed() const { return count(CheckStatus::failed) == 0; }
    std::vector<const CheckResult*> failures() const;
};

/// Runs every bound, identity and oracle comparison over the configured
/// families and dimensions. Failures are data: nothing here throws for a
/// failing check. Order of checks is deterministic.
SuiteReport verify_inequality_suite(const SuiteConfig& config = {});

}  // namespace fimcrb
