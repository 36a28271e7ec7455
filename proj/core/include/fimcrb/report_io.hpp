#pragma once

#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "fimcrb/crb.hpp"
#include "fimcrb/fim.hpp"
#include "fimcrb/gg_shape.hpp"
#include "fimcrb/oracle.hpp"
#include "fimcrb/suite.hpp"

namespace fimcrb {

using ParameterList = std::vector<std::pair<std::string, double>>;

/// printf("%.12g"), independent of the global locale; non-finite values print
/// as inf, -inf, nan.
std::string format_number(double x);

/// {n, family, params, a0, a1, a2, method, fim (row-major), blocks}. The fim
/// keys are omitted when `fim` is null. Infinite a0 is written as "inf".
std::string coefficients_json(const std::string& family, int n, const ParameterList& params,
                              const EllipticalCoefficients& coefficients,
                              const FimMatrix* fim = nullptr);

/// {estimate, se, target, z_scores, max_abs_z, verdict}.
std::string oracle_json(const OracleComparison& comparison);

std::string crb_report_json(const CrbReport& report);
std::string crb_report_table(const CrbReport& report);

std::string suite_json(const SuiteReport& report);
std::string suite_table(const SuiteReport& report);

/// `# config: <text>` followed by columns s,n,crb_known_s,crb_unknown_s,gaussian_level.
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows,
                     const std::string& config);

/// `# config: <text>` followed by x1..xn and one draw per row.
void write_sample_csv(std::ostream& out, const MatrixXd& draws, const std::string& config);

}  // namespace fimcrb
