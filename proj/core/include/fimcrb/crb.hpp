#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "fimcrb/fim.hpp"
#include "fimcrb/linalg.hpp"
#include "fimcrb/model.hpp"

namespace fimcrb {

enum class NuisancePolicy {
    none,   // invert the diagonal block; valid only when cross blocks vanish
    schur,  // invert the Schur complement against every other parameter
};

struct CrbBlock {
    Block block = Block::theta1;
    NuisancePolicy policy = NuisancePolicy::none;
    MatrixXd information;  // effective information that was inverted
    MatrixXd crb;
    double condition_number = 0.0;
};

/// CRB(theta_i) = [I^{-1}]_(i,i). With `none` the (i,i) block is inverted
/// directly; with `schur` the effective information
///   I_ii - I_io I_oo^{-1} I_oi  (o = all other blocks)
/// is inverted. Inversion goes through the symmetric eigendecomposition and
/// raises RankDeficiencyError (with a null-space basis) on singular input.
CrbBlock crb_from_fim(const FimMatrix& fim, Block block, NuisancePolicy policy);

/// Effective information on `target` once `nuisance` is profiled out.
MatrixXd schur_complement(const FimMatrix& fim, Block target, Block nuisance);

/// Effect of an unknown theta3 on the theta2 information.
struct NuisanceReduction {
    MatrixXd block_information;      // [I]_22
    MatrixXd effective_information;  // [I]_22 - [I]_23 [I]_33^{-1} [I]_23^T
    /// For scalar theta2: scale * (effective - block), the coefficient shift
    /// relative to the known-theta3 information. NaN otherwise.
    double a3_estimate = std::numeric_limits<double>::quiet_NaN();
};

/// `scale` converts information into coefficient units (sigma2^2 for a
/// variance parameter).
NuisanceReduction reduce_nuisance(const FimMatrix& fim, double scale = 1.0);

struct CrbComparison {
    Block block = Block::theta1;
    LoewnerComparison comparison;  // candidate = family CRB, reference = Gaussian CRB
};

/// Per-block CRBs under a family and under the Gaussian law with the same
/// mean and covariance, with Loewner-order verdicts.
struct CrbReport {
    std::string family;
    std::optional<MatrixXd> crb_theta1;
    MatrixXd crb_theta2;
    std::optional<MatrixXd> gaussian_theta1;
    MatrixXd gaussian_theta2;
    std::vector<CrbComparison> comparisons;
    std::vector<std::string> notes;
};

/// CRB report for an elliptical model, optionally for `replications` i.i.d.
/// copies. GG uses the closed-form (a1, a2) and quadrature a0; other families
/// use quadrature throughout. An infinite a0 gives CRB(theta1) = 0.
CrbReport elliptical_crb_report(const LocationScaleModel& model, const VectorXd& theta1,
                                const VectorXd& theta2, double replications = 1.0);

/// CRB report for n i.i.d. Gamma observations against the Gaussian reference
/// CRB(m) = sigma2/n, CRB(sigma2) = 2 sigma2^2 / n. Uses the Schur policy.
CrbReport gamma_crb_report(double m, double sigma2, int n);

/// Gamma CRB(sigma2) normalized as n CRB(sigma2) / (2 sigma2^2); depends only on
/// the ratio r = sigma2 / m^2.
double gamma_normalized_crb_sigma2(double ratio);

struct GammaExpansionCheck {
    std::vector<double> ratios;       // r = sigma2 / m^2, descending
    std::vector<double> normalized;   // n CRB(sigma2) / (2 sigma2^2)
    std::vector<double> slopes;       // h(r) = (normalized - 1) / r
    double limit_estimate = 0.0;      // h extrapolated to r -> 0
    bool all_above_gaussian = false;  // normalized > 1 everywhere
    std::vector<std::string> warnings;
};

/// Polynomial (Richardson/Neville) extrapolation of h(r) to r = 0; the
/// leading coefficient of the expansion n CRB(sigma2)/(2 sigma2^2) = 1 + h r.
GammaExpansionCheck gamma_crb_expansion_check(std::vector<double> ratios = {1e-1, 1e-2, 1e-3,
                                                                             1e-4});

}  // namespace fimcrb
