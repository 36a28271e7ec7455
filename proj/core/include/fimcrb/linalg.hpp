#pragma once

#include <string>

#include <Eigen/Dense>

namespace fimcrb {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Column-stacking vec operator.
VectorXd vec(const MatrixXd& a);

/// Inverse of vec for a square n x n matrix.
MatrixXd unvec(const VectorXd& v, Eigen::Index n);

MatrixXd kronecker(const MatrixXd& a, const MatrixXd& b);

/// Max-abs asymmetry ||A - A^T||_max.
double asymmetry(const MatrixXd& a);

double min_eigenvalue(const MatrixXd& symmetric);

struct SymmetricInverse {
    MatrixXd inverse;
    double min_eigenvalue = 0.0;
    double max_eigenvalue = 0.0;
    double condition_number = 0.0;
};

/// Inverts a symmetric positive definite matrix through its eigendecomposition.
/// Eigenvalues below rank_tol * max|eigenvalue| count as zero and raise
/// RankDeficiencyError carrying the corresponding eigenvectors. `what` names
/// the matrix in error messages.
SymmetricInverse invert_symmetric(const MatrixXd& a, const std::string& what,
                                  double rank_tol = 1e-13);

/// Lower Cholesky factor L with L L^T = a. Throws ModelError if a is not PD.
MatrixXd cholesky_factor(const MatrixXd& a, const std::string& what);

enum class LoewnerOrder { less_equal, greater_equal, equal, incomparable };

const char* to_string(LoewnerOrder order);

struct LoewnerComparison {
    LoewnerOrder order = LoewnerOrder::incomparable;
    // Extreme eigenvalues of (reference - candidate).
    double min_margin = 0.0;
    double max_margin = 0.0;
    double tolerance = 0.0;
};

/// Orders `candidate` against `reference` in the PSD sense. "less_equal" means
/// candidate <= reference, i.e. the smallest eigenvalue of reference - candidate
/// is >= -tol with tol = rel_tol * max(trace scale of either matrix).
LoewnerComparison loewner_compare(const MatrixXd& candidate, const MatrixXd& reference,
                                  double rel_tol = 1e-10);

}  // namespace fimcrb
