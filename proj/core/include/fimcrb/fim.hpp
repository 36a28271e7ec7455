#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "fimcrb/generators.hpp"
#include "fimcrb/linalg.hpp"
#include "fimcrb/model.hpp"
#include "fimcrb/quadrature.hpp"

namespace fimcrb {

enum class Block { theta1 = 0, theta2 = 1, theta3 = 2 };

const char* to_string(Block block);

/// Sizes of the theta1 / theta2 / theta3 blocks inside a stacked parameter.
struct BlockIndex {
    Eigen::Index q1 = 0;
    Eigen::Index q2 = 0;
    Eigen::Index q3 = 0;

    Eigen::Index total() const noexcept { return q1 + q2 + q3; }
    Eigen::Index offset(Block b) const noexcept;
    Eigen::Index size(Block b) const noexcept;
};

/// Symmetric PSD Fisher information matrix with named block access.
class FimMatrix {
public:
    /// Throws ModelError if the matrix is not symmetric (1e-12 relative to its
    /// largest entry) or has an eigenvalue below -1e-10 ||I||.
    FimMatrix(MatrixXd matrix, BlockIndex index);

    const MatrixXd& matrix() const noexcept { return matrix_; }
    const BlockIndex& index() const noexcept { return index_; }
    Eigen::Index dimension() const noexcept { return matrix_.rows(); }

    MatrixXd block(Block row, Block col) const;

    /// Information of `count` i.i.d. replications of the same experiment.
    FimMatrix replicated(double count) const;

private:
    MatrixXd matrix_;
    BlockIndex index_;
};

/// Coefficients scaling the elliptical FIM blocks. a0 is NaN when not
/// computed (closed form unavailable) and +inf when E[Q phi^2] diverges.
struct EllipticalCoefficients {
    enum class Method { closed_form, quadrature };

    double a0 = std::numeric_limits<double>::quiet_NaN();
    double a1 = 0.0;
    double a2 = 0.0;
    int n = 0;
    Method method = Method::quadrature;
    // Quadrature error estimates for a0 and a1 (zero for closed forms).
    double a0_error = 0.0;
    double a1_error = 0.0;

    bool has_a0() const noexcept { return !std::isnan(a0); }
};

const char* to_string(EllipticalCoefficients::Method method);

/// Gaussian FIM over (theta1, theta2):
///   (dm/dtheta1)^T Sigma^{-1} dm/dtheta1  and
///   1/2 (dvecSigma/dtheta2)^T (Sigma^{-1} kron Sigma^{-1}) dvecSigma/dtheta2,
/// cross blocks exactly zero.
FimMatrix slepian_bangs_gaussian(const MeanMap& mean_map, const CovarianceMap& cov_map,
                                 const VectorXd& theta1, const VectorXd& theta2);

/// a0 = E[Q phi^2(Q)] / n, a1 = E[Q^2 phi^2(Q)] / (2 n (n+2)) by radial
/// quadrature; a2 = (2 a1 - 1) / 4.
EllipticalCoefficients elliptical_coefficients_quadrature(const DensityGenerator& generator,
                                                          QuadratureOptions options = {});

/// (a1, a2) = ((n+2s) / (2(n+2)), -(1-s) / (2(n+2))) for the generalized
/// Gaussian; a0 is left unavailable.
EllipticalCoefficients gg_coefficients_closed_form(int n, double s);

enum class KroneckerRoute { automatic, materialized, contracted };

/// a1 J^T (Sigma^{-1} kron Sigma^{-1}) J + a2 J^T vec(Sigma^{-1}) vec(Sigma^{-1})^T J
/// for J = dvec(Sigma)/dtheta2. `automatic` materializes the Kronecker product
/// for n <= 8 and uses tr(Sigma^{-1} A_i Sigma^{-1} A_j) contractions above.
MatrixXd covariance_information(const MatrixXd& jacobian_vec, const MatrixXd& sigma_inverse,
                                double a1, double a2,
                                KroneckerRoute route = KroneckerRoute::automatic);

/// Elliptical FIM over (theta1, theta2); theta1 block scaled by a0, theta2
/// block per covariance_information. Requires a finite a0 when q1 > 0.
FimMatrix elliptical_fim(const MeanMap& mean_map, const CovarianceMap& cov_map,
                         const EllipticalCoefficients& coefficients, const VectorXd& theta1,
                         const VectorXd& theta2);

/// Closed-form FIM of n i.i.d. Gamma observations in theta = (m, sigma2):
///   n [ 4m^2/s^4 T - 3/s^2         , -2m^3/s^6 T + 2m/s^4 ]
///     [ -2m^3/s^6 T + 2m/s^4 , m^4/s^8 T - m^2/s^6    ]
/// with s^2 = sigma2 and T = trigamma(m^2/sigma2). Entries are evaluated in
/// the factored form through alpha T - 1 to keep precision for large alpha.
FimMatrix gamma_fim(double m, double sigma2, int n);

/// FIM of the same model in (alpha, beta): n [psi'(alpha), 1/beta; 1/beta, alpha/beta^2].
MatrixXd gamma_fim_alpha_beta(double alpha, double beta, int n);

/// a1 through 1/2 + E[Q^2 phi'(Q)] / (n(n+2)). Any generator providing phi'.
double a1_via_phi_prime(const DensityGenerator& generator, QuadratureOptions options = {});

/// a1_via_phi_prime restricted to compound-Gaussian generators; throws
/// ModelError for other families and NumericError if the result exceeds
/// 1/2 + 1e-10.
double compound_gaussian_a1(const DensityGenerator& generator, QuadratureOptions options = {});

}  // namespace fimcrb
