#pragma once

#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "fimcrb/linalg.hpp"

namespace fimcrb {

class DensityGenerator;

/// theta = (theta1, theta2, theta3): mean parameters, covariance parameters
/// and optional shape/nuisance parameters. Block sizes are fixed at
/// construction.
class ParameterVector {
public:
    ParameterVector(VectorXd theta1, VectorXd theta2, VectorXd theta3 = VectorXd());

    const VectorXd& theta1() const noexcept { return theta1_; }
    const VectorXd& theta2() const noexcept { return theta2_; }
    const VectorXd& theta3() const noexcept { return theta3_; }

    Eigen::Index q1() const noexcept { return theta1_.size(); }
    Eigen::Index q2() const noexcept { return theta2_.size(); }
    Eigen::Index q3() const noexcept { return theta3_.size(); }
    Eigen::Index size() const noexcept { return q1() + q2() + q3(); }

    /// (theta1^T, theta2^T, theta3^T)^T
    VectorXd stacked() const;

    /// Same block sizes, new values. `stacked` must have length size().
    ParameterVector with_stacked(const VectorXd& stacked) const;

private:
    VectorXd theta1_;
    VectorXd theta2_;
    VectorXd theta3_;
};

/// theta1 -> m, with dm/dtheta1 as an n x q1 matrix.
class MeanMap {
public:
    using Evaluate = std::function<VectorXd(const VectorXd&)>;
    using Jacobian = std::function<MatrixXd(const VectorXd&)>;

    MeanMap(std::string name, int dimension, int parameter_count, Evaluate evaluate,
            Jacobian jacobian);

    const std::string& name() const noexcept { return name_; }
    int dimension() const noexcept { return dimension_; }
    int parameter_count() const noexcept { return parameter_count_; }

    VectorXd evaluate(const VectorXd& theta1) const;
    MatrixXd jacobian(const VectorXd& theta1) const;

private:
    void check_arity(const VectorXd& theta1) const;

    std::string name_;
    int dimension_;
    int parameter_count_;
    Evaluate evaluate_;
    Jacobian jacobian_;
};

/// theta2 -> Sigma (symmetric positive definite), with d vec(Sigma)/dtheta2
/// as an n^2 x q2 matrix.
class CovarianceMap {
public:
    using Evaluate = std::function<MatrixXd(const VectorXd&)>;
    using Jacobian = std::function<MatrixXd(const VectorXd&)>;

    CovarianceMap(std::string name, int dimension, int parameter_count, Evaluate evaluate,
                  Jacobian jacobian_vec);

    const std::string& name() const noexcept { return name_; }
    int dimension() const noexcept { return dimension_; }
    int parameter_count() const noexcept { return parameter_count_; }

    /// Throws ModelError unless the result is symmetric (1e-12) and PD.
    MatrixXd evaluate(const VectorXd& theta2) const;
    MatrixXd jacobian_vec(const VectorXd& theta2) const;

private:
    void check_arity(const VectorXd& theta2) const;

    std::string name_;
    int dimension_;
    int parameter_count_;
    Evaluate evaluate_;
    Jacobian jacobian_;
};

/// theta1 = (m) -> m 1_n and theta2 = (sigma2) -> sigma2 I_n: n i.i.d. scalar
/// observations sharing mean and variance.
std::pair<MeanMap, CovarianceMap> builtin_iid_scalar(int n);

/// theta1 = m directly.
MeanMap builtin_full_mean(int n);

/// m = H theta1 for a fixed n x q1 design matrix.
MeanMap builtin_linear_mean(MatrixXd design);

/// theta2 = lower triangle of Sigma, column by column (q2 = n(n+1)/2).
CovarianceMap builtin_symmetric_covariance(int n);

/// theta2 = (sigma2, rho), Sigma_ij = sigma2 rho^|i-j|, |rho| < 1.
CovarianceMap builtin_ar1_covariance(int n);

struct JacobianViolation {
    std::size_t point = 0;
    Eigen::Index row = -1;
    Eigen::Index col = -1;
    double analytic = 0.0;
    double numeric = 0.0;
    double relative_error = 0.0;
    std::string message;
};

/// Compares analytic Jacobians with central differences (h = 1e-5 (1+|theta_i|))
/// at every test point. An entry violates when |analytic - numeric| exceeds
/// tol * max(1, |numeric|). Evaluation failures are reported, not thrown.
std::vector<JacobianViolation> validate_jacobians(const MeanMap& map,
                                                  const std::vector<VectorXd>& test_points,
                                                  double tol);
std::vector<JacobianViolation> validate_jacobians(const CovarianceMap& map,
                                                  const std::vector<VectorXd>& test_points,
                                                  double tol);

/// Pairs (i, j) of grid points whose images are within tol of each other
/// although the points differ. A finite-grid check, not a proof.
std::vector<std::pair<std::size_t, std::size_t>> identifiability_violations(
    const MeanMap& map, const std::vector<VectorXd>& grid, double tol = 1e-12);
std::vector<std::pair<std::size_t, std::size_t>> identifiability_violations(
    const CovarianceMap& map, const std::vector<VectorXd>& grid, double tol = 1e-12);

/// p_x(x) = |Sigma|^{-1/2} g((x-m)^T Sigma^{-1} (x-m)).
class LocationScaleModel {
public:
    LocationScaleModel(MeanMap mean_map, CovarianceMap cov_map,
                       std::shared_ptr<const DensityGenerator> generator);

    const MeanMap& mean_map() const noexcept { return mean_map_; }
    const CovarianceMap& cov_map() const noexcept { return cov_map_; }
    const DensityGenerator& generator() const noexcept { return *generator_; }
    std::shared_ptr<const DensityGenerator> generator_ptr() const noexcept { return generator_; }

    int dimension() const noexcept { return mean_map_.dimension(); }
    int q1() const noexcept { return mean_map_.parameter_count(); }
    int q2() const noexcept { return cov_map_.parameter_count(); }

    double log_density(const VectorXd& theta1, const VectorXd& theta2, const VectorXd& x) const;

private:
    MeanMap mean_map_;
    CovarianceMap cov_map_;
    std::shared_ptr<const DensityGenerator> generator_;
};

}  // namespace fimcrb
