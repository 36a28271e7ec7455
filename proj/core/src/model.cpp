#include "fimcrb/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fimcrb/error.hpp"
#include "fimcrb/generators.hpp"

namespace fimcrb {

// ---------------------------------------------------------------------------
// ParameterVector

ParameterVector::ParameterVector(VectorXd theta1, VectorXd theta2, VectorXd theta3)
    : theta1_(std::move(theta1)), theta2_(std::move(theta2)), theta3_(std::move(theta3)) {
    if (theta2_.size() < 1) {
        throw ModelError("ParameterVector: theta2 must have at least one entry");
    }
}

VectorXd ParameterVector::stacked() const {
    VectorXd out(size());
    out << theta1_, theta2_, theta3_;
    return out;
}

ParameterVector ParameterVector::with_stacked(const VectorXd& stacked) const {
    if (stacked.size() != size()) {
        throw ModelError("ParameterVector::with_stacked: length mismatch");
    }
    return ParameterVector(stacked.head(q1()), stacked.segment(q1(), q2()), stacked.tail(q3()));
}

// ---------------------------------------------------------------------------
// MeanMap / CovarianceMap

MeanMap::MeanMap(std::string name, int dimension, int parameter_count, Evaluate evaluate,
                 Jacobian jacobian)
    : name_(std::move(name)),
      dimension_(dimension),
      parameter_count_(parameter_count),
      evaluate_(std::move(evaluate)),
      jacobian_(std::move(jacobian)) {
    if (dimension_ < 1 || parameter_count_ < 0) {
        throw ModelError("MeanMap '" + name_ + "': need n >= 1 and q1 >= 0");
    }
}

void MeanMap::check_arity(const VectorXd& theta1) const {
    if (theta1.size() != parameter_count_) {
        std::ostringstream msg;
        msg << "MeanMap '" << name_ << "': expected " << parameter_count_
            << " parameters, got " << theta1.size();
        throw ModelError(msg.str());
    }
}

VectorXd MeanMap::evaluate(const VectorXd& theta1) const {
    check_arity(theta1);
    VectorXd m = evaluate_(theta1);
    if (m.size() != dimension_) {
        throw ModelError("MeanMap '" + name_ + "': evaluate returned wrong length");
    }
    return m;
}

MatrixXd MeanMap::jacobian(const VectorXd& theta1) const {
    check_arity(theta1);
    MatrixXd j = jacobian_(theta1);
    if (j.rows() != dimension_ || j.cols() != parameter_count_) {
        throw ModelError("MeanMap '" + name_ + "': jacobian has wrong shape");
    }
    return j;
}

CovarianceMap::CovarianceMap(std::string name, int dimension, int parameter_count,
                             Evaluate evaluate, Jacobian jacobian_vec)
    : name_(std::move(name)),
      dimension_(dimension),
      parameter_count_(parameter_count),
      evaluate_(std::move(evaluate)),
      jacobian_(std::move(jacobian_vec)) {
    if (dimension_ < 1 || parameter_count_ < 1) {
        throw ModelError("CovarianceMap '" + name_ + "': need n >= 1 and q2 >= 1");
    }
}

void CovarianceMap::check_arity(const VectorXd& theta2) const {
    if (theta2.size() != parameter_count_) {
        std::ostringstream msg;
        msg << "CovarianceMap '" << name_ << "': expected " << parameter_count_
            << " parameters, got " << theta2.size();
        throw ModelError(msg.str());
    }
}

MatrixXd CovarianceMap::evaluate(const VectorXd& theta2) const {
    check_arity(theta2);
    MatrixXd sigma = evaluate_(theta2);
    if (sigma.rows() != dimension_ || sigma.cols() != dimension_) {
        throw ModelError("CovarianceMap '" + name_ + "': evaluate returned wrong shape");
    }
    if (asymmetry(sigma) >= 1e-12) {
        throw ModelError("CovarianceMap '" + name_ + "': covariance is not symmetric");
    }
    if (!(min_eigenvalue(sigma) > 0.0)) {
        throw ModelError("CovarianceMap '" + name_ + "': covariance is not positive definite");
    }
    return sigma;
}

MatrixXd CovarianceMap::jacobian_vec(const VectorXd& theta2) const {
    check_arity(theta2);
    MatrixXd j = jacobian_(theta2);
    if (j.rows() != dimension_ * dimension_ || j.cols() != parameter_count_) {
        throw ModelError("CovarianceMap '" + name_ + "': jacobian_vec has wrong shape");
    }
    return j;
}

// ---------------------------------------------------------------------------
// Built-in parameterizations

namespace {

void require_dimension(int n, const char* fn) {
    if (n < 1) {
        throw DomainError("n", std::string(fn) + ": dimension must be >= 1");
    }
}

}  // namespace

std::pair<MeanMap, CovarianceMap> builtin_iid_scalar(int n) {
    require_dimension(n, "builtin_iid_scalar");
    MeanMap mean(
        "iid-scalar-mean", n, 1,
        [n](const VectorXd& t) { return VectorXd::Constant(n, t(0)); },
        [n](const VectorXd&) { return MatrixXd::Ones(n, 1); });
    CovarianceMap cov(
        "iid-scalar-variance", n, 1,
        [n](const VectorXd& t) -> MatrixXd {
            if (!(t(0) > 0.0)) {
                throw DomainError("sigma2", "iid-scalar-variance: sigma2 must be > 0, got " +
                                                std::to_string(t(0)));
            }
            return t(0) * MatrixXd::Identity(n, n);
        },
        [n](const VectorXd&) -> MatrixXd { return vec(MatrixXd::Identity(n, n)); });
    return {std::move(mean), std::move(cov)};
}

MeanMap builtin_full_mean(int n) {
    require_dimension(n, "builtin_full_mean");
    return MeanMap(
        "full-mean", n, n, [](const VectorXd& t) { return t; },
        [n](const VectorXd&) -> MatrixXd { return MatrixXd::Identity(n, n); });
}

MeanMap builtin_linear_mean(MatrixXd design) {
    if (design.rows() < 1) {
        throw ModelError("builtin_linear_mean: design matrix has no rows");
    }
    const int n = static_cast<int>(design.rows());
    const int q = static_cast<int>(design.cols());
    return MeanMap(
        "linear-mean", n, q, [design](const VectorXd& t) -> VectorXd { return design * t; },
        [design](const VectorXd&) { return design; });
}

CovarianceMap builtin_symmetric_covariance(int n) {
    require_dimension(n, "builtin_symmetric_covariance");
    const int q = n * (n + 1) / 2;
    auto evaluate = [n](const VectorXd& t) {
        MatrixXd s(n, n);
        int k = 0;
        for (int j = 0; j < n; ++j) {
            for (int i = j; i < n; ++i, ++k) {
                s(i, j) = t(k);
                s(j, i) = t(k);
            }
        }
        return s;
    };
    auto jacobian = [n, q](const VectorXd&) {
        MatrixXd jac = MatrixXd::Zero(n * n, q);
        int k = 0;
        for (int j = 0; j < n; ++j) {
            for (int i = j; i < n; ++i, ++k) {
                jac(i + j * n, k) = 1.0;
                jac(j + i * n, k) = 1.0;
            }
        }
        return jac;
    };
    return CovarianceMap("symmetric-covariance", n, q, evaluate, jacobian);
}

CovarianceMap builtin_ar1_covariance(int n) {
    require_dimension(n, "builtin_ar1_covariance");
    auto check = [](const VectorXd& t) {
        if (!(t(0) > 0.0)) {
            throw DomainError("sigma2", "ar1-covariance: sigma2 must be > 0");
        }
        if (!(std::abs(t(1)) < 1.0)) {
            throw DomainError("rho", "ar1-covariance: |rho| must be < 1");
        }
    };
    auto evaluate = [n, check](const VectorXd& t) {
        check(t);
        MatrixXd s(n, n);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                s(i, j) = t(0) * std::pow(t(1), std::abs(i - j));
            }
        }
        return s;
    };
    auto jacobian = [n, check](const VectorXd& t) {
        check(t);
        MatrixXd jac(n * n, 2);
        for (int j = 0; j < n; ++j) {
            for (int i = 0; i < n; ++i) {
                const int lag = std::abs(i - j);
                jac(i + j * n, 0) = std::pow(t(1), lag);
                jac(i + j * n, 1) = lag == 0 ? 0.0 : t(0) * lag * std::pow(t(1), lag - 1);
            }
        }
        return jac;
    };
    return CovarianceMap("ar1-covariance", n, 2, evaluate, jacobian);
}

// ---------------------------------------------------------------------------
// Jacobian validation

namespace {

// vec_eval: theta -> vector image; jac_eval: theta -> analytic Jacobian.
template <typename VecEval, typename JacEval>
std::vector<JacobianViolation> check_points(VecEval vec_eval, JacEval jac_eval,
                                            const std::vector<VectorXd>& test_points, double tol) {
    if (test_points.empty()) {
        throw ModelError("validate_jacobians: test_points must be nonempty");
    }
    if (!(tol > 0.0)) {
        throw ModelError("validate_jacobians: tol must be > 0");
    }
    std::vector<JacobianViolation> out;
    for (std::size_t p = 0; p < test_points.size(); ++p) {
        const VectorXd& theta = test_points[p];
        MatrixXd analytic;
        MatrixXd numeric;
        try {
            analytic = jac_eval(theta);
            numeric.resize(analytic.rows(), theta.size());
            for (Eigen::Index i = 0; i < theta.size(); ++i) {
                const double h = 1e-5 * (1.0 + std::abs(theta(i)));
                VectorXd up = theta;
                VectorXd dn = theta;
                up(i) += h;
                dn(i) -= h;
                numeric.col(i) = (vec_eval(up) - vec_eval(dn)) / (2.0 * h);
            }
        } catch (const std::exception& e) {
            JacobianViolation v;
            v.point = p;
            v.message = std::string("evaluation failed: ") + e.what();
            out.push_back(std::move(v));
            continue;
        }
        for (Eigen::Index c = 0; c < analytic.cols(); ++c) {
            for (Eigen::Index r = 0; r < analytic.rows(); ++r) {
                const double a = analytic(r, c);
                const double nval = numeric(r, c);
                const double scale = std::max(1.0, std::abs(nval));
                const double rel = std::abs(a - nval) / scale;
                if (!(rel <= tol)) {
                    out.push_back({p, r, c, a, nval, rel, "analytic and numeric Jacobians differ"});
                }
            }
        }
    }
    return out;
}

template <typename VecEval>
std::vector<std::pair<std::size_t, std::size_t>> identifiability_impl(
    VecEval vec_eval, const std::vector<VectorXd>& grid, double tol) {
    std::vector<VectorXd> images;
    images.reserve(grid.size());
    for (const auto& g : grid) {
        images.push_back(vec_eval(g));
    }
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        for (std::size_t j = i + 1; j < grid.size(); ++j) {
            const bool same_point = (grid[i] - grid[j]).cwiseAbs().maxCoeff() <= tol;
            const bool same_image = (images[i] - images[j]).cwiseAbs().maxCoeff() <= tol;
            if (same_image && !same_point) {
                out.emplace_back(i, j);
            }
        }
    }
    return out;
}

}  // namespace

std::vector<JacobianViolation> validate_jacobians(const MeanMap& map,
                                                  const std::vector<VectorXd>& test_points,
                                                  double tol) {
    return check_points([&](const VectorXd& t) { return map.evaluate(t); },
                        [&](const VectorXd& t) { return map.jacobian(t); }, test_points, tol);
}

std::vector<JacobianViolation> validate_jacobians(const CovarianceMap& map,
                                                  const std::vector<VectorXd>& test_points,
                                                  double tol) {
    return check_points([&](const VectorXd& t) { return vec(map.evaluate(t)); },
                        [&](const VectorXd& t) { return map.jacobian_vec(t); }, test_points, tol);
}

std::vector<std::pair<std::size_t, std::size_t>> identifiability_violations(
    const MeanMap& map, const std::vector<VectorXd>& grid, double tol) {
    return identifiability_impl([&](const VectorXd& t) { return map.evaluate(t); }, grid, tol);
}

std::vector<std::pair<std::size_t, std::size_t>> identifiability_violations(
    const CovarianceMap& map, const std::vector<VectorXd>& grid, double tol) {
    return identifiability_impl([&](const VectorXd& t) { return vec(map.evaluate(t)); }, grid,
                                tol);
}

// ---------------------------------------------------------------------------
// LocationScaleModel

LocationScaleModel::LocationScaleModel(MeanMap mean_map, CovarianceMap cov_map,
                                       std::shared_ptr<const DensityGenerator> generator)
    : mean_map_(std::move(mean_map)), cov_map_(std::move(cov_map)), generator_(std::move(generator)) {
    if (!generator_) {
        throw ModelError("LocationScaleModel: generator is null");
    }
    if (mean_map_.dimension() != cov_map_.dimension() ||
        mean_map_.dimension() != generator_->dimension()) {
        std::ostringstream msg;
        msg << "LocationScaleModel: dimension mismatch (mean " << mean_map_.dimension()
            << ", covariance " << cov_map_.dimension() << ", generator "
            << generator_->dimension() << ")";
        throw ModelError(msg.str());
    }
}

double LocationScaleModel::log_density(const VectorXd& theta1, const VectorXd& theta2,
                                       const VectorXd& x) const {
    const VectorXd m = mean_map_.evaluate(theta1);
    const MatrixXd sigma = cov_map_.evaluate(theta2);
    Eigen::LLT<MatrixXd> llt(sigma);
    const VectorXd d = x - m;
    const VectorXd z = llt.matrixL().solve(d);
    const double logdet = 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
    return -0.5 * logdet + generator_->log_g(z.squaredNorm());
}

}  // namespace fimcrb
