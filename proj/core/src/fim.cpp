#include "fimcrb/fim.hpp"

#include <cmath>
#include <sstream>

#include "fimcrb/error.hpp"
#include "fimcrb/radial.hpp"
#include "fimcrb/special_functions.hpp"

namespace fimcrb {

const char* to_string(Block block) {
    switch (block) {
        case Block::theta1:
            return "theta1";
        case Block::theta2:
            return "theta2";
        case Block::theta3:
            return "theta3";
    }
    return "?";
}

const char* to_string(EllipticalCoefficients::Method method) {
    return method == EllipticalCoefficients::Method::closed_form ? "closed-form" : "quadrature";
}

Eigen::Index BlockIndex::offset(Block b) const noexcept {
    switch (b) {
        case Block::theta1:
            return 0;
        case Block::theta2:
            return q1;
        case Block::theta3:
            return q1 + q2;
    }
    return 0;
}

Eigen::Index BlockIndex::size(Block b) const noexcept {
    switch (b) {
        case Block::theta1:
            return q1;
        case Block::theta2:
            return q2;
        case Block::theta3:
            return q3;
    }
    return 0;
}

// ---------------------------------------------------------------------------

FimMatrix::FimMatrix(MatrixXd matrix, BlockIndex index) : index_(index) {
    if (matrix.rows() != matrix.cols() || matrix.rows() != index.total()) {
        std::ostringstream msg;
        msg << "FimMatrix: " << matrix.rows() << "x" << matrix.cols()
            << " matrix does not match block sizes (" << index.q1 << ", " << index.q2 << ", "
            << index.q3 << ")";
        throw ModelError(msg.str());
    }
    if (!matrix.allFinite()) {
        throw NumericError("FimMatrix: matrix has non-finite entries");
    }
    const double scale = matrix.size() ? std::max(1.0, matrix.cwiseAbs().maxCoeff()) : 1.0;
    if (asymmetry(matrix) > 1e-12 * scale) {
        throw ModelError("FimMatrix: matrix is not symmetric");
    }
    matrix_ = 0.5 * (matrix + matrix.transpose());
    if (matrix_.size() > 0) {
        const double norm = matrix_.cwiseAbs().maxCoeff();
        const double lambda_min = min_eigenvalue(matrix_);
        if (lambda_min < -1e-10 * norm * static_cast<double>(matrix_.rows())) {
            std::ostringstream msg;
            msg << "FimMatrix: matrix is not positive semi-definite (smallest eigenvalue "
                << lambda_min << ")";
            throw ModelError(msg.str());
        }
    }
}

MatrixXd FimMatrix::block(Block row, Block col) const {
    return matrix_.block(index_.offset(row), index_.offset(col), index_.size(row), index_.size(col));
}

FimMatrix FimMatrix::replicated(double count) const {
    if (!(count > 0.0)) {
        throw DomainError("count", "FimMatrix::replicated: count must be > 0");
    }
    return FimMatrix(count * matrix_, index_);
}

// ---------------------------------------------------------------------------

MatrixXd covariance_information(const MatrixXd& jacobian_vec, const MatrixXd& sigma_inverse,
                                double a1, double a2, KroneckerRoute route) {
    const Eigen::Index n = sigma_inverse.rows();
    if (jacobian_vec.rows() != n * n) {
        throw ModelError("covariance_information: Jacobian has wrong row count");
    }
    const Eigen::Index q = jacobian_vec.cols();
    if (route == KroneckerRoute::automatic) {
        route = n <= 8 ? KroneckerRoute::materialized : KroneckerRoute::contracted;
    }

    const VectorXd proj = jacobian_vec.transpose() * vec(sigma_inverse);
    MatrixXd out = a2 * proj * proj.transpose();
    if (route == KroneckerRoute::materialized) {
        const MatrixXd kron = kronecker(sigma_inverse, sigma_inverse);
        out += a1 * jacobian_vec.transpose() * kron * jacobian_vec;
    } else {
        std::vector<MatrixXd> whitened;
        whitened.reserve(static_cast<std::size_t>(q));
        for (Eigen::Index i = 0; i < q; ++i) {
            whitened.push_back(sigma_inverse * unvec(jacobian_vec.col(i), n));
        }
        for (Eigen::Index i = 0; i < q; ++i) {
            for (Eigen::Index j = 0; j <= i; ++j) {
                // tr(B_i B_j) with B = Sigma^{-1} A
                const double tr = whitened[i].cwiseProduct(whitened[j].transpose()).sum();
                out(i, j) += a1 * tr;
                if (i != j) {
                    out(j, i) += a1 * tr;
                }
            }
        }
    }
    return 0.5 * (out + out.transpose());
}

namespace {

FimMatrix assemble_location_scale(const MeanMap& mean_map, const CovarianceMap& cov_map,
                                  double a0, double a1, double a2, const VectorXd& theta1,
                                  const VectorXd& theta2) {
    if (mean_map.dimension() != cov_map.dimension()) {
        throw ModelError("FIM assembly: mean and covariance maps have different dimensions");
    }
    const MatrixXd sigma = cov_map.evaluate(theta2);
    const Eigen::LLT<MatrixXd> llt(sigma);
    if (llt.info() != Eigen::Success) {
        throw ModelError("FIM assembly: covariance is not positive definite");
    }
    const MatrixXd sigma_inv = llt.solve(MatrixXd::Identity(sigma.rows(), sigma.cols()));
    const Eigen::Index q1 = mean_map.parameter_count();
    const Eigen::Index q2 = cov_map.parameter_count();

    MatrixXd out = MatrixXd::Zero(q1 + q2, q1 + q2);
    if (q1 > 0) {
        const MatrixXd jm = mean_map.jacobian(theta1);
        out.topLeftCorner(q1, q1) = a0 * jm.transpose() * llt.solve(jm);
    }
    out.bottomRightCorner(q2, q2) =
        covariance_information(cov_map.jacobian_vec(theta2), sigma_inv, a1, a2);
    return FimMatrix(std::move(out), BlockIndex{q1, q2, 0});
}

}  // namespace

FimMatrix slepian_bangs_gaussian(const MeanMap& mean_map, const CovarianceMap& cov_map,
                                 const VectorXd& theta1, const VectorXd& theta2) {
    return assemble_location_scale(mean_map, cov_map, 1.0, 0.5, 0.0, theta1, theta2);
}

FimMatrix elliptical_fim(const MeanMap& mean_map, const CovarianceMap& cov_map,
                         const EllipticalCoefficients& coefficients, const VectorXd& theta1,
                         const VectorXd& theta2) {
    if (coefficients.n != mean_map.dimension()) {
        throw ModelError("elliptical_fim: coefficients were computed for n = " +
                         std::to_string(coefficients.n) + " but the model has n = " +
                         std::to_string(mean_map.dimension()));
    }
    if (mean_map.parameter_count() > 0 && !std::isfinite(coefficients.a0)) {
        throw NumericError(
            coefficients.has_a0()
                ? "elliptical_fim: a0 is infinite (mean information diverges for this generator)"
                : "elliptical_fim: a0 is unavailable; use quadrature coefficients when q1 > 0");
    }
    const double a0 = mean_map.parameter_count() > 0 ? coefficients.a0 : 0.0;
    return assemble_location_scale(mean_map, cov_map, a0, coefficients.a1, coefficients.a2,
                                   theta1, theta2);
}

// ---------------------------------------------------------------------------

EllipticalCoefficients elliptical_coefficients_quadrature(const DensityGenerator& generator,
                                                          QuadratureOptions options) {
    const RadialQuadrature quad(generator, options);
    const double n = generator.dimension();
    EllipticalCoefficients out;
    out.n = generator.dimension();
    out.method = EllipticalCoefficients::Method::quadrature;

    if (generator.mean_information_finite()) {
        // Q phi^2 = (Q phi)^2 / Q
        const QuadratureResult r = quad.try_expectation_exp(
            [&](double v) { return 2.0 * generator.log_t_phi_at_log(v) - v; });
        if (std::isinf(r.value)) {
            out.a0 = std::numeric_limits<double>::infinity();
        } else if (!r.converged) {
            throw NumericError("a0 quadrature did not converge for " + generator.family(), r.error);
        } else {
            out.a0 = r.value / n;
            out.a0_error = r.error / n;
        }
    } else {
        out.a0 = std::numeric_limits<double>::infinity();
    }

    const QuadratureResult r1 =
        quad.try_expectation_exp([&](double v) { return 2.0 * generator.log_t_phi_at_log(v); });
    if (!r1.converged) {
        throw NumericError("a1 quadrature did not converge for " + generator.family(), r1.error);
    }
    out.a1 = 0.5 * r1.value / (n * (n + 2.0));
    out.a1_error = 0.5 * r1.error / (n * (n + 2.0));
    out.a2 = 0.25 * (2.0 * out.a1 - 1.0);
    return out;
}

EllipticalCoefficients gg_coefficients_closed_form(int n, double s) {
    if (!(s > 0.0) || !std::isfinite(s)) {
        throw DomainError("s", "generalized Gaussian exponent s must be > 0");
    }
    if (n < 1) {
        throw DomainError("n", "dimension must be >= 1");
    }
    EllipticalCoefficients out;
    out.n = n;
    out.method = EllipticalCoefficients::Method::closed_form;
    out.a1 = (n + 2.0 * s) / (2.0 * (n + 2.0));
    out.a2 = (s - 1.0) / (2.0 * (n + 2.0));
    return out;
}

// ---------------------------------------------------------------------------

FimMatrix gamma_fim(double m, double sigma2, int n) {
    if (!(m > 0.0)) {
        throw DomainError("m", "gamma_fim: m must be > 0");
    }
    if (!(sigma2 > 0.0)) {
        throw DomainError("sigma2", "gamma_fim: sigma2 must be > 0");
    }
    if (n < 1) {
        throw DomainError("n", "gamma_fim: n must be >= 1");
    }
    const double alpha = m * m / sigma2;
    const double excess = trigamma_excess(alpha);  // alpha psi'(alpha) - 1
    const double s4 = sigma2 * sigma2;
    MatrixXd fim(2, 2);
    fim(0, 0) = n * (4.0 * excess + 1.0) / sigma2;
    fim(0, 1) = -n * (2.0 * m / s4) * excess;
    fim(1, 0) = fim(0, 1);
    fim(1, 1) = n * (m * m / (s4 * sigma2)) * excess;
    return FimMatrix(std::move(fim), BlockIndex{1, 1, 0});
}

MatrixXd gamma_fim_alpha_beta(double alpha, double beta, int n) {
    if (!(alpha > 0.0) || !(beta > 0.0)) {
        throw DomainError("alpha", "gamma_fim_alpha_beta: alpha and beta must be > 0");
    }
    MatrixXd fim(2, 2);
    fim << n * trigamma(alpha), n / beta, n / beta, n * alpha / (beta * beta);
    return fim;
}

// ---------------------------------------------------------------------------

double a1_via_phi_prime(const DensityGenerator& generator, QuadratureOptions options) {
    if (!generator.has_phi_prime()) {
        throw ModelError("a1_via_phi_prime: generator '" + generator.family() +
                         "' does not provide phi'");
    }
    const RadialQuadrature quad(generator, options);
    const double n = generator.dimension();
    const double e = quad.expectation_log(
        [&](double v) { return generator.t2_phi_prime_at_log(v); }, "E[Q^2 phi'(Q)]");
    return 0.5 + e / (n * (n + 2.0));
}

double compound_gaussian_a1(const DensityGenerator& generator, QuadratureOptions options) {
    if (!generator.is_compound_gaussian()) {
        throw ModelError("compound_gaussian_a1: generator '" + generator.family() +
                         "' is not a compound-Gaussian mixture");
    }
    const double a1 = a1_via_phi_prime(generator, options);
    if (a1 > 0.5 + 1e-10) {
        std::ostringstream msg;
        msg << "compound_gaussian_a1: a1 = " << a1 << " exceeds 1/2";
        throw NumericError(msg.str());
    }
    return a1;
}

}  // namespace fimcrb
