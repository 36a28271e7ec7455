#pragma once

#include <cstdint>

#include <Eigen/Dense>

namespace fimcrb {

/// n i.i.d. Gamma(alpha, beta) observations parameterized by mean and
/// variance: alpha = m^2 / sigma2, beta = sigma2 / m, so m = alpha beta and
/// sigma2 = alpha beta^2. The density is not symmetric about m.
class GammaModel {
public:
    GammaModel(int n, double m, double sigma2);

    int n() const noexcept { return n_; }
    double m() const noexcept { return m_; }
    double sigma2() const noexcept { return sigma2_; }
    double alpha() const noexcept { return m_ * m_ / sigma2_; }
    double beta() const noexcept { return sigma2_ / m_; }

    /// Joint log-density of x (length n). Throws SupportError if any x_k <= 0.
    double log_density(const Eigen::VectorXd& x) const;

    /// Log-density at a different (m, sigma2), same n. Used by finite-difference
    /// oracles.
    static double log_density(const Eigen::VectorXd& x, double m, double sigma2);

    /// Scores in the (alpha, beta) parameterization:
    ///   s(alpha) = sum(ln x_k - psi(alpha) - ln beta),
    ///   s(beta)  = sum(x_k / beta^2 - alpha / beta).
    Eigen::Vector2d score_alpha_beta(const Eigen::VectorXd& x) const;

    /// Scores in (m, sigma2) via the chain rule through (alpha, beta).
    Eigen::Vector2d score(const Eigen::VectorXd& x) const;

    /// N x n matrix of draws; deterministic given seed.
    Eigen::MatrixXd sample(std::size_t count, std::uint64_t seed) const;

private:
    int n_;
    double m_;
    double sigma2_;
    double digamma_alpha_;
};

/// Convenience wrappers matching the operation names used by the CLI.
double gamma_log_density(const Eigen::VectorXd& x, double m, double sigma2);
Eigen::MatrixXd gamma_sample(double m, double sigma2, int n, std::size_t count, std::uint64_t seed);

}  // namespace fimcrb
