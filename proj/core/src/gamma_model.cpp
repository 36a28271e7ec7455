#include "fimcrb/gamma_model.hpp"

#include <cmath>
#include <random>
#include <string>

#include "fimcrb/error.hpp"
#include "fimcrb/rng.hpp"
#include "fimcrb/special_functions.hpp"

namespace fimcrb {
namespace {

void check_parameters(double m, double sigma2) {
    if (!(m > 0.0) || !std::isfinite(m)) {
        throw DomainError("m", "Gamma model needs m > 0, got " + std::to_string(m));
    }
    if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) {
        throw DomainError("sigma2", "Gamma model needs sigma2 > 0, got " + std::to_string(sigma2));
    }
}

}  // namespace

GammaModel::GammaModel(int n, double m, double sigma2) : n_(n), m_(m), sigma2_(sigma2) {
    if (n < 1) {
        throw DomainError("n", "Gamma model needs n >= 1");
    }
    check_parameters(m, sigma2);
    digamma_alpha_ = digamma(alpha());
}

double GammaModel::log_density(const Eigen::VectorXd& x, double m, double sigma2) {
    check_parameters(m, sigma2);
    const double alpha = m * m / sigma2;
    const double beta = sigma2 / m;
    const double per_obs = -std::lgamma(alpha) - alpha * std::log(beta);
    double total = 0.0;
    for (Eigen::Index k = 0; k < x.size(); ++k) {
        if (!(x(k) > 0.0)) {
            throw SupportError("Gamma log-density: observation " + std::to_string(k) +
                               " is outside (0, inf)");
        }
        total += per_obs + (alpha - 1.0) * std::log(x(k)) - x(k) / beta;
    }
    return total;
}

double GammaModel::log_density(const Eigen::VectorXd& x) const {
    if (x.size() != n_) {
        throw ModelError("Gamma log-density: expected " + std::to_string(n_) + " observations");
    }
    return log_density(x, m_, sigma2_);
}

Eigen::Vector2d GammaModel::score_alpha_beta(const Eigen::VectorXd& x) const {
    const double a = alpha();
    const double b = beta();
    double s_alpha = 0.0;
    double s_beta = 0.0;
    for (Eigen::Index k = 0; k < x.size(); ++k) {
        if (!(x(k) > 0.0)) {
            throw SupportError("Gamma score: observation outside (0, inf)");
        }
        s_alpha += std::log(x(k)) - digamma_alpha_ - std::log(b);
        s_beta += x(k) / (b * b) - a / b;
    }
    return {s_alpha, s_beta};
}

Eigen::Vector2d GammaModel::score(const Eigen::VectorXd& x) const {
    const Eigen::Vector2d sab = score_alpha_beta(x);
    // d(alpha, beta) / d(m, sigma2)
    const double da_dm = 2.0 * m_ / sigma2_;
    const double da_ds = -m_ * m_ / (sigma2_ * sigma2_);
    const double db_dm = -sigma2_ / (m_ * m_);
    const double db_ds = 1.0 / m_;
    return {sab(0) * da_dm + sab(1) * db_dm, sab(0) * da_ds + sab(1) * db_ds};
}

Eigen::MatrixXd GammaModel::sample(std::size_t count, std::uint64_t seed) const {
    Eigen::MatrixXd out(static_cast<Eigen::Index>(count), n_);
    const std::size_t chunks = (count + kChunkSize - 1) / kChunkSize;
    const double a = alpha();
    const double b = beta();
    for_each_chunk(chunks, [&](std::size_t c) {
        Rng rng = make_chunk_rng(seed, c);
        std::gamma_distribution<double> gamma(a, b);
        const std::size_t end = std::min(count, (c + 1) * kChunkSize);
        for (std::size_t i = c * kChunkSize; i < end; ++i) {
            for (int k = 0; k < n_; ++k) {
                out(static_cast<Eigen::Index>(i), k) = gamma(rng);
            }
        }
    });
    return out;
}

double gamma_log_density(const Eigen::VectorXd& x, double m, double sigma2) {
    return GammaModel::log_density(x, m, sigma2);
}

Eigen::MatrixXd gamma_sample(double m, double sigma2, int n, std::size_t count, std::uint64_t seed) {
    return GammaModel(n, m, sigma2).sample(count, seed);
}

}  // namespace fimcrb
