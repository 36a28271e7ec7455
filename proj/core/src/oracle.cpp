#include "fimcrb/oracle.hpp"

#include <cmath>
#include <sstream>

#include "fimcrb/error.hpp"
#include "fimcrb/generators.hpp"
#include "fimcrb/radial.hpp"

namespace fimcrb {

// ---------------------------------------------------------------------------
// EllipticalScoreModel

EllipticalScoreModel::EllipticalScoreModel(LocationScaleModel model, VectorXd theta1,
                                           VectorXd theta2)
    : model_(std::move(model)), theta1_(std::move(theta1)), theta2_(std::move(theta2)) {
    mean_ = model_.mean_map().evaluate(theta1_);
    mean_jacobian_ = model_.mean_map().jacobian(theta1_);
    const MatrixXd sigma = model_.cov_map().evaluate(theta2_);
    root_ = cholesky_factor(sigma, "EllipticalScoreModel");
    const Eigen::LLT<MatrixXd> llt(sigma);
    sigma_inverse_ = llt.solve(MatrixXd::Identity(sigma.rows(), sigma.cols()));
    sigma_inverse_ = 0.5 * (sigma_inverse_ + sigma_inverse_.transpose());
    cov_jacobian_ = model_.cov_map().jacobian_vec(theta2_);
    trace_term_ = cov_jacobian_.transpose() * vec(sigma_inverse_);
}

std::string EllipticalScoreModel::name() const {
    std::ostringstream os;
    os << model_.generator().family() << "(n=" << model_.dimension();
    for (const auto& [key, value] : model_.generator().shape()) {
        os << ", " << key << "=" << value;
    }
    os << ")";
    return os.str();
}

VectorXd EllipticalScoreModel::parameters() const {
    VectorXd out(theta1_.size() + theta2_.size());
    out << theta1_, theta2_;
    return out;
}

void EllipticalScoreModel::sample(Rng& rng, VectorXd& x) const {
    VectorXd u(model_.dimension());
    sample_unit_sphere(rng, u);
    const double radius = std::sqrt(model_.generator().sample_q(rng));
    x = mean_ + radius * (root_ * u);
}

VectorXd EllipticalScoreModel::score(const VectorXd& x) const {
    const Eigen::Index n = model_.dimension();
    const Eigen::Index q1 = model_.q1();
    const Eigen::Index q2 = model_.q2();
    const VectorXd d = x - mean_;
    const VectorXd w = sigma_inverse_ * d;
    const double q = d.dot(w);
    const double phi = model_.generator().phi(q);

    VectorXd out(q1 + q2);
    if (q1 > 0) {
        out.head(q1) = phi * (mean_jacobian_.transpose() * w);
    }
    for (Eigen::Index i = 0; i < q2; ++i) {
        // J(:, i)^T vec(w w^T)
        double quad = 0.0;
        for (Eigen::Index b = 0; b < n; ++b) {
            quad += w(b) * cov_jacobian_.col(i).segment(b * n, n).dot(w);
        }
        out(q1 + i) = -0.5 * trace_term_(i) + 0.5 * phi * quad;
    }
    return out;
}

double EllipticalScoreModel::log_density(const VectorXd& theta, const VectorXd& x) const {
    const Eigen::Index q1 = model_.q1();
    return model_.log_density(theta.head(q1), theta.segment(q1, model_.q2()), x);
}

VectorXd analytic_scores_elliptical(const LocationScaleModel& model, const VectorXd& theta1,
                                    const VectorXd& theta2, const VectorXd& x) {
    return EllipticalScoreModel(model, theta1, theta2).score(x);
}

// ---------------------------------------------------------------------------
// GammaScoreModel

GammaScoreModel::GammaScoreModel(GammaModel model, Parameterization parameterization)
    : model_(model), parameterization_(parameterization) {}

std::string GammaScoreModel::name() const {
    std::ostringstream os;
    os << "gamma(n=" << model_.n() << ", m=" << model_.m() << ", sigma2=" << model_.sigma2()
       << (parameterization_ == Parameterization::alpha_beta ? ", alpha-beta" : "") << ")";
    return os.str();
}

VectorXd GammaScoreModel::parameters() const {
    if (parameterization_ == Parameterization::alpha_beta) {
        return Eigen::Vector2d(model_.alpha(), model_.beta());
    }
    return Eigen::Vector2d(model_.m(), model_.sigma2());
}

void GammaScoreModel::sample(Rng& rng, VectorXd& x) const {
    std::gamma_distribution<double> gamma(model_.alpha(), model_.beta());
    x.resize(model_.n());
    for (Eigen::Index k = 0; k < x.size(); ++k) {
        x(k) = gamma(rng);
    }
}

VectorXd GammaScoreModel::score(const VectorXd& x) const {
    if (parameterization_ == Parameterization::alpha_beta) {
        return model_.score_alpha_beta(x);
    }
    return model_.score(x);
}

double GammaScoreModel::log_density(const VectorXd& theta, const VectorXd& x) const {
    if (parameterization_ == Parameterization::alpha_beta) {
        // (alpha, beta) -> (m, sigma2) = (alpha beta, alpha beta^2)
        return GammaModel::log_density(x, theta(0) * theta(1), theta(0) * theta(1) * theta(1));
    }
    return GammaModel::log_density(x, theta(0), theta(1));
}

// ---------------------------------------------------------------------------
// Finite differences

FiniteDifferenceScore finite_difference_score(
    const std::function<double(const VectorXd&)>& log_density, const VectorXd& theta) {
    FiniteDifferenceScore out;
    out.score.resize(theta.size());
    for (Eigen::Index i = 0; i < theta.size(); ++i) {
        const double h = 1e-5 * (1.0 + std::abs(theta(i)));
        VectorXd up = theta;
        VectorXd dn = theta;
        up(i) += h;
        dn(i) -= h;
        double fu = std::numeric_limits<double>::quiet_NaN();
        double fd = std::numeric_limits<double>::quiet_NaN();
        std::string reason;
        try {
            fu = log_density(up);
            fd = log_density(dn);
        } catch (const std::exception& e) {
            reason = e.what();
        }
        if (!std::isfinite(fu) || !std::isfinite(fd)) {
            std::ostringstream msg;
            msg << "coordinate " << i << ": non-finite log-density at theta +/- h"
                << (reason.empty() ? "" : " (" + reason + ")");
            out.failures.push_back(msg.str());
            out.score(i) = std::numeric_limits<double>::quiet_NaN();
            continue;
        }
        out.score(i) = (fu - fd) / (2.0 * h);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Empirical FIM

namespace {

struct ChunkSums {
    VectorXd s;
    VectorXd s2;
    MatrixXd ss;
    MatrixXd ss2;
};

}  // namespace

EmpiricalFim empirical_fim(const ScoreModel& model, std::size_t samples, std::uint64_t seed,
                           unsigned threads) {
    if (samples < kMinimumOracleSamples) {
        throw DomainError("N", "empirical_fim: need at least 10^4 samples, got " +
                                   std::to_string(samples));
    }
    const Eigen::Index p = model.blocks().total();
    const std::size_t chunks = (samples + kChunkSize - 1) / kChunkSize;
    std::vector<ChunkSums> partial(chunks);

    for_each_chunk(
        chunks,
        [&](std::size_t c) {
            ChunkSums acc{VectorXd::Zero(p), VectorXd::Zero(p), MatrixXd::Zero(p, p),
                          MatrixXd::Zero(p, p)};
            Rng rng = make_chunk_rng(seed, c);
            VectorXd x(model.observation_dimension());
            const std::size_t begin = c * kChunkSize;
            const std::size_t end = std::min(samples, begin + kChunkSize);
            for (std::size_t i = begin; i < end; ++i) {
                model.sample(rng, x);
                VectorXd s;
                try {
                    s = model.score(x);
                } catch (const std::exception& e) {
                    throw NumericError("score evaluation failed at sample " + std::to_string(i) +
                                       ": " + e.what());
                }
                if (!s.allFinite()) {
                    throw NumericError("non-finite score at sample " + std::to_string(i));
                }
                const MatrixXd outer = s * s.transpose();
                acc.s += s;
                acc.s2 += s.cwiseAbs2();
                acc.ss += outer;
                acc.ss2 += outer.cwiseAbs2();
            }
            partial[c] = std::move(acc);
        },
        threads);

    VectorXd s = VectorXd::Zero(p);
    VectorXd s2 = VectorXd::Zero(p);
    MatrixXd ss = MatrixXd::Zero(p, p);
    MatrixXd ss2 = MatrixXd::Zero(p, p);
    for (const auto& part : partial) {
        s += part.s;
        s2 += part.s2;
        ss += part.ss;
        ss2 += part.ss2;
    }
    const double count = static_cast<double>(samples);

    EmpiricalFim out;
    out.blocks = model.blocks();
    out.samples = samples;
    out.seed = seed;
    out.estimate = ss / count;
    out.estimate = 0.5 * (out.estimate + out.estimate.transpose());
    const MatrixXd var = ((ss2 / count) - out.estimate.cwiseAbs2()).cwiseMax(0.0) * (count / (count - 1.0));
    out.standard_error = (var / count).cwiseSqrt();
    out.mean_score = s / count;
    const VectorXd svar = ((s2 / count) - out.mean_score.cwiseAbs2()).cwiseMax(0.0) * (count / (count - 1.0));
    out.mean_score_se = (svar / count).cwiseSqrt();
    return out;
}

OracleComparison compare_to_target(const MatrixXd& estimate, const MatrixXd& standard_error,
                                   const MatrixXd& target, double z_threshold) {
    if (estimate.rows() != target.rows() || estimate.cols() != target.cols() ||
        standard_error.rows() != target.rows() || standard_error.cols() != target.cols()) {
        throw ModelError("compare_to_target: shape mismatch");
    }
    OracleComparison out;
    out.estimate = estimate;
    out.standard_error = standard_error;
    out.target = target;
    out.z_threshold = z_threshold;
    out.z_scores = MatrixXd::Zero(target.rows(), target.cols());
    for (Eigen::Index i = 0; i < target.rows(); ++i) {
        for (Eigen::Index j = 0; j < target.cols(); ++j) {
            const double diff = estimate(i, j) - target(i, j);
            const double se = standard_error(i, j);
            double z = 0.0;
            if (se > 0.0) {
                z = diff / se;
            } else if (std::abs(diff) > 1e-12 * std::max(1.0, std::abs(target(i, j)))) {
                z = std::numeric_limits<double>::infinity();
            }
            out.z_scores(i, j) = z;
            out.max_abs_z = std::max(out.max_abs_z, std::abs(z));
        }
    }
    out.passed = out.max_abs_z <= z_threshold;
    return out;
}

// ---------------------------------------------------------------------------
// xi statistic

bool XiStatistic::inequality_holds() const {
    const bool quad_ok = quadrature_min_excess >= -1e-8;
    const bool mc_ok = samples == 0 || mc_min_excess >= -4.0 * mc_se_scale;
    return quad_ok && mc_ok;
}

XiStatistic xi_outer_expectation(const DensityGenerator& generator, std::size_t samples,
                                 std::uint64_t seed, QuadratureOptions options) {
    const int n = generator.dimension();
    const MatrixXd identity = MatrixXd::Identity(n, n);
    const RadialQuadrature quad(generator, options);

    XiStatistic out;
    out.n = n;
    const EllipticalCoefficients coeffs = elliptical_coefficients_quadrature(generator, options);
    out.quadrature_estimate = coeffs.a0 * identity;
    out.e_q_phi = quad.expectation_exp([&](double v) { return generator.log_t_phi_at_log(v); },
                                        "E[Q phi(Q)]");
    out.ibp_identity_error = std::abs(out.e_q_phi / n - 1.0);
    out.quadrature_min_excess = coeffs.a0 - 1.0;

    if (samples == 0) {
        return out;
    }
    if (samples < kMinimumOracleSamples) {
        throw DomainError("N", "xi_outer_expectation: need 0 or at least 10^4 samples");
    }
    const std::size_t chunks = (samples + kChunkSize - 1) / kChunkSize;
    struct Sums {
        MatrixXd xx, xx2, yx, yx2;
    };
    std::vector<Sums> partial(chunks);
    for_each_chunk(chunks, [&](std::size_t c) {
        Sums acc{MatrixXd::Zero(n, n), MatrixXd::Zero(n, n), MatrixXd::Zero(n, n),
                 MatrixXd::Zero(n, n)};
        Rng rng = make_chunk_rng(seed, c);
        VectorXd u(n);
        const std::size_t end = std::min(samples, (c + 1) * kChunkSize);
        for (std::size_t i = c * kChunkSize; i < end; ++i) {
            sample_unit_sphere(rng, u);
            const double q = generator.sample_q(rng);
            const VectorXd y = std::sqrt(q) * u;
            const VectorXd xi = -generator.phi(q) * y;
            const MatrixXd xx = xi * xi.transpose();
            const MatrixXd yx = y * xi.transpose();
            acc.xx += xx;
            acc.xx2 += xx.cwiseAbs2();
            acc.yx += yx;
            acc.yx2 += yx.cwiseAbs2();
        }
        partial[c] = std::move(acc);
    });
    MatrixXd xx = MatrixXd::Zero(n, n), xx2 = xx, yx = xx, yx2 = xx;
    for (const auto& part : partial) {
        xx += part.xx;
        xx2 += part.xx2;
        yx += part.yx;
        yx2 += part.yx2;
    }
    const double count = static_cast<double>(samples);
    auto se_of = [count](const MatrixXd& mean, const MatrixXd& second) {
        return (((second / count) - mean.cwiseAbs2()).cwiseMax(0.0) / (count - 1.0)).cwiseSqrt();
    };
    out.samples = samples;
    out.mc_estimate = xx / count;
    out.mc_standard_error = se_of(out.mc_estimate, xx2);
    out.mc_y_xi = yx / count;
    out.mc_y_xi_se = se_of(out.mc_y_xi, yx2);
    out.mc_min_excess = min_eigenvalue(0.5 * (out.mc_estimate + out.mc_estimate.transpose()) - identity);
    out.mc_se_scale = out.mc_standard_error.norm();
    return out;
}

}  // namespace fimcrb
