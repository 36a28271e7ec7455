#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "fimcrb/fim.hpp"
#include "fimcrb/gamma_model.hpp"
#include "fimcrb/model.hpp"
#include "fimcrb/rng.hpp"

namespace fimcrb {

/// A parametric family at a fixed parameter value that can both draw
/// observations and score them. Implementations are immutable so chunks can
/// be processed concurrently.
class ScoreModel {
public:
    virtual ~ScoreModel() = default;

    virtual std::string name() const = 0;
    virtual int observation_dimension() const = 0;
    virtual BlockIndex blocks() const = 0;
    /// Stacked parameter value the model is evaluated at.
    virtual VectorXd parameters() const = 0;

    virtual void sample(Rng& rng, VectorXd& x) const = 0;
    virtual VectorXd score(const VectorXd& x) const = 0;

    /// Log-density at an arbitrary stacked parameter; used for finite differences.
    virtual double log_density(const VectorXd& theta, const VectorXd& x) const = 0;
};

/// Elliptical location-scale model at (theta1, theta2). Scores:
///   s(theta1) = phi(q) (dm/dtheta1)^T Sigma^{-1} (x-m)
///   s(theta2) = -1/2 J^T vec(Sigma^{-1}) + 1/2 phi(q) J^T vec(Sigma^{-1} d d^T Sigma^{-1})
/// with d = x - m, q = d^T Sigma^{-1} d and J = dvec(Sigma)/dtheta2.
class EllipticalScoreModel final : public ScoreModel {
public:
    EllipticalScoreModel(LocationScaleModel model, VectorXd theta1, VectorXd theta2);

    std::string name() const override;
    int observation_dimension() const override { return model_.dimension(); }
    BlockIndex blocks() const override { return {model_.q1(), model_.q2(), 0}; }
    VectorXd parameters() const override;
    void sample(Rng& rng, VectorXd& x) const override;
    VectorXd score(const VectorXd& x) const override;
    double log_density(const VectorXd& theta, const VectorXd& x) const override;

    const LocationScaleModel& model() const noexcept { return model_; }

private:
    LocationScaleModel model_;
    VectorXd theta1_;
    VectorXd theta2_;
    VectorXd mean_;
    MatrixXd mean_jacobian_;
    MatrixXd sigma_inverse_;
    MatrixXd root_;
    MatrixXd cov_jacobian_;
    VectorXd trace_term_;  // J^T vec(Sigma^{-1})
};

/// n i.i.d. Gamma observations, scored either in (m, sigma2) or in (alpha, beta).
class GammaScoreModel final : public ScoreModel {
public:
    enum class Parameterization { mean_variance, alpha_beta };

    explicit GammaScoreModel(GammaModel model,
                             Parameterization parameterization = Parameterization::mean_variance);

    std::string name() const override;
    int observation_dimension() const override { return model_.n(); }
    BlockIndex blocks() const override { return {1, 1, 0}; }
    VectorXd parameters() const override;
    void sample(Rng& rng, VectorXd& x) const override;
    VectorXd score(const VectorXd& x) const override;
    double log_density(const VectorXd& theta, const VectorXd& x) const override;

private:
    GammaModel model_;
    Parameterization parameterization_;
};

/// Analytic elliptical score at a single observation.
VectorXd analytic_scores_elliptical(const LocationScaleModel& model, const VectorXd& theta1,
                                    const VectorXd& theta2, const VectorXd& x);

struct FiniteDifferenceScore {
    VectorXd score;
    // One entry per coordinate whose perturbed evaluations were not finite.
    std::vector<std::string> failures;

    bool ok() const noexcept { return failures.empty(); }
};

/// Central differences of log_density in theta, h_i = 1e-5 (1 + |theta_i|).
FiniteDifferenceScore finite_difference_score(
    const std::function<double(const VectorXd&)>& log_density, const VectorXd& theta);

/// Monte Carlo estimate of E[s s^T] with per-entry standard errors.
struct EmpiricalFim {
    MatrixXd estimate;
    MatrixXd standard_error;
    VectorXd mean_score;
    VectorXd mean_score_se;
    BlockIndex blocks;
    std::size_t samples = 0;
    std::uint64_t seed = 0;

    FimMatrix fim() const { return FimMatrix(estimate, blocks); }
};

inline constexpr std::size_t kMinimumOracleSamples = 10000;

/// Averages score outer products over `samples` independent draws (at least
/// 10^4). Chunked; deterministic given seed regardless of thread count.
EmpiricalFim empirical_fim(const ScoreModel& model, std::size_t samples, std::uint64_t seed,
                           unsigned threads = 0);

/// Entry-wise comparison of a Monte Carlo estimate against a target.
struct OracleComparison {
    MatrixXd estimate;
    MatrixXd standard_error;
    MatrixXd target;
    MatrixXd z_scores;
    double max_abs_z = 0.0;
    double z_threshold = 4.0;
    bool passed = false;
};

/// z = (estimate - target) / se per entry; entries with se == 0 must match
/// exactly (to 1e-12 relative). Passes iff every |z| <= z_threshold.
OracleComparison compare_to_target(const MatrixXd& estimate, const MatrixXd& standard_error,
                                   const MatrixXd& target, double z_threshold = 4.0);

/// E[xi xi^T] with xi(y) = grad ln p_y(y) = -phi(||y||^2) y.
struct XiStatistic {
    int n = 0;
    // Quadrature: E[xi xi^T] = (E[Q phi^2] / n) I_n by isotropy.
    MatrixXd quadrature_estimate;
    double e_q_phi = 0.0;              // E[Q phi(Q)], should equal n
    double ibp_identity_error = 0.0;   // |E[Q phi]/n - 1|
    double quadrature_min_excess = 0.0;  // smallest eigenvalue of estimate - I_n

    // Monte Carlo (empty when samples == 0).
    MatrixXd mc_estimate;
    MatrixXd mc_standard_error;
    MatrixXd mc_y_xi;                  // E[y xi^T], should equal -I_n
    MatrixXd mc_y_xi_se;
    double mc_min_excess = 0.0;
    double mc_se_scale = 0.0;          // Frobenius norm of mc_standard_error
    std::size_t samples = 0;

    /// Smallest eigenvalue of (E[xi xi^T] - I) >= -4 SE under MC and
    /// >= -1e-8 under quadrature.
    bool inequality_holds() const;
};

XiStatistic xi_outer_expectation(const DensityGenerator& generator, std::size_t samples,
                                 std::uint64_t seed, QuadratureOptions options = {});

}  // namespace fimcrb
