#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fimcrb/crb.hpp"
#include "fimcrb/fim.hpp"
#include "fimcrb/oracle.hpp"
#include "fimcrb/quadrature.hpp"

namespace fimcrb {

/// d ln b / ds and d ln c / ds for the generalized-Gaussian constants.
struct GgConstantDerivatives {
    double dlog_b = 0.0;
    double dlog_c = 0.0;
};

GgConstantDerivatives gg_constant_derivatives(int n, double s);

/// d/ds ln g_s(t) = d ln b/ds - c t^s (d ln c/ds + ln t).
double gg_shape_score(int n, double s, double t);

/// Per-observation information of the scalar generalized Gaussian
/// x = m + sigma w in (sigma2, s), normalized to sigma2 = 1:
///   sigma_sigma = E[(Q phi - 1)^2] / 4,  sigma_s = E[(Q phi - 1) D] / 2,
///   s_s = E[D^2],  D = d/ds ln g_s(Q).
struct GgShapeInformation {
    double sigma_sigma = 0.0;
    double sigma_s = 0.0;
    double s_s = 0.0;
    double a0 = 0.0;  // E[Q phi^2]; +inf for s <= 1/4
};

GgShapeInformation gg_shape_information(double s, QuadratureOptions options = {});

/// FIM of `count` i.i.d. scalar GG observations over (m, sigma2, s). The m
/// block is dropped (q1 = 0) when its information is infinite; it decouples
/// from (sigma2, s) by symmetry either way.
FimMatrix gg_shape_fim(double s, double sigma2, int count, QuadratureOptions options = {});

/// Scalar GG observation scored in (m, sigma2, s).
class GgShapeScoreModel final : public ScoreModel {
public:
    GgShapeScoreModel(double m, double sigma2, double s);

    std::string name() const override;
    int observation_dimension() const override { return 1; }
    BlockIndex blocks() const override { return {1, 1, 1}; }
    VectorXd parameters() const override;
    void sample(Rng& rng, VectorXd& x) const override;
    VectorXd score(const VectorXd& x) const override;
    double log_density(const VectorXd& theta, const VectorXd& x) const override;

private:
    double m_;
    double sigma2_;
    double s_;
    GgConstants constants_;
    GgConstantDerivatives derivatives_;
};

enum class ShapeKnowledge { known_s, unknown_s };

const char* to_string(ShapeKnowledge knowledge);

/// Shape range over which the unknown-s information is computed reliably.
inline constexpr double kGgShapeMin = 0.1;
inline constexpr double kGgShapeMax = 8.0;

struct GgCrbOptions {
    QuadratureOptions quadrature;
    bool monte_carlo_fallback = true;
    std::size_t mc_samples = 1000000;
    std::uint64_t seed = 20240611;
};

struct GgCrbResult {
    double s = 0.0;
    int n = 0;
    ShapeKnowledge knowledge = ShapeKnowledge::known_s;
    double normalized_crb = 0.0;  // n CRB(sigma2) / sigma2^2
    double known_s_value = 0.0;   // 2 / s
    double a3_estimate = std::numeric_limits<double>::quiet_NaN();
    std::string method;           // "closed-form", "quadrature" or "monte-carlo"
};

/// n CRB(sigma2) / sigma2^2 for n i.i.d. scalar GG observations. known_s uses
/// the closed-form coefficients (= 2/s); unknown_s profiles s out of the
/// numeric FIM. Throws RangeError for unknown_s outside [kGgShapeMin, kGgShapeMax].
GgCrbResult gg_crb_sigma2(int n, double s, ShapeKnowledge knowledge, const GgCrbOptions& options = {});

struct SweepRow {
    double s = 0.0;
    int n = 0;
    double crb_known_s = 0.0;
    double crb_unknown_s = 0.0;
    double gaussian_level = 2.0;
    double a3_estimate = 0.0;
};

/// Evenly spaced grid of `steps` points on [s_min, s_max], always including s = 1
/// when it lies inside the range.
std::vector<double> sweep_grid(double s_min, double s_max, int steps);

std::vector<SweepRow> gg_sweep(int n, const std::vector<double>& s_values,
                               const GgCrbOptions& options = {});

}  // namespace fimcrb
