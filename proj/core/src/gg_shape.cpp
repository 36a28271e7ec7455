#include "fimcrb/gg_shape.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "fimcrb/error.hpp"
#include "fimcrb/generators.hpp"
#include "fimcrb/radial.hpp"
#include "fimcrb/special_functions.hpp"

namespace fimcrb {

GgConstantDerivatives gg_constant_derivatives(int n, double s) {
    if (!(s > 0.0) || !std::isfinite(s)) {
        throw DomainError("s", "generalized Gaussian exponent s must be > 0");
    }
    const double k = n / (2.0 * s);
    const double kp = (n + 2.0) / (2.0 * s);
    const double log_c = gg_normalization_constants(n, s).log_c;
    // ln c = s L(s), L = lgamma(kp) - ln n - lgamma(k)
    const double big_l = std::lgamma(kp) - std::log(static_cast<double>(n)) - std::lgamma(k);
    const double dl = (-digamma(kp) * kp + digamma(k) * k) / s;
    GgConstantDerivatives out;
    out.dlog_c = big_l + s * dl;
    // ln b = ln delta_n + ln s + k ln c - lgamma(k)
    out.dlog_b = 1.0 / s - (k / s) * log_c + k * out.dlog_c + digamma(k) * k / s;
    return out;
}

double gg_shape_score(int n, double s, double t) {
    const GgConstants c = gg_normalization_constants(n, s);
    const GgConstantDerivatives d = gg_constant_derivatives(n, s);
    if (t == 0.0) {
        return d.dlog_b;
    }
    const double lt = std::log(t);
    return d.dlog_b - std::exp(c.log_c + s * lt) * (d.dlog_c + lt);
}

GgShapeInformation gg_shape_information(double s, QuadratureOptions options) {
    const GeneralizedGaussianGenerator gen(1, s);
    const GgConstants& c = gen.constants();
    const GgConstantDerivatives d = gg_constant_derivatives(1, s);
    const RadialQuadrature quad(gen, options);

    auto qphi = [&](double v) { return std::exp(gen.log_t_phi_at_log(v)); };
    auto shape_score = [&](double v) {
        return d.dlog_b - std::exp(c.log_c + s * v) * (d.dlog_c + v);
    };

    GgShapeInformation out;
    out.sigma_sigma = 0.25 * quad.expectation_log(
                                 [&](double v) {
                                     const double r = qphi(v) - 1.0;
                                     return r * r;
                                 },
                                 "E[(Q phi - 1)^2]");
    out.sigma_s = 0.5 * quad.expectation_log(
                            [&](double v) { return (qphi(v) - 1.0) * shape_score(v); },
                            "E[(Q phi - 1) d ln g/ds]");
    out.s_s = quad.expectation_log(
        [&](double v) {
            const double r = shape_score(v);
            return r * r;
        },
        "E[(d ln g/ds)^2]");
    out.a0 = gen.mean_information_finite()
                 ? quad.expectation_exp([&](double v) { return 2.0 * gen.log_t_phi_at_log(v) - v; },
                                        "E[Q phi^2]")
                 : std::numeric_limits<double>::infinity();
    return out;
}

FimMatrix gg_shape_fim(double s, double sigma2, int count, QuadratureOptions options) {
    if (!(sigma2 > 0.0)) {
        throw DomainError("sigma2", "gg_shape_fim: sigma2 must be > 0");
    }
    if (count < 1) {
        throw DomainError("n", "gg_shape_fim: count must be >= 1");
    }
    const GgShapeInformation info = gg_shape_information(s, options);
    const double s4 = sigma2 * sigma2;
    const bool with_mean = std::isfinite(info.a0);
    const Eigen::Index q1 = with_mean ? 1 : 0;
    MatrixXd fim = MatrixXd::Zero(q1 + 2, q1 + 2);
    if (with_mean) {
        fim(0, 0) = info.a0 / sigma2;
    }
    fim(q1, q1) = info.sigma_sigma / s4;
    fim(q1, q1 + 1) = info.sigma_s / sigma2;
    fim(q1 + 1, q1) = fim(q1, q1 + 1);
    fim(q1 + 1, q1 + 1) = info.s_s;
    return FimMatrix(count * fim, BlockIndex{q1, 1, 1});
}

// ---------------------------------------------------------------------------

GgShapeScoreModel::GgShapeScoreModel(double m, double sigma2, double s)
    : m_(m),
      sigma2_(sigma2),
      s_(s),
      constants_(gg_normalization_constants(1, s)),
      derivatives_(gg_constant_derivatives(1, s)) {
    if (!(sigma2 > 0.0)) {
        throw DomainError("sigma2", "GgShapeScoreModel: sigma2 must be > 0");
    }
}

std::string GgShapeScoreModel::name() const {
    std::ostringstream out;
    out << "gg-shape(s=" << s_ << ")";
    return out.str();
}

VectorXd GgShapeScoreModel::parameters() const {
    VectorXd theta(3);
    theta << m_, sigma2_, s_;
    return theta;
}

void GgShapeScoreModel::sample(Rng& rng, VectorXd& x) const {
    std::gamma_distribution<double> gamma(1.0 / (2.0 * s_), 1.0);
    std::bernoulli_distribution sign(0.5);
    const double q = std::exp((std::log(gamma(rng)) - constants_.log_c) / s_);
    x.resize(1);
    x(0) = m_ + (sign(rng) ? 1.0 : -1.0) * std::sqrt(sigma2_ * q);
}

VectorXd GgShapeScoreModel::score(const VectorXd& x) const {
    const double d = x(0) - m_;
    const double t = d * d / sigma2_;
    VectorXd out(3);
    if (t == 0.0) {
        // phi(t) t^{1/2} -> 0 for s > 1/2; the score at an exact hit is a null event
        out << 0.0, -0.5 / sigma2_, derivatives_.dlog_b;
        return out;
    }
    const double lt = std::log(t);
    const double ct_s = std::exp(constants_.log_c + s_ * lt);  // c t^s
    const double phi = 2.0 * s_ * ct_s / t;
    out(0) = phi * d / sigma2_;
    out(1) = (2.0 * s_ * ct_s - 1.0) / (2.0 * sigma2_);
    out(2) = derivatives_.dlog_b - ct_s * (derivatives_.dlog_c + lt);
    return out;
}

double GgShapeScoreModel::log_density(const VectorXd& theta, const VectorXd& x) const {
    const double m = theta(0);
    const double sigma2 = theta(1);
    const double s = theta(2);
    if (!(sigma2 > 0.0) || !(s > 0.0)) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    const GgConstants c = gg_normalization_constants(1, s);
    const double d = x(0) - m;
    const double t = d * d / sigma2;
    return -0.5 * std::log(sigma2) + c.log_b - c.c * std::pow(t, s);
}

// ---------------------------------------------------------------------------

const char* to_string(ShapeKnowledge knowledge) {
    return knowledge == ShapeKnowledge::known_s ? "known_s" : "unknown_s";
}

GgCrbResult gg_crb_sigma2(int n, double s, ShapeKnowledge knowledge, const GgCrbOptions& options) {
    if (n < 1) {
        throw DomainError("n", "gg_crb_sigma2: n must be >= 1");
    }
    if (!(s > 0.0) || !std::isfinite(s)) {
        throw DomainError("s", "generalized Gaussian exponent s must be > 0");
    }
    GgCrbResult out;
    out.s = s;
    out.n = n;
    out.knowledge = knowledge;
    const EllipticalCoefficients closed = gg_coefficients_closed_form(1, s);
    const double known_coefficient = closed.a1 + closed.a2;  // = s/2
    out.known_s_value = 1.0 / known_coefficient;
    if (knowledge == ShapeKnowledge::known_s) {
        out.normalized_crb = out.known_s_value;
        out.method = "closed-form";
        return out;
    }
    if (s < kGgShapeMin || s > kGgShapeMax) {
        std::ostringstream msg;
        msg << "gg_crb_sigma2: unknown-s information is only supported for s in [" << kGgShapeMin
            << ", " << kGgShapeMax << "], got s = " << s;
        throw RangeError(msg.str());
    }

    // sigma2 = 1 and a single observation: the normalized bound is the inverse
    // of the per-observation effective information.
    FimMatrix fim(MatrixXd::Identity(1, 1), BlockIndex{0, 1, 0});
    try {
        fim = gg_shape_fim(s, 1.0, 1, options.quadrature);
        out.method = "quadrature";
    } catch (const NumericError&) {
        if (!options.monte_carlo_fallback) {
            throw;
        }
        const GgShapeScoreModel model(0.0, 1.0, s);
        const EmpiricalFim mc = empirical_fim(model, options.mc_samples, options.seed);
        fim = mc.fim();
        out.method = "monte-carlo";
    }
    const CrbBlock crb = crb_from_fim(fim, Block::theta2, NuisancePolicy::schur);
    out.normalized_crb = crb.crb(0, 0);
    const NuisanceReduction reduction = reduce_nuisance(fim, 1.0);
    out.a3_estimate = reduction.effective_information(0, 0) - known_coefficient;
    return out;
}

std::vector<double> sweep_grid(double s_min, double s_max, int steps) {
    if (!(s_min > 0.0) || !(s_max >= s_min)) {
        throw DomainError("s", "sweep range needs 0 < s_min <= s_max");
    }
    if (steps < 1) {
        throw DomainError("steps", "sweep needs at least one step");
    }
    std::vector<double> grid;
    if (steps == 1) {
        grid.push_back(s_min);
    } else {
        for (int i = 0; i < steps; ++i) {
            grid.push_back(s_min + (s_max - s_min) * i / (steps - 1));
        }
    }
    const bool has_one = std::any_of(grid.begin(), grid.end(),
                                     [](double s) { return std::abs(s - 1.0) < 1e-12; });
    if (!has_one && s_min <= 1.0 && s_max >= 1.0) {
        grid.push_back(1.0);
        std::sort(grid.begin(), grid.end());
    }
    for (double& s : grid) {
        if (std::abs(s - 1.0) < 1e-12) {
            s = 1.0;
        }
    }
    return grid;
}

std::vector<SweepRow> gg_sweep(int n, const std::vector<double>& s_values,
                               const GgCrbOptions& options) {
    std::vector<SweepRow> rows;
    rows.reserve(s_values.size());
    for (double s : s_values) {
        const GgCrbResult known = gg_crb_sigma2(n, s, ShapeKnowledge::known_s, options);
        const GgCrbResult unknown = gg_crb_sigma2(n, s, ShapeKnowledge::unknown_s, options);
        SweepRow row;
        row.s = s;
        row.n = n;
        row.crb_known_s = known.normalized_crb;
        row.crb_unknown_s = unknown.normalized_crb;
        row.gaussian_level = 2.0;
        row.a3_estimate = unknown.a3_estimate;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace fimcrb
