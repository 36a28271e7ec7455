#include "fimcrb/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "fimcrb/error.hpp"
#include "fimcrb/special_functions.hpp"

namespace fimcrb {
namespace {

double log_two_pi() { return std::log(2.0 * std::numbers::pi); }

double chi_square(Rng& rng, double dof) {
    std::gamma_distribution<double> gamma(0.5 * dof, 2.0);
    return gamma(rng);
}

}  // namespace

DensityGenerator::DensityGenerator(int dimension) : dimension_(dimension) {
    if (dimension_ < 1) {
        throw DomainError("n", "density generator dimension must be >= 1");
    }
}

double DensityGenerator::g(double t) const { return std::exp(log_g(t)); }

double DensityGenerator::phi_prime(double) const {
    throw ModelError("generator '" + family() + "' does not provide phi'");
}

double DensityGenerator::log_t_phi_at_log(double v) const {
    return v + std::log(phi(std::exp(v)));
}

double DensityGenerator::t2_phi_prime_at_log(double v) const {
    const double t = std::exp(v);
    return t * t * phi_prime(t);
}

std::pair<double, double> DensityGenerator::log_q_location() const {
    return {std::log(static_cast<double>(dimension_)), 1.0};
}

// ---------------------------------------------------------------------------

GaussianGenerator::GaussianGenerator(int n)
    : DensityGenerator(n), log_norm_(-0.5 * n * log_two_pi()) {}

double GaussianGenerator::log_g(double t) const { return log_norm_ - 0.5 * t; }

double GaussianGenerator::sample_q(Rng& rng) const { return chi_square(rng, dimension()); }

// ---------------------------------------------------------------------------

GgConstants gg_normalization_constants(int n, double s) {
    if (!(s > 0.0) || !std::isfinite(s)) {
        throw DomainError("s", "generalized Gaussian exponent s must be > 0");
    }
    if (n < 1) {
        throw DomainError("n", "generalized Gaussian dimension must be >= 1");
    }
    const double k = n / (2.0 * s);
    GgConstants out;
    out.log_c = s * (std::lgamma(k + 1.0 / s) - std::log(static_cast<double>(n)) - std::lgamma(k));
    out.log_b = log_delta(n) + std::log(s) + k * out.log_c - std::lgamma(k);
    out.c = std::exp(out.log_c);
    out.b = std::exp(out.log_b);
    return out;
}

GeneralizedGaussianGenerator::GeneralizedGaussianGenerator(int n, double s)
    : DensityGenerator(n), s_(s), constants_(gg_normalization_constants(n, s)) {}

double GeneralizedGaussianGenerator::log_g(double t) const {
    return constants_.log_b - constants_.c * std::pow(t, s_);
}

double GeneralizedGaussianGenerator::phi(double t) const {
    return 2.0 * constants_.c * s_ * std::pow(t, s_ - 1.0);
}

double GeneralizedGaussianGenerator::phi_prime(double t) const {
    return 2.0 * constants_.c * s_ * (s_ - 1.0) * std::pow(t, s_ - 2.0);
}

double GeneralizedGaussianGenerator::sample_q(Rng& rng) const {
    std::gamma_distribution<double> gamma(dimension() / (2.0 * s_), 1.0);
    return std::exp((std::log(gamma(rng)) - constants_.log_c) / s_);
}

double GeneralizedGaussianGenerator::log_g_at_log(double v) const {
    return constants_.log_b - std::exp(constants_.log_c + s_ * v);
}

double GeneralizedGaussianGenerator::log_t_phi_at_log(double v) const {
    return std::log(2.0 * s_) + constants_.log_c + s_ * v;
}

double GeneralizedGaussianGenerator::t2_phi_prime_at_log(double v) const {
    return (s_ - 1.0) * std::exp(log_t_phi_at_log(v));
}

std::pair<double, double> GeneralizedGaussianGenerator::log_q_location() const {
    // c Q^s ~ Gamma(k, 1), k = n/(2s)
    const double k = dimension() / (2.0 * s_);
    const double center = (digamma(k) - constants_.log_c) / s_;
    const double spread = std::sqrt(trigamma(k)) / s_;
    return {center, std::max(1.0, spread)};
}

bool GeneralizedGaussianGenerator::mean_information_finite() const {
    // E[Q phi^2] ~ int_0 q^{2s-1} q^{n/2-1} dq near the origin
    return 2.0 * s_ + 0.5 * dimension() - 1.0 > 0.0;
}

// ---------------------------------------------------------------------------

StudentTGenerator::StudentTGenerator(int n, double nu) : DensityGenerator(n), nu_(nu) {
    if (!(nu > 2.0) || !std::isfinite(nu)) {
        throw DomainError("nu", "Student-t needs nu > 2: the unit-covariance constraint E[Q] = n "
                                "requires a finite second moment");
    }
    log_norm_ = std::lgamma(0.5 * (n + nu)) - std::lgamma(0.5 * nu) -
                0.5 * n * std::log(std::numbers::pi * (nu - 2.0));
}

double StudentTGenerator::log_g(double t) const {
    return log_norm_ - 0.5 * (dimension() + nu_) * std::log1p(t / (nu_ - 2.0));
}

double StudentTGenerator::phi(double t) const { return (dimension() + nu_) / (nu_ - 2.0 + t); }

double StudentTGenerator::phi_prime(double t) const {
    const double d = nu_ - 2.0 + t;
    return -(dimension() + nu_) / (d * d);
}

double StudentTGenerator::sample_q(Rng& rng) const {
    const double x = chi_square(rng, dimension());
    const double y = chi_square(rng, nu_);
    return (nu_ - 2.0) * x / y;
}

// ---------------------------------------------------------------------------

CompoundGaussianGenerator::CompoundGaussianGenerator(int n, TextureDistribution texture)
    : DensityGenerator(n), texture_(std::move(texture)) {}

std::vector<std::pair<std::string, double>> CompoundGaussianGenerator::shape() const {
    std::vector<std::pair<std::string, double>> out;
    const auto& p = texture_.parameters();
    switch (texture_.kind()) {
        case TextureDistribution::Kind::point_mass:
            out.emplace_back("tau", p[0]);
            break;
        case TextureDistribution::Kind::two_point:
            out.emplace_back("tau_low", p[0]);
            out.emplace_back("tau_high", p[1]);
            out.emplace_back("p_low", p[2]);
            break;
        case TextureDistribution::Kind::inverse_gamma:
            out.emplace_back("shape", p[0]);
            break;
    }
    return out;
}

double CompoundGaussianGenerator::log_moment(int k, double t) const {
    return texture_.log_mixture_moment(0.5 * dimension() + k, t);
}

double CompoundGaussianGenerator::log_g(double t) const {
    return -0.5 * dimension() * log_two_pi() + log_moment(0, t);
}

double CompoundGaussianGenerator::phi(double t) const {
    // -2 g'/g = M1 / M0
    return std::exp(log_moment(1, t) - log_moment(0, t));
}

double CompoundGaussianGenerator::phi_prime(double t) const {
    // -2 (g'' g - g'^2) / g^2 = -(M2/M0 - (M1/M0)^2) / 2
    const double l0 = log_moment(0, t);
    const double ratio2 = std::exp(log_moment(2, t) - l0);
    const double ratio1 = std::exp(log_moment(1, t) - l0);
    return -0.5 * (ratio2 - ratio1 * ratio1);
}

double CompoundGaussianGenerator::sample_q(Rng& rng) const {
    const double tau = texture_.sample(rng);
    return tau * chi_square(rng, dimension());
}

// ---------------------------------------------------------------------------

std::shared_ptr<const GaussianGenerator> gaussian_generator(int n) {
    return std::make_shared<const GaussianGenerator>(n);
}

std::shared_ptr<const GeneralizedGaussianGenerator> generalized_gaussian_generator(int n, double s) {
    return std::make_shared<const GeneralizedGaussianGenerator>(n, s);
}

std::shared_ptr<const StudentTGenerator> student_t_generator(int n, double nu) {
    return std::make_shared<const StudentTGenerator>(n, nu);
}

std::shared_ptr<const CompoundGaussianGenerator> compound_gaussian_generator(
    int n, TextureDistribution texture) {
    return std::make_shared<const CompoundGaussianGenerator>(n, std::move(texture));
}

GeneratorPtr make_generator(const std::string& family, int n, double s, double nu,
                            const std::string& texture_spec) {
    if (family == "gaussian") {
        return gaussian_generator(n);
    }
    if (family == "gg") {
        return generalized_gaussian_generator(n, s);
    }
    if (family == "student-t") {
        return student_t_generator(n, nu);
    }
    if (family == "compound-gaussian") {
        return compound_gaussian_generator(n, parse_texture(texture_spec));
    }
    throw DomainError("family", "unknown elliptical family '" + family + "'");
}

}  // namespace fimcrb
