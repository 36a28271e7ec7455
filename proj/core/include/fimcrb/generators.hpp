#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "fimcrb/rng.hpp"
#include "fimcrb/texture.hpp"

namespace fimcrb {

/// Density generator g of an elliptical law p_y(y) = g(||y||^2) on R^n,
/// normalized so that int_0^inf t^{n/2-1} g(t) dt = delta_n and E[Q] = n.
///
/// phi(t) = -2 g'(t) / g(t) is the score kernel: for the normalized vector y
/// the log-density gradient is -phi(||y||^2) y.
class DensityGenerator {
public:
    explicit DensityGenerator(int dimension);
    virtual ~DensityGenerator() = default;

    int dimension() const noexcept { return dimension_; }

    virtual std::string family() const = 0;

    /// Shape parameters (theta3 when unknown), e.g. {"s", 0.5} or {"nu", 5}.
    virtual std::vector<std::pair<std::string, double>> shape() const { return {}; }

    virtual double log_g(double t) const = 0;
    double g(double t) const;

    virtual double phi(double t) const = 0;

    virtual bool has_phi_prime() const { return false; }
    /// Throws ModelError when the family does not provide phi'.
    virtual double phi_prime(double t) const;

    /// One draw of Q = (x-m)^T Sigma^{-1} (x-m).
    virtual double sample_q(Rng& rng) const = 0;

    virtual bool is_compound_gaussian() const { return false; }

    /// False when E[Q phi^2(Q)] diverges (infinite information on the mean).
    virtual bool mean_information_finite() const { return true; }

    // Log-domain evaluations at t = e^v. Radial quadrature works in v, so
    // families whose radial law sits far from t = 1 override these to avoid
    // under/overflow of t itself.
    virtual double log_g_at_log(double v) const { return log_g(std::exp(v)); }
    /// ln(t phi(t)); phi must be positive.
    virtual double log_t_phi_at_log(double v) const;
    /// t^2 phi'(t).
    virtual double t2_phi_prime_at_log(double v) const;
    /// Rough centre and spread of ln Q, used to place quadrature nodes.
    virtual std::pair<double, double> log_q_location() const;

private:
    int dimension_;
};

using GeneratorPtr = std::shared_ptr<const DensityGenerator>;

/// g(t) = (2 pi)^{-n/2} exp(-t/2), phi = 1, Q ~ chi^2_n.
class GaussianGenerator final : public DensityGenerator {
public:
    explicit GaussianGenerator(int n);

    std::string family() const override { return "gaussian"; }
    double log_g(double t) const override;
    double phi(double) const override { return 1.0; }
    bool has_phi_prime() const override { return true; }
    double phi_prime(double) const override { return 0.0; }
    double sample_q(Rng& rng) const override;
    bool is_compound_gaussian() const override { return true; }

private:
    double log_norm_;
};

struct GgConstants {
    double b = 0.0;
    double c = 0.0;
    double log_b = 0.0;
    double log_c = 0.0;
};

/// Constants of g(t) = b exp(-c t^s):
///   c = [Gamma((n+2)/(2s)) / (n Gamma(n/(2s)))]^s
///   b = delta_n s c^{n/(2s)} / Gamma(n/(2s))
/// the unique pair meeting the delta_n normalization and E[Q] = n.
GgConstants gg_normalization_constants(int n, double s);

/// Generalized Gaussian generator g(t) = b exp(-c t^s), s > 0; s = 1 is the
/// Gaussian. Q^s c ~ Gamma(n/(2s), 1).
class GeneralizedGaussianGenerator final : public DensityGenerator {
public:
    GeneralizedGaussianGenerator(int n, double s);

    std::string family() const override { return "gg"; }
    std::vector<std::pair<std::string, double>> shape() const override { return {{"s", s_}}; }
    double log_g(double t) const override;
    double phi(double t) const override;
    bool has_phi_prime() const override { return true; }
    double phi_prime(double t) const override;
    double sample_q(Rng& rng) const override;
    bool mean_information_finite() const override;
    double log_g_at_log(double v) const override;
    double log_t_phi_at_log(double v) const override;
    double t2_phi_prime_at_log(double v) const override;
    std::pair<double, double> log_q_location() const override;

    double s() const noexcept { return s_; }
    const GgConstants& constants() const noexcept { return constants_; }

private:
    double s_;
    GgConstants constants_;
};

/// Student-t with nu > 2 degrees of freedom, scaled to unit covariance:
///   g(t) = K (1 + t/(nu-2))^{-(n+nu)/2},  phi(t) = (n+nu)/(nu-2+t).
/// Q = (nu-2) X / Y with X ~ chi^2_n, Y ~ chi^2_nu independent.
class StudentTGenerator final : public DensityGenerator {
public:
    StudentTGenerator(int n, double nu);

    std::string family() const override { return "student-t"; }
    std::vector<std::pair<std::string, double>> shape() const override { return {{"nu", nu_}}; }
    double log_g(double t) const override;
    double phi(double t) const override;
    bool has_phi_prime() const override { return true; }
    double phi_prime(double t) const override;
    double sample_q(Rng& rng) const override;
    bool is_compound_gaussian() const override { return true; }

    double nu() const noexcept { return nu_; }

private:
    double nu_;
    double log_norm_;
};

/// Scale mixture of Gaussians over the texture tau:
///   g^{(k)}(t) = (-2)^{-k} (2 pi)^{-n/2} E[tau^{-n/2-k} exp(-t/(2 tau))].
/// Q = tau * chi^2_n.
class CompoundGaussianGenerator final : public DensityGenerator {
public:
    CompoundGaussianGenerator(int n, TextureDistribution texture);

    std::string family() const override { return "compound-gaussian"; }
    std::vector<std::pair<std::string, double>> shape() const override;
    double log_g(double t) const override;
    double phi(double t) const override;
    bool has_phi_prime() const override { return true; }
    double phi_prime(double t) const override;
    double sample_q(Rng& rng) const override;
    bool is_compound_gaussian() const override { return true; }

    const TextureDistribution& texture() const noexcept { return texture_; }

private:
    double log_moment(int k, double t) const;

    TextureDistribution texture_;
};

std::shared_ptr<const GaussianGenerator> gaussian_generator(int n);
std::shared_ptr<const GeneralizedGaussianGenerator> generalized_gaussian_generator(int n, double s);
std::shared_ptr<const StudentTGenerator> student_t_generator(int n, double nu);
std::shared_ptr<const CompoundGaussianGenerator> compound_gaussian_generator(
    int n, TextureDistribution texture);

/// Builds a generator by family name: "gaussian", "gg" (param s),
/// "student-t" (param nu), "compound-gaussian" (texture spec).
GeneratorPtr make_generator(const std::string& family, int n, double s, double nu,
                            const std::string& texture_spec);

}  // namespace fimcrb
