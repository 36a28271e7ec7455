#pragma once

#include <string>
#include <vector>

#include "fimcrb/rng.hpp"

namespace fimcrb {

/// Mixing law of the texture tau in a compound-Gaussian generator. Every kind
/// has closed-form mixture integrals E[tau^{-p} exp(-t/(2 tau))], so g, g' and
/// g'' are exact. E[tau] = 1 is enforced on construction.
class TextureDistribution {
public:
    enum class Kind { point_mass, two_point, inverse_gamma };

    /// tau = value with probability one. Only value = 1 satisfies E[tau] = 1.
    static TextureDistribution point_mass(double value = 1.0);

    /// tau = low w.p. p_low, high otherwise.
    static TextureDistribution two_point(double low, double high, double p_low);

    /// tau ~ InvGamma(shape, scale = shape - 1), so E[tau] = 1. Requires
    /// shape > 1; the mixture integrals then converge for every order p > 0.
    /// shape = nu/2 reproduces the Student-t generator with nu degrees of freedom.
    static TextureDistribution inverse_gamma(double shape);

    Kind kind() const noexcept { return kind_; }
    const std::vector<double>& parameters() const noexcept { return parameters_; }

    double mean() const;
    double sample(Rng& rng) const;

    /// ln E[tau^{-p} exp(-t / (2 tau))], t >= 0.
    double log_mixture_moment(double p, double t) const;

    /// Canonical text form, parseable by parse_texture.
    std::string spec() const;

private:
    TextureDistribution(Kind kind, std::vector<double> parameters);

    Kind kind_;
    // point: {value}; two-point: {low, high, p_low}; inverse-gamma: {shape}
    std::vector<double> parameters_;
};

/// Parses `point:1.0`, `two:0.5,1.5@0.5` (values, then probability of the
/// first) or `invgamma:2.5` (shape). Throws DomainError on malformed input and
/// ConstraintError when E[tau] != 1.
TextureDistribution parse_texture(const std::string& spec);

}  // namespace fimcrb
