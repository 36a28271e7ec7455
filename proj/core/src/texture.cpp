#include "fimcrb/texture.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "fimcrb/error.hpp"

namespace fimcrb {
namespace {

constexpr double kMeanTolerance = 1e-12;

double log_sum_exp(double a, double b) {
    if (a == -std::numeric_limits<double>::infinity()) {
        return b;
    }
    if (b == -std::numeric_limits<double>::infinity()) {
        return a;
    }
    const double hi = std::max(a, b);
    return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

std::string format(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

}  // namespace

TextureDistribution::TextureDistribution(Kind kind, std::vector<double> parameters)
    : kind_(kind), parameters_(std::move(parameters)) {
    for (double p : parameters_) {
        if (!std::isfinite(p)) {
            throw DomainError("texture", "texture parameters must be finite");
        }
    }
    const double m = mean();
    if (std::abs(m - 1.0) > kMeanTolerance) {
        throw ConstraintError("texture '" + spec() + "' has E[tau] = " + format(m) +
                              "; the unit-covariance constraint requires E[tau] = 1");
    }
}

TextureDistribution TextureDistribution::point_mass(double value) {
    if (!(value > 0.0)) {
        throw DomainError("tau", "point-mass texture must be > 0");
    }
    return TextureDistribution(Kind::point_mass, {value});
}

TextureDistribution TextureDistribution::two_point(double low, double high, double p_low) {
    if (!(low > 0.0) || !(high > 0.0)) {
        throw DomainError("tau", "two-point texture values must be > 0");
    }
    if (!(p_low > 0.0 && p_low < 1.0)) {
        throw DomainError("p", "two-point texture probability must lie in (0, 1)");
    }
    return TextureDistribution(Kind::two_point, {low, high, p_low});
}

TextureDistribution TextureDistribution::inverse_gamma(double shape) {
    if (!(shape > 1.0)) {
        throw DomainError("shape",
                          "inverse-gamma texture needs shape > 1 for a finite mean (nu > 2)");
    }
    return TextureDistribution(Kind::inverse_gamma, {shape});
}

double TextureDistribution::mean() const {
    switch (kind_) {
        case Kind::point_mass:
            return parameters_[0];
        case Kind::two_point:
            return parameters_[2] * parameters_[0] + (1.0 - parameters_[2]) * parameters_[1];
        case Kind::inverse_gamma:
            // scale / (shape - 1) with scale = shape - 1
            return 1.0;
    }
    return 0.0;
}

double TextureDistribution::sample(Rng& rng) const {
    switch (kind_) {
        case Kind::point_mass:
            return parameters_[0];
        case Kind::two_point: {
            std::uniform_real_distribution<double> u(0.0, 1.0);
            return u(rng) < parameters_[2] ? parameters_[0] : parameters_[1];
        }
        case Kind::inverse_gamma: {
            const double shape = parameters_[0];
            std::gamma_distribution<double> gamma(shape, 1.0);
            return (shape - 1.0) / gamma(rng);
        }
    }
    return 1.0;
}

double TextureDistribution::log_mixture_moment(double p, double t) const {
    switch (kind_) {
        case Kind::point_mass: {
            const double tau = parameters_[0];
            return -p * std::log(tau) - t / (2.0 * tau);
        }
        case Kind::two_point: {
            const auto term = [&](double tau, double w) {
                return std::log(w) - p * std::log(tau) - t / (2.0 * tau);
            };
            return log_sum_exp(term(parameters_[0], parameters_[2]),
                               term(parameters_[1], 1.0 - parameters_[2]));
        }
        case Kind::inverse_gamma: {
            // b^a / Gamma(a) * Gamma(a + p) / (b + t/2)^(a + p)
            const double a = parameters_[0];
            const double b = a - 1.0;
            return a * std::log(b) - std::lgamma(a) + std::lgamma(a + p) -
                   (a + p) * std::log(b + 0.5 * t);
        }
    }
    return 0.0;
}

std::string TextureDistribution::spec() const {
    switch (kind_) {
        case Kind::point_mass:
            return "point:" + format(parameters_[0]);
        case Kind::two_point:
            return "two:" + format(parameters_[0]) + "," + format(parameters_[1]) + "@" +
                   format(parameters_[2]);
        case Kind::inverse_gamma:
            return "invgamma:" + format(parameters_[0]);
    }
    return "?";
}

namespace {

double parse_number(const std::string& text, const std::string& spec) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != text.size()) {
        throw DomainError("texture", "malformed number '" + text + "' in texture spec '" + spec + "'");
    }
    return v;
}

}  // namespace

TextureDistribution parse_texture(const std::string& spec) {
    const auto colon = spec.find(':');
    if (colon == std::string::npos) {
        throw DomainError("texture", "texture spec '" + spec +
                                         "' must look like point:1.0, two:a,b@p or invgamma:shape");
    }
    const std::string kind = spec.substr(0, colon);
    const std::string body = spec.substr(colon + 1);
    if (kind == "point") {
        return TextureDistribution::point_mass(parse_number(body, spec));
    }
    if (kind == "invgamma") {
        return TextureDistribution::inverse_gamma(parse_number(body, spec));
    }
    if (kind == "two") {
        const auto comma = body.find(',');
        const auto at = body.find('@');
        if (comma == std::string::npos || at == std::string::npos || at < comma) {
            throw DomainError("texture", "two-point texture must look like two:a,b@p, got '" +
                                             spec + "'");
        }
        return TextureDistribution::two_point(parse_number(body.substr(0, comma), spec),
                                              parse_number(body.substr(comma + 1, at - comma - 1), spec),
                                              parse_number(body.substr(at + 1), spec));
    }
    throw DomainError("texture", "unknown texture kind '" + kind + "'");
}

}  // namespace fimcrb
