#pragma once

#include <functional>

#include "fimcrb/generators.hpp"
#include "fimcrb/quadrature.hpp"

namespace fimcrb {

/// p(q) = delta_n^{-1} q^{n/2-1} g(q), the density of Q = ||y||^2.
class RadialDensity {
public:
    explicit RadialDensity(const DensityGenerator& generator);

    double log_evaluate(double q) const;
    double evaluate(double q) const;

private:
    const DensityGenerator* generator_;
    double log_delta_;
};

/// Expectations over Q by adaptive quadrature in v = ln Q, with nodes placed
/// from the generator's log_q_location(). Holds a reference: the generator
/// must outlive this object.
class RadialQuadrature {
public:
    explicit RadialQuadrature(const DensityGenerator& generator, QuadratureOptions options = {});

    /// Log-density of V = ln Q.
    double log_weight(double v) const;

    /// E[f(Q)] without convergence enforcement.
    QuadratureResult try_expectation(const std::function<double(double)>& f) const;

    /// E[h(ln Q)].
    QuadratureResult try_expectation_log(const std::function<double(double)>& h) const;

    /// E[exp(l(ln Q))] for a positive integrand given through its logarithm;
    /// stays finite where the factors alone would overflow.
    QuadratureResult try_expectation_exp(const std::function<double(double)>& l) const;

    /// E[f(Q)]; throws NumericError (with the achieved error) when the
    /// adaptive scheme does not reach tolerance. `what` labels the message.
    double expectation(const std::function<double(double)>& f, const char* what) const;
    double expectation_log(const std::function<double(double)>& h, const char* what) const;
    double expectation_exp(const std::function<double(double)>& l, const char* what) const;

    /// int_0^inf t^{n/2-1} g(t) dt, which should equal delta_n.
    QuadratureResult normalization_integral() const;

    const QuadratureOptions& options() const noexcept { return options_; }
    const DensityGenerator& generator() const noexcept { return *generator_; }

private:
    double checked(const QuadratureResult& r, const char* what) const;

    const DensityGenerator* generator_;
    QuadratureOptions options_;
    double log_delta_;
    double center_;
    double scale_;
};

struct GeneratorConstraintReport {
    double normalization = 0.0;        // int t^{n/2-1} g
    double delta = 0.0;                // Gamma(n/2) / pi^{n/2}
    double normalization_rel_error = 0.0;
    double mean_q = 0.0;               // E[Q] under p(q)/normalization
    double mean_rel_error = 0.0;

    bool passed(double tol = 1e-8) const {
        return normalization_rel_error < tol && mean_rel_error < tol;
    }
};

/// Quadrature check of the two generator constraints: delta_n normalization
/// and E[Q] = n. E[Q] is computed against the generator's own (possibly
/// wrong) normalization so the two failures are reported separately.
GeneratorConstraintReport check_generator_constraints(const DensityGenerator& generator,
                                                      QuadratureOptions options = {});

}  // namespace fimcrb
