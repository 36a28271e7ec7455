#pragma once

#include <functional>

namespace fimcrb {

struct QuadratureOptions {
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    int max_intervals = 4000;
};

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
    int intervals = 0;
    int evaluations = 0;
    bool converged = false;
};

/// Globally adaptive 15-point Gauss-Kronrod on a finite interval [a, b].
/// Intervals are bisected in order of decreasing error estimate until the
/// total estimate meets max(abs_tol, rel_tol * |value|).
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureOptions& opts = {});

/// Integrates f(v) over the real line through v = center + scale * w / (1 - w^2),
/// w in (-1, 1). f should decay at least like a power of |v|.
QuadratureResult integrate_real_line(const std::function<double(double)>& f, double center,
                                     double scale, const QuadratureOptions& opts = {});

/// Integrates exp(log_weight(q)) * f(q) over q in (0, inf).
///
/// Works in v = ln q, mapped onto (-1, 1) by v = center + w / (1 - w^2), so
/// integrable power singularities at q = 0 and algebraic or stretched
/// exponential tails both become smooth, fast-decaying integrands in w.
/// `center` should be near the log of where the mass sits (ln n for radial
/// densities). Points where the weight underflows contribute exactly zero,
/// whatever f returns there.
QuadratureResult integrate_positive_axis(const std::function<double(double)>& log_weight,
                                         const std::function<double(double)>& f,
                                         double center = 0.0,
                                         const QuadratureOptions& opts = {});

}  // namespace fimcrb
