#pragma once

namespace fimcrb {

/// Digamma psi(x) = d/dx ln Gamma(x), x > 0.
double digamma(double x);

/// Trigamma psi'(x), x > 0. Upward recurrence psi'(x) = psi'(x+1) + 1/x^2
/// until x > 10, then the asymptotic series; relative accuracy ~1e-14.
double trigamma(double x);

/// x * psi'(x) - 1, evaluated without the cancellation that the direct form
/// suffers for large x (it behaves like 1/(2x)).
double trigamma_excess(double x);

/// ln(Gamma(n/2) / pi^(n/2)), the log of the radial normalizer delta_n.
double log_delta(int n);

}  // namespace fimcrb
