#pragma once

#include <cstdint>

#include "fimcrb/model.hpp"

namespace fimcrb {

/// N draws of x = m + sqrt(Q) Sigma^{1/2} u, one observation per row, with u
/// uniform on the unit sphere and Q from the generator's radial sampler.
/// Sigma^{1/2} is the lower Cholesky factor (u is rotation invariant, so any
/// square root gives the same law). Deterministic given seed.
MatrixXd sample_elliptical(const LocationScaleModel& model, const VectorXd& theta1,
                           const VectorXd& theta2, std::size_t count, std::uint64_t seed);

}  // namespace fimcrb
