#include "fimcrb/sampling.hpp"

#include <cmath>

#include "fimcrb/error.hpp"
#include "fimcrb/generators.hpp"
#include "fimcrb/rng.hpp"

namespace fimcrb {

MatrixXd sample_elliptical(const LocationScaleModel& model, const VectorXd& theta1,
                           const VectorXd& theta2, std::size_t count, std::uint64_t seed) {
    if (count < 1) {
        throw ModelError("sample_elliptical: need at least one draw");
    }
    const VectorXd m = model.mean_map().evaluate(theta1);
    const MatrixXd root = cholesky_factor(model.cov_map().evaluate(theta2), "sample_elliptical");
    const DensityGenerator& gen = model.generator();
    const int n = model.dimension();

    MatrixXd out(static_cast<Eigen::Index>(count), n);
    const std::size_t chunks = (count + kChunkSize - 1) / kChunkSize;
    for_each_chunk(chunks, [&](std::size_t c) {
        Rng rng = make_chunk_rng(seed, c);
        VectorXd u(n);
        const std::size_t end = std::min(count, (c + 1) * kChunkSize);
        for (std::size_t i = c * kChunkSize; i < end; ++i) {
            sample_unit_sphere(rng, u);
            const double radius = std::sqrt(gen.sample_q(rng));
            out.row(static_cast<Eigen::Index>(i)) = (m + radius * (root * u)).transpose();
        }
    });
    return out;
}

}  // namespace fimcrb
