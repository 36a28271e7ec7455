#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <cmath>
#include <random>

namespace fimcrb {

using Rng = std::mt19937_64;

/// Draws are generated in fixed-size chunks; each chunk gets its own engine
/// seeded from (master seed, chunk index). Results therefore do not depend on
/// how many threads process the chunks.
inline constexpr std::size_t kChunkSize = 16384;

Rng make_chunk_rng(std::uint64_t seed, std::uint64_t chunk);

/// Runs body(chunk) for chunk in [0, n_chunks) on up to `threads` workers
/// (0 = hardware concurrency). The first exception thrown is rethrown.
void for_each_chunk(std::size_t n_chunks, const std::function<void(std::size_t)>& body,
                    unsigned threads = 0);

/// Uniform direction on the unit sphere in R^n (normalized Gaussian vector),
/// written into out[0..n).
template <typename Vector>
void sample_unit_sphere(Rng& rng, Vector& out) {
    std::normal_distribution<double> normal(0.0, 1.0);
    double norm2 = 0.0;
    do {
        norm2 = 0.0;
        for (auto i = 0; i < static_cast<int>(out.size()); ++i) {
            out[i] = normal(rng);
            norm2 += out[i] * out[i];
        }
    } while (norm2 == 0.0);
    const double inv = 1.0 / std::sqrt(norm2);
    for (auto i = 0; i < static_cast<int>(out.size()); ++i) {
        out[i] *= inv;
    }
}

}  // namespace fimcrb
