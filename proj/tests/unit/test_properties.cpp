// Randomized invariants over parameter space. Each property draws its cases
// from a fixed-seed engine so failures are reproducible.

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "fimcrb/crb.hpp"
#include "fimcrb/fim.hpp"
#include "fimcrb/generators.hpp"
#include "fimcrb/oracle.hpp"
#include "fimcrb/radial.hpp"

using namespace fimcrb;

namespace {

double uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

GeneratorPtr random_generator(std::mt19937_64& rng, int n) {
    switch (rng() % 4) {
        case 0:
            return gaussian_generator(n);
        case 1:
            return generalized_gaussian_generator(n, std::exp(uniform(rng, std::log(0.2), std::log(5.0))));
        case 2:
            return student_t_generator(n, uniform(rng, 2.5, 30.0));
        default: {
            const double low = uniform(rng, 0.1, 0.9);
            const double p = uniform(rng, 0.2, 0.8);
            const double high = (1.0 - p * low) / (1.0 - p);
            return compound_gaussian_generator(n, TextureDistribution::two_point(low, high, p));
        }
    }
}

}  // namespace

TEST(Property, CoefficientLowerBoundsAndIdentity) {
    std::mt19937_64 rng(101);
    for (int trial = 0; trial < 40; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 4);
        const GeneratorPtr g = random_generator(rng, n);
        const EllipticalCoefficients c = elliptical_coefficients_quadrature(*g);
        const RadialQuadrature quad(*g);
        const double e_q_phi = quad.expectation_exp([&](double v) { return g->log_t_phi_at_log(v); }, "E[Q phi]");
        EXPECT_NEAR(e_q_phi, n, 1e-8 * n) << g->family();
        EXPECT_GE(c.a1 - n / (2.0 * (n + 2.0)), -1e-10) << g->family();
        EXPECT_GE(c.a2 + 1.0 / (2.0 * (n + 2.0)), -1e-10) << g->family();
        if (std::isfinite(c.a0)) EXPECT_GE(c.a0, 1.0 - 1e-8) << g->family();
        if (g->is_compound_gaussian()) EXPECT_LE(c.a1, 0.5 + 1e-10) << g->family();
    }
}

TEST(Property, EllipticalFimExceedsGaussianOnMeanBlock) {
    std::mt19937_64 rng(202);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 3);
        const GeneratorPtr g = random_generator(rng, n);
        const EllipticalCoefficients c = elliptical_coefficients_quadrature(*g);
        if (!std::isfinite(c.a0)) continue;
        const MeanMap mean = builtin_full_mean(n);
        const CovarianceMap cov = builtin_symmetric_covariance(n);
        VectorXd t1 = VectorXd::Random(n);
        MatrixXd a = MatrixXd::Random(n, n);
        const MatrixXd sigma = a * a.transpose() + MatrixXd::Identity(n, n);
        VectorXd t2(n * (n + 1) / 2);
        for (int j = 0, k = 0; j < n; ++j)
            for (int i = j; i < n; ++i) t2(k++) = sigma(i, j);
        const FimMatrix f = elliptical_fim(mean, cov, c, t1, t2);
        const FimMatrix gauss = slepian_bangs_gaussian(mean, cov, t1, t2);
        const MatrixXd diff = f.block(Block::theta1, Block::theta1) - gauss.block(Block::theta1, Block::theta1);
        EXPECT_GE(min_eigenvalue(diff), -1e-8 * gauss.matrix().norm()) << g->family();
    }
}

TEST(Property, SchurComplementNeverIncreasesInformation) {
    std::mt19937_64 rng(303);
    for (int trial = 0; trial < 50; ++trial) {
        const int q = 2 + static_cast<int>(rng() % 4);
        MatrixXd a(q, q);
        for (int i = 0; i < q; ++i)
            for (int j = 0; j < q; ++j) a(i, j) = uniform(rng, -1, 1);
        const MatrixXd m = a * a.transpose() + 0.1 * MatrixXd::Identity(q, q);
        const Eigen::Index q3 = 1 + static_cast<Eigen::Index>(rng() % (q - 1));
        const FimMatrix f(m, BlockIndex{0, q - q3, q3});
        const MatrixXd eff = schur_complement(f, Block::theta2, Block::theta3);
        const MatrixXd blk = f.block(Block::theta2, Block::theta2);
        EXPECT_GE(min_eigenvalue(blk - eff), -1e-12);
        const MatrixXd crb = crb_from_fim(f, Block::theta2, NuisancePolicy::schur).crb;
        const MatrixXd inv = m.inverse().bottomRightCorner(q, q).topLeftCorner(q - q3, q - q3);
        EXPECT_LT((crb - inv).cwiseAbs().maxCoeff(), 1e-9 * inv.cwiseAbs().maxCoeff());
    }
}

TEST(Property, CovarianceInformationRoutesAgree) {
    std::mt19937_64 rng(404);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 8);
        MatrixXd a = MatrixXd::Random(n, n);
        const MatrixXd sigma = a * a.transpose() + MatrixXd::Identity(n, n);
        const CovarianceMap cov = builtin_symmetric_covariance(n);
        const MatrixXd j = cov.jacobian_vec(VectorXd::Zero(n * (n + 1) / 2));
        const double a1 = uniform(rng, 0.2, 1.0), a2 = uniform(rng, -0.1, 0.2);
        const MatrixXd x = covariance_information(j, sigma.inverse(), a1, a2, KroneckerRoute::materialized);
        const MatrixXd y = covariance_information(j, sigma.inverse(), a1, a2, KroneckerRoute::contracted);
        EXPECT_LT((x - y).cwiseAbs().maxCoeff(), 1e-10 * x.cwiseAbs().maxCoeff());
    }
}

TEST(Property, GammaCrbOrdering) {
    std::mt19937_64 rng(505);
    for (int trial = 0; trial < 200; ++trial) {
        const double m = std::exp(uniform(rng, -3, 3));
        const double v = std::exp(uniform(rng, -3, 3));
        const int n = 1 + static_cast<int>(rng() % 20);
        const CrbReport r = gamma_crb_report(m, v, n);
        EXPECT_NEAR((*r.crb_theta1)(0, 0), v / n, 1e-10 * v / n);
        EXPECT_GT(r.crb_theta2(0, 0), 2 * v * v / n);
    }
}
