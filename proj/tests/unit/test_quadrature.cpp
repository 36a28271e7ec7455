#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "fimcrb/quadrature.hpp"

using namespace fimcrb;

TEST(Integrate, PolynomialIsExact) {
    const QuadratureResult r = integrate([](double x) { return x * x * x - 2 * x; }, -1.0, 3.0);
    EXPECT_TRUE(r.converged);
    EXPECT_NEAR(r.value, 20.0 - 8.0, 1e-13);
}

TEST(Integrate, Exponential) {
    const QuadratureResult r = integrate([](double x) { return std::exp(-x); }, 0.0, 5.0);
    EXPECT_NEAR(r.value, 1.0 - std::exp(-5.0), 1e-14);
}

TEST(Integrate, ReportsNonConvergenceForDivergentIntegral) {
    QuadratureOptions opts;
    opts.max_intervals = 50;
    const QuadratureResult r = integrate([](double x) { return 1.0 / x; }, 0.0, 1.0, opts);
    EXPECT_FALSE(r.converged);
    EXPECT_GT(r.error, 0.0);
}

TEST(IntegrateRealLine, Gaussian) {
    const QuadratureResult r =
        integrate_real_line([](double v) { return std::exp(-0.5 * (v - 3) * (v - 3)); }, 3.0, 1.0);
    EXPECT_TRUE(r.converged);
    EXPECT_NEAR(r.value, std::sqrt(2 * std::numbers::pi), 1e-12);
}

TEST(IntegratePositiveAxis, SingularWeight) {
    // int q^{-1/2} e^{-q} dq = sqrt(pi)
    const QuadratureResult r = integrate_positive_axis(
        [](double q) { return -0.5 * std::log(q) - q; }, [](double) { return 1.0; });
    EXPECT_TRUE(r.converged);
    EXPECT_NEAR(r.value, std::sqrt(std::numbers::pi), 1e-11);
}

TEST(IntegratePositiveAxis, AlgebraicTail) {
    // int 1 / (1 + q)^3 dq = 1/2
    const QuadratureResult r = integrate_positive_axis(
        [](double q) { return -3.0 * std::log1p(q); }, [](double) { return 1.0; });
    EXPECT_NEAR(r.value, 0.5, 1e-11);
}

TEST(IntegratePositiveAxis, UnderflowedWeightIgnoresIntegrand) {
    const QuadratureResult r = integrate_positive_axis(
        [](double q) { return -q; }, [](double q) { return q > 800.0 ? NAN : q; });
    EXPECT_TRUE(std::isfinite(r.value));
    EXPECT_NEAR(r.value, 1.0, 1e-11);
}
