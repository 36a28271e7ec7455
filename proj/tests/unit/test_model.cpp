#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "fimcrb/error.hpp"
#include "fimcrb/generators.hpp"
#include "fimcrb/model.hpp"

using namespace fimcrb;

namespace {

VectorXd v(std::initializer_list<double> xs) {
    VectorXd out(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (double x : xs) out(i++) = x;
    return out;
}

}  // namespace

TEST(ParameterVector, StackingRoundTrip) {
    const ParameterVector p(v({1, 2}), v({3}), v({4, 5}));
    EXPECT_EQ(p.size(), 5);
    EXPECT_EQ(p.stacked(), v({1, 2, 3, 4, 5}));
    const ParameterVector q = p.with_stacked(v({9, 8, 7, 6, 5}));
    EXPECT_EQ(q.theta2(), v({7}));
    EXPECT_EQ(q.theta3(), v({6, 5}));
    EXPECT_THROW(p.with_stacked(v({1})), ModelError);
    EXPECT_THROW(ParameterVector(v({1}), VectorXd()), ModelError);
}

TEST(BuiltinMaps, IidScalar) {
    const auto [mean, cov] = builtin_iid_scalar(3);
    EXPECT_EQ(mean.evaluate(v({0.5})), VectorXd::Constant(3, 0.5));
    EXPECT_EQ(cov.evaluate(v({2.0})), 2.0 * MatrixXd::Identity(3, 3));
    EXPECT_THROW(cov.evaluate(v({0.0})), DomainError);
    EXPECT_THROW(cov.evaluate(v({-1.0})), DomainError);
    EXPECT_THROW(mean.evaluate(v({1.0, 2.0})), ModelError);
    EXPECT_THROW(builtin_iid_scalar(0), DomainError);
}

TEST(BuiltinMaps, AnalyticJacobiansMatchFiniteDifferences) {
    const std::vector<VectorXd> sym_points{v({2, 0.3, 0.1, 1.5, -0.2, 1.0}),
                                           v({1, 0, 0, 1, 0, 1})};
    EXPECT_TRUE(validate_jacobians(builtin_symmetric_covariance(3), sym_points, 1e-6).empty());
    const std::vector<VectorXd> ar1_points{v({1.0, 0.5}), v({2.5, -0.7}), v({0.3, 0.0})};
    EXPECT_TRUE(validate_jacobians(builtin_ar1_covariance(4), ar1_points, 1e-6).empty());
    MatrixXd design(3, 2);
    design << 1, 0, 1, 1, 1, 2;
    EXPECT_TRUE(validate_jacobians(builtin_linear_mean(design), {v({0.2, -1.0})}, 1e-6).empty());
    EXPECT_TRUE(validate_jacobians(builtin_iid_scalar(2).second, {v({1.3})}, 1e-6).empty());
}

TEST(BuiltinMaps, WrongJacobianIsReported) {
    const MeanMap bad(
        "squared", 1, 1, [](const VectorXd& t) { return VectorXd::Constant(1, t(0) * t(0)); },
        [](const VectorXd& t) { return MatrixXd::Constant(1, 1, t(0)); });  // should be 2 t
    const auto violations = validate_jacobians(bad, {v({1.0}), v({3.0})}, 1e-6);
    ASSERT_EQ(violations.size(), 2u);
    EXPECT_NEAR(violations[1].analytic, 3.0, 1e-12);
    EXPECT_NEAR(violations[1].numeric, 6.0, 1e-6);
}

TEST(BuiltinMaps, IdentifiabilityGridCheck) {
    const MeanMap squared(
        "squared", 1, 1, [](const VectorXd& t) { return VectorXd::Constant(1, t(0) * t(0)); },
        [](const VectorXd& t) { return MatrixXd::Constant(1, 1, 2 * t(0)); });
    const auto pairs = identifiability_violations(squared, {v({-1}), v({0.5}), v({1})});
    ASSERT_EQ(pairs.size(), 1u);
    EXPECT_EQ(pairs[0].first, 0u);
    EXPECT_EQ(pairs[0].second, 2u);
    EXPECT_TRUE(identifiability_violations(builtin_ar1_covariance(3),
                                           {v({1, 0.5}), v({1, -0.5}), v({2, 0.5})})
                    .empty());
}

TEST(CovarianceMap, RejectsNonPositiveDefinite) {
    const CovarianceMap sym = builtin_symmetric_covariance(2);
    EXPECT_THROW(sym.evaluate(v({1, 2, 1})), ModelError);
    EXPECT_THROW(builtin_ar1_covariance(2).evaluate(v({1.0, 1.0})), DomainError);
}

TEST(LocationScaleModel, GaussianLogDensity) {
    auto [mean, cov] = builtin_iid_scalar(2);
    const LocationScaleModel model(mean, cov, gaussian_generator(2));
    const VectorXd x = v({0.4, -1.1});
    const double m = 0.2, s2 = 1.7;
    double expected = -std::log(2 * std::numbers::pi * s2);
    expected -= ((x.array() - m).square().sum()) / (2 * s2);
    EXPECT_NEAR(model.log_density(v({m}), v({s2}), x), expected, 1e-13);
}

TEST(LocationScaleModel, DimensionMismatchThrows) {
    auto [mean, cov] = builtin_iid_scalar(2);
    EXPECT_THROW(LocationScaleModel(mean, cov, gaussian_generator(3)), ModelError);
    EXPECT_THROW(LocationScaleModel(mean, cov, nullptr), ModelError);
}
