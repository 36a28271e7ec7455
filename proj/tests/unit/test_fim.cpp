#include <cmath>

#include <gtest/gtest.h>

#include "fimcrb/error.hpp"
#include "fimcrb/fim.hpp"
#include "fimcrb/generators.hpp"
#include "oracles.hpp"

using namespace fimcrb;

TEST(Coefficients, GaussianQuadrature) {
    for (int n : {1, 2, 4}) {
        const EllipticalCoefficients c = elliptical_coefficients_quadrature(*gaussian_generator(n));
        EXPECT_NEAR(c.a0, 1.0, 1e-8);
        EXPECT_NEAR(c.a1, 0.5, 1e-8);
        EXPECT_NEAR(c.a2, 0.0, 1e-8);
        EXPECT_EQ(c.method, EllipticalCoefficients::Method::quadrature);
    }
}

TEST(Coefficients, GgQuadratureMatchesClosedForm) {
    for (int n : {1, 2, 4}) {
        for (double s : {0.25, 0.5, 1.0, 2.0, 4.0}) {
            const EllipticalCoefficients q =
                elliptical_coefficients_quadrature(*generalized_gaussian_generator(n, s));
            const EllipticalCoefficients c = gg_coefficients_closed_form(n, s);
            EXPECT_NEAR(q.a1, c.a1, 1e-8) << n << " " << s;
            EXPECT_NEAR(q.a2, c.a2, 1e-8) << n << " " << s;
            EXPECT_FALSE(c.has_a0());
        }
    }
}

TEST(Coefficients, GgA0MatchesGammaMoment) {
    for (int n : {1, 2, 4}) {
        for (double s : {0.3, 0.5, 1.0, 2.0, 4.0}) {
            const double a0 = elliptical_coefficients_quadrature(*generalized_gaussian_generator(n, s)).a0;
            const double ref = oracle::gg_a0(n, s);
            EXPECT_NEAR(a0, ref, 1e-8 * ref) << n << " " << s;
        }
    }
    EXPECT_TRUE(std::isinf(elliptical_coefficients_quadrature(*generalized_gaussian_generator(1, 0.25)).a0));
    // finite, but ln a0 ~ 1375 overflows a double
    EXPECT_GT(oracle::gg_a0(2, 1e-3), 1e308);
    EXPECT_TRUE(std::isinf(elliptical_coefficients_quadrature(*generalized_gaussian_generator(2, 1e-3)).a0));
}

TEST(Coefficients, StudentTClosedForms) {
    for (int n : {1, 2, 4}) {
        for (double nu : {3.0, 5.0, 12.0}) {
            const EllipticalCoefficients c = elliptical_coefficients_quadrature(*student_t_generator(n, nu));
            EXPECT_NEAR(c.a0, oracle::student_t_a0(n, nu), 1e-9);
            EXPECT_NEAR(c.a1, oracle::student_t_a1(n, nu), 1e-9);
        }
    }
}

TEST(Coefficients, TwoPointCompoundMatchesBoostQuadrature) {
    for (int n : {1, 2}) {
        const oracle::DiscreteCompound ref(n, {{0.5, 0.5}, {1.5, 0.5}});
        const auto g = compound_gaussian_generator(n, parse_texture("two:0.5,1.5@0.5"));
        const EllipticalCoefficients c = elliptical_coefficients_quadrature(*g);
        EXPECT_NEAR(c.a0, ref.a0(), 1e-9);
        EXPECT_NEAR(c.a1, ref.a1(), 1e-9);
        EXPECT_NEAR(compound_gaussian_a1(*g), c.a1, 1e-9);
    }
}

TEST(Coefficients, PhiPrimeRouteAgrees) {
    for (double s : {0.25, 0.5, 2.0}) {
        const auto g = generalized_gaussian_generator(2, s);
        EXPECT_NEAR(a1_via_phi_prime(*g), gg_coefficients_closed_form(2, s).a1, 1e-9);
    }
    EXPECT_THROW(compound_gaussian_a1(*generalized_gaussian_generator(2, 0.5)), ModelError);
}

TEST(Coefficients, ClosedFormDomain) {
    EXPECT_THROW(gg_coefficients_closed_form(1, 0.0), DomainError);
    EXPECT_THROW(gg_coefficients_closed_form(0, 1.0), DomainError);
    EXPECT_EQ(gg_coefficients_closed_form(3, 1.0).a2, 0.0);
    EXPECT_FALSE(std::signbit(gg_coefficients_closed_form(3, 1.0).a2));
}

TEST(SlepianBangs, IidScalar) {
    for (int n : {1, 5}) {
        const auto [mean, cov] = builtin_iid_scalar(n);
        const double s2 = 1.7;
        const FimMatrix f = slepian_bangs_gaussian(mean, cov, VectorXd::Constant(1, 0.3), VectorXd::Constant(1, s2));
        EXPECT_NEAR(f.matrix()(0, 0), n / s2, 1e-13);
        EXPECT_NEAR(f.matrix()(1, 1), n / (2 * s2 * s2), 1e-13);
        EXPECT_EQ(f.matrix()(0, 1), 0.0);
        EXPECT_EQ(f.index().q1, 1);
        EXPECT_EQ(f.index().q2, 1);
    }
}

TEST(CovarianceInformation, RoutesAgree) {
    for (int n : {3, 10}) {
        const CovarianceMap cov = builtin_ar1_covariance(n);
        VectorXd t(2);
        t << 1.3, 0.6;
        const MatrixXd s = cov.evaluate(t);
        const MatrixXd si = s.inverse();
        const MatrixXd j = cov.jacobian_vec(t);
        const MatrixXd a = covariance_information(j, si, 0.4, -0.05, KroneckerRoute::materialized);
        const MatrixXd b = covariance_information(j, si, 0.4, -0.05, KroneckerRoute::contracted);
        EXPECT_LT((a - b).cwiseAbs().maxCoeff(), 1e-11 * a.cwiseAbs().maxCoeff());
    }
}

TEST(EllipticalFim, GaussianCoefficientsReproduceSlepianBangs) {
    const MeanMap mean = builtin_full_mean(3);
    const CovarianceMap cov = builtin_ar1_covariance(3);
    VectorXd t1(3), t2(2);
    t1 << 0.1, -0.2, 0.3;
    t2 << 2.0, -0.4;
    const EllipticalCoefficients c = elliptical_coefficients_quadrature(*gaussian_generator(3));
    const MatrixXd a = elliptical_fim(mean, cov, c, t1, t2).matrix();
    const MatrixXd b = slepian_bangs_gaussian(mean, cov, t1, t2).matrix();
    EXPECT_LT((a - b).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(EllipticalFim, RequiresFiniteA0ForMeanParameters) {
    const auto [mean, cov] = builtin_iid_scalar(1);
    const VectorXd t1 = VectorXd::Constant(1, 0.0), t2 = VectorXd::Constant(1, 1.0);
    EXPECT_THROW(elliptical_fim(mean, cov, gg_coefficients_closed_form(1, 0.5), t1, t2), NumericError);
    const auto inf = elliptical_coefficients_quadrature(*generalized_gaussian_generator(1, 0.2));
    EXPECT_THROW(elliptical_fim(mean, cov, inf, t1, t2), NumericError);
    EXPECT_THROW(elliptical_fim(mean, cov, gg_coefficients_closed_form(2, 0.5), t1, t2), ModelError);
}

TEST(FimMatrix, Validation) {
    MatrixXd asym(2, 2);
    asym << 1, 0.5, 0.4, 1;
    EXPECT_THROW(FimMatrix(asym, BlockIndex{1, 1, 0}), ModelError);
    MatrixXd indefinite(2, 2);
    indefinite << 1, 2, 2, 1;
    EXPECT_THROW(FimMatrix(indefinite, BlockIndex{1, 1, 0}), ModelError);
    EXPECT_THROW(FimMatrix(MatrixXd::Identity(2, 2), BlockIndex{1, 2, 0}), ModelError);
    MatrixXd nan = MatrixXd::Identity(2, 2);
    nan(0, 0) = NAN;
    EXPECT_THROW(FimMatrix(nan, BlockIndex{1, 1, 0}), NumericError);

    const FimMatrix f(MatrixXd::Identity(3, 3), BlockIndex{1, 1, 1});
    EXPECT_EQ(f.block(Block::theta3, Block::theta3)(0, 0), 1.0);
    EXPECT_EQ(f.replicated(4).matrix()(2, 2), 4.0);
    EXPECT_THROW(f.replicated(0), DomainError);
}
