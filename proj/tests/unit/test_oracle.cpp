#include <cmath>

#include <gtest/gtest.h>

#include "fimcrb/error.hpp"
#include "fimcrb/fim.hpp"
#include "fimcrb/oracle.hpp"
#include "oracles.hpp"

using namespace fimcrb;

namespace {

EllipticalScoreModel iid_model(GeneratorPtr g, double m, double s2) {
    auto [mean, cov] = builtin_iid_scalar(g->dimension());
    return EllipticalScoreModel(LocationScaleModel(mean, cov, g), VectorXd::Constant(1, m),
                                VectorXd::Constant(1, s2));
}

}  // namespace

TEST(FiniteDifferenceScore, ExactOnQuadratics) {
    const auto f = [](const VectorXd& t) { return 3.0 * t(0) - 0.5 * t(1) * t(1); };
    VectorXd t(2);
    t << 0.4, 2.0;
    const FiniteDifferenceScore s = finite_difference_score(f, t);
    ASSERT_TRUE(s.ok());
    EXPECT_NEAR(s.score(0), 3.0, 1e-9);
    EXPECT_NEAR(s.score(1), -2.0, 1e-9);
}

TEST(FiniteDifferenceScore, ReportsNonFiniteEvaluations) {
    const auto f = [](const VectorXd& t) { return std::log(t(0)); };
    const FiniteDifferenceScore s = finite_difference_score(f, VectorXd::Zero(1));
    EXPECT_FALSE(s.ok());
}

TEST(AnalyticScores, GaussianClosedForm) {
    const auto g = gaussian_generator(2);
    auto [mean, cov] = builtin_iid_scalar(2);
    const LocationScaleModel model(mean, cov, g);
    VectorXd x(2);
    x << 1.0, -0.5;
    const double m = 0.2, s2 = 1.5;
    const VectorXd s = analytic_scores_elliptical(model, VectorXd::Constant(1, m), VectorXd::Constant(1, s2), x);
    const double ss = (x.array() - m).square().sum();
    EXPECT_NEAR(s(0), (x.array() - m).sum() / s2, 1e-13);
    EXPECT_NEAR(s(1), -1.0 / s2 + ss / (2 * s2 * s2), 1e-13);
}

TEST(AnalyticScores, MatchFiniteDifferencesAcrossFamilies) {
    Rng rng(3);
    for (const char* fam : {"gaussian", "gg", "student-t", "compound-gaussian"}) {
        const GeneratorPtr g = make_generator(fam, 2, 0.5, 5.0, "two:0.5,1.5@0.5");
        const EllipticalScoreModel sm(LocationScaleModel(builtin_full_mean(2), builtin_symmetric_covariance(2), g),
                                      (VectorXd(2) << 0.3, -0.1).finished(),
                                      (VectorXd(3) << 1.5, 0.4, 1.2).finished());
        VectorXd x(2);
        for (int i = 0; i < 50; ++i) {
            sm.sample(rng, x);
            const VectorXd a = sm.score(x);
            const FiniteDifferenceScore fd = finite_difference_score(
                [&](const VectorXd& t) { return sm.log_density(t, x); }, sm.parameters());
            ASSERT_TRUE(fd.ok());
            for (Eigen::Index k = 0; k < a.size(); ++k) {
                EXPECT_NEAR(a(k), fd.score(k), 1e-5 * std::max(1.0, std::abs(a(k)))) << fam;
            }
        }
    }
}

TEST(EmpiricalFim, DeterministicAcrossThreadCounts) {
    const auto sm = iid_model(student_t_generator(1, 5.0), 0.0, 1.0);
    const EmpiricalFim a = empirical_fim(sm, 50000, 11, 1);
    const EmpiricalFim b = empirical_fim(sm, 50000, 11, 4);
    EXPECT_EQ(a.estimate, b.estimate);
    EXPECT_EQ(a.standard_error, b.standard_error);
    EXPECT_NE(a.estimate, empirical_fim(sm, 50000, 12, 1).estimate);
}

TEST(EmpiricalFim, RejectsTooFewSamples) {
    const auto sm = iid_model(gaussian_generator(1), 0.0, 1.0);
    EXPECT_THROW(empirical_fim(sm, 9999, 1), DomainError);
}

TEST(EmpiricalFim, GaussianMatchesSlepianBangs) {
    const auto sm = iid_model(gaussian_generator(1), 0.3, 1.0);
    const EmpiricalFim e = empirical_fim(sm, 200000, 20240611);
    MatrixXd target(2, 2);
    target << 1.0, 0.0, 0.0, 0.5;
    const OracleComparison c = compare_to_target(e.estimate, e.standard_error, target);
    EXPECT_TRUE(c.passed) << "max |z| = " << c.max_abs_z;
    EXPECT_LT(e.mean_score.cwiseAbs().maxCoeff(), 4.0 * e.mean_score_se.maxCoeff());
}

TEST(EmpiricalFim, GammaMatchesClosedForm) {
    const GammaScoreModel sm(GammaModel(1, 1.0, 1.0));
    const EmpiricalFim e = empirical_fim(sm, 200000, 5);
    const OracleComparison c = compare_to_target(e.estimate, e.standard_error, gamma_fim(1.0, 1.0, 1).matrix());
    EXPECT_TRUE(c.passed) << "max |z| = " << c.max_abs_z;
}

TEST(CompareToTarget, ZeroStandardErrorNeedsExactMatch) {
    MatrixXd est(1, 1), se = MatrixXd::Zero(1, 1), tgt(1, 1);
    est << 1.0;
    tgt << 1.0;
    EXPECT_TRUE(compare_to_target(est, se, tgt).passed);
    tgt << 1.0 + 1e-6;
    EXPECT_FALSE(compare_to_target(est, se, tgt).passed);
    MatrixXd se1 = MatrixXd::Constant(1, 1, 0.1);
    tgt << 1.5;
    const OracleComparison c = compare_to_target(est, se1, tgt);
    EXPECT_NEAR(c.z_scores(0, 0), -5.0, 1e-12);
    EXPECT_FALSE(c.passed);
}

TEST(XiStatistic, GaussianIsIdentity) {
    const XiStatistic x = xi_outer_expectation(*gaussian_generator(2), 20000, 1);
    EXPECT_NEAR(x.e_q_phi, 2.0, 1e-10);
    EXPECT_LT((x.quadrature_estimate - MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-8);
    EXPECT_TRUE(x.inequality_holds());
}

TEST(XiStatistic, StudentTExceedsIdentity) {
    const XiStatistic x = xi_outer_expectation(*student_t_generator(2, 5.0), 100000, 2);
    EXPECT_NEAR(x.quadrature_min_excess, oracle::student_t_a0(2, 5.0) - 1.0, 1e-8);
    EXPECT_TRUE(x.inequality_holds());
    // E[y xi^T] = -I by integration by parts
    EXPECT_LT(((x.mc_y_xi + MatrixXd::Identity(2, 2)).array().abs() - 4.0 * x.mc_y_xi_se.array()).maxCoeff(), 0.0);
}
