#include <set>
#include <string>

#include <gtest/gtest.h>

#include "fimcrb/radial.hpp"
#include "fimcrb/suite.hpp"

using namespace fimcrb;

TEST(Suite, QuickRunPasses) {
    const SuiteReport r = verify_inequality_suite(quick_suite_config());
    for (const CheckResult* f : r.failures()) {
        ADD_FAILURE() << f->group << "/" << f->name << " " << f->family << " n=" << f->n << ": " << f->detail;
    }
    EXPECT_TRUE(r.all_passed());
    EXPECT_GT(r.count(CheckStatus::passed), 100u);
    EXPECT_EQ(r.count(CheckStatus::skipped), 0u);
}

TEST(Suite, CoversEveryCheckGroup) {
    SuiteConfig c = quick_suite_config();
    const SuiteReport r = verify_inequality_suite(c);
    std::set<std::string> names;
    for (const CheckResult& x : r.checks) names.insert(x.name);
    for (const char* needed :
         {"normalization", "mean_q", "identity.e_q_phi", "bounds.a1_lower", "bounds.a2_lower",
          "mean_info.a0_at_least_1", "oracle.fim_agreement", "oracle.decoupling", "oracle.gamma_coupling",
          "gamma.expansion_coefficient", "sweep.known_s_equals_2_over_s"}) {
        EXPECT_TRUE(names.count(needed)) << needed;
    }
}

TEST(Suite, InjectedFaultIsNamedAndDependentsSkipped) {
    SuiteConfig c = quick_suite_config();
    c.inject_bad_normalization = true;
    const SuiteReport r = verify_inequality_suite(c);
    EXPECT_FALSE(r.all_passed());
    bool saw_normalization = false;
    for (const CheckResult* f : r.failures()) {
        if (f->name == "normalization") saw_normalization = true;
        EXPECT_LT(f->margin, 0.0);
    }
    EXPECT_TRUE(saw_normalization);
    EXPECT_GT(r.count(CheckStatus::skipped), 0u);
    for (const CheckResult& x : r.checks) {
        if (x.status == CheckStatus::skipped) {
            EXPECT_NE(x.detail.find("generator constraints failed"), std::string::npos);
        }
    }
}

TEST(Suite, DeterministicGivenSeed) {
    const SuiteConfig c = quick_suite_config();
    const SuiteReport a = verify_inequality_suite(c), b = verify_inequality_suite(c);
    ASSERT_EQ(a.checks.size(), b.checks.size());
    for (std::size_t i = 0; i < a.checks.size(); ++i) {
        EXPECT_EQ(a.checks[i].name, b.checks[i].name);
        if (!std::isnan(a.checks[i].value)) EXPECT_EQ(a.checks[i].value, b.checks[i].value) << a.checks[i].name;
    }
}

TEST(DilatedGenerator, BreaksBothConstraints) {
    const GeneratorPtr g = dilated_generator(gaussian_generator(2), 1.5);
    const GeneratorConstraintReport r = check_generator_constraints(*g);
    EXPECT_NEAR(r.normalization / r.delta, 1.5, 1e-9);
    EXPECT_NEAR(r.mean_q, 3.0, 1e-9);
    EXPECT_FALSE(r.passed());
}
