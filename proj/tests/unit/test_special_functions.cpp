#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "fimcrb/special_functions.hpp"
#include "oracles.hpp"

using namespace fimcrb;

namespace {

const double kGrid[] = {1e-3, 0.01, 0.1, 0.25, 0.5, 1.0, 1.5, 2.0, 3.7, 9.99,
                        10.0, 10.01, 25.0, 100.0, 1e3, 1e5, 1e8};

}  // namespace

TEST(Digamma, MatchesBoost) {
    for (double x : kGrid) {
        const double ref = oracle::digamma(x);
        EXPECT_NEAR(digamma(x), ref, 1e-13 * std::max(1.0, std::abs(ref))) << "x = " << x;
    }
}

TEST(Digamma, KnownValues) {
    EXPECT_NEAR(digamma(1.0), -std::numbers::egamma, 1e-15);
    EXPECT_NEAR(digamma(0.5), -std::numbers::egamma - 2.0 * std::numbers::ln2, 1e-14);
}

TEST(Trigamma, MatchesBoost) {
    for (double x : kGrid) {
        const double ref = oracle::trigamma(x);
        EXPECT_NEAR(trigamma(x), ref, 1e-13 * ref) << "x = " << x;
    }
}

TEST(Trigamma, KnownValues) {
    EXPECT_NEAR(trigamma(1.0), std::numbers::pi * std::numbers::pi / 6.0, 1e-14);
    EXPECT_NEAR(trigamma(0.5), std::numbers::pi * std::numbers::pi / 2.0, 1e-13);
}

TEST(Trigamma, RecurrenceHolds) {
    for (double x : {0.3, 1.7, 8.5, 42.0}) {
        EXPECT_NEAR(trigamma(x) - trigamma(x + 1.0), 1.0 / (x * x), 1e-13 / (x * x));
    }
}

TEST(TrigammaExcess, MatchesDirectFormAtModerateArguments) {
    for (double x : {0.1, 1.0, 2.0, 5.0, 20.0}) {
        EXPECT_NEAR(trigamma_excess(x), x * oracle::trigamma(x) - 1.0, 1e-13);
    }
}

TEST(TrigammaExcess, AsymptoticAtLargeArguments) {
    for (double x : {1e4, 1e6, 1e8, 1e12}) {
        const double series = 1.0 / (2.0 * x) + 1.0 / (6.0 * x * x);
        EXPECT_NEAR(trigamma_excess(x), series, 1e-12 * series) << "x = " << x;
    }
}

TEST(TrigammaExcess, PositiveEverywhere) {
    for (double x : kGrid) {
        EXPECT_GT(trigamma_excess(x), 0.0);
    }
}

TEST(LogDelta, MatchesSurfaceAreaFormula) {
    for (int n : {1, 2, 3, 4, 10}) {
        EXPECT_NEAR(log_delta(n), oracle::log_delta(n), 1e-13);
    }
    EXPECT_NEAR(std::exp(log_delta(2)), 1.0 / std::numbers::pi, 1e-15);
}
