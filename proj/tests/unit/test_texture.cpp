#include <cmath>

#include <gtest/gtest.h>

#include "fimcrb/error.hpp"
#include "fimcrb/texture.hpp"

using namespace fimcrb;

TEST(Texture, ParsesGrammar) {
    const TextureDistribution point = parse_texture("point:1.0");
    EXPECT_EQ(point.kind(), TextureDistribution::Kind::point_mass);
    const TextureDistribution two = parse_texture("two:0.5,1.5@0.5");
    EXPECT_EQ(two.kind(), TextureDistribution::Kind::two_point);
    EXPECT_DOUBLE_EQ(two.mean(), 1.0);
    const TextureDistribution ig = parse_texture("invgamma:2.5");
    EXPECT_EQ(ig.kind(), TextureDistribution::Kind::inverse_gamma);
    EXPECT_DOUBLE_EQ(ig.mean(), 1.0);
}

TEST(Texture, CanonicalSpecRoundTrips) {
    for (const char* spec : {"point:1", "two:0.5,1.5@0.5", "two:0.25,1.75@0.5", "invgamma:2.5"}) {
        const TextureDistribution t = parse_texture(spec);
        const TextureDistribution u = parse_texture(t.spec());
        EXPECT_EQ(t.parameters(), u.parameters()) << spec;
    }
}

TEST(Texture, RejectsBadInput) {
    EXPECT_THROW(parse_texture("point:2.0"), ConstraintError);
    EXPECT_THROW(parse_texture("two:0.5,2.0@0.5"), ConstraintError);
    EXPECT_THROW(parse_texture("invgamma:1.0"), DomainError);
    EXPECT_THROW(parse_texture("bogus:1"), DomainError);
    EXPECT_THROW(parse_texture("two:0.5@0.5"), DomainError);
    EXPECT_THROW(parse_texture("point:abc"), DomainError);
    EXPECT_THROW(parse_texture("two:0.5,1.5@1.5"), DomainError);
}

TEST(Texture, LogMixtureMomentTwoPoint) {
    const TextureDistribution t = TextureDistribution::two_point(0.5, 1.5, 0.5);
    for (double p : {0.5, 1.0, 2.5}) {
        for (double x : {0.0, 0.3, 4.0, 60.0}) {
            const double direct = 0.5 * std::pow(0.5, -p) * std::exp(-x / 1.0) +
                                  0.5 * std::pow(1.5, -p) * std::exp(-x / 3.0);
            EXPECT_NEAR(t.log_mixture_moment(p, x), std::log(direct), 1e-13);
        }
    }
}

TEST(Texture, LogMixtureMomentInverseGamma) {
    // E[tau^-p e^{-t/(2 tau)}] = Gamma(a+p) b^a / (Gamma(a) (b + t/2)^{a+p}), b = a - 1
    const double a = 2.5, b = 1.5;
    const TextureDistribution tex = TextureDistribution::inverse_gamma(a);
    for (double p : {0.5, 1.5}) {
        for (double x : {0.0, 1.0, 50.0}) {
            const double expected = std::lgamma(a + p) - std::lgamma(a) + a * std::log(b) -
                                    (a + p) * std::log(b + 0.5 * x);
            EXPECT_NEAR(tex.log_mixture_moment(p, x), expected, 1e-12);
        }
    }
}

TEST(Texture, SampleMeanIsOne) {
    Rng rng(7);
    for (const char* spec : {"two:0.5,1.5@0.5", "invgamma:4"}) {
        const TextureDistribution t = parse_texture(spec);
        double sum = 0.0;
        const int count = 200000;
        for (int i = 0; i < count; ++i) sum += t.sample(rng);
        EXPECT_NEAR(sum / count, 1.0, 0.01) << spec;
    }
}
