#include <clocale>
#include <limits>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "fimcrb/report_io.hpp"

using namespace fimcrb;

TEST(FormatNumber, Basics) {
    EXPECT_EQ(format_number(0.5), "0.5");
    EXPECT_EQ(format_number(2.0 / 3.0), "0.666666666667");
    EXPECT_EQ(format_number(std::numeric_limits<double>::infinity()), "inf");
    EXPECT_EQ(format_number(-std::numeric_limits<double>::infinity()), "-inf");
    EXPECT_EQ(format_number(std::numeric_limits<double>::quiet_NaN()), "nan");
}

TEST(FormatNumber, IgnoresGlobalLocale) {
    const char* old = std::setlocale(LC_NUMERIC, nullptr);
    const std::string saved = old ? old : "C";
    if (std::setlocale(LC_NUMERIC, "de_DE.UTF-8")) {
        EXPECT_EQ(format_number(1.25), "1.25");
    }
    std::setlocale(LC_NUMERIC, saved.c_str());
}

TEST(CoefficientsJson, ParsesWithExpectedKeys) {
    EllipticalCoefficients c = gg_coefficients_closed_form(2, 0.5);
    c.a0 = std::numeric_limits<double>::infinity();
    const FimMatrix f(MatrixXd::Identity(2, 2), BlockIndex{1, 1, 0});
    const auto j = nlohmann::json::parse(coefficients_json("gg", 2, {{"s", 0.5}}, c, &f));
    EXPECT_EQ(j["family"], "gg");
    EXPECT_EQ(j["n"], 2);
    EXPECT_EQ(j["a0"], "inf");
    EXPECT_NEAR(j["a1"].get<double>(), 0.375, 1e-12);
    EXPECT_EQ(j["fim"].size(), 4u);
    EXPECT_FALSE(nlohmann::json::parse(coefficients_json("gg", 2, {}, c)).contains("fim"));
}

TEST(SweepCsv, HeaderAndRows) {
    std::ostringstream out;
    write_sweep_csv(out, {{0.5, 1, 4.0, 4.86, 2.0, -0.04}, {1.0, 1, 2.0, 2.0, 2.0, 0.0}}, "n=1");
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "# config: n=1");
    std::getline(in, line);
    EXPECT_EQ(line, "s,n,crb_known_s,crb_unknown_s,gaussian_level");
    std::getline(in, line);
    EXPECT_EQ(line, "0.5,1,4,4.86,2");
    std::getline(in, line);
    EXPECT_EQ(line, "1,1,2,2,2");
}

TEST(SampleCsv, Header) {
    std::ostringstream out;
    write_sample_csv(out, MatrixXd::Ones(2, 3), "seed=1");
    EXPECT_EQ(out.str(), "# config: seed=1\nx1,x2,x3\n1,1,1\n1,1,1\n");
}

TEST(SuiteJson, RoundTripCounts) {
    SuiteReport r;
    CheckResult ok;
    ok.group = "g";
    ok.name = "a";
    ok.status = CheckStatus::passed;
    CheckResult bad = ok;
    bad.name = "b";
    bad.status = CheckStatus::failed;
    r.checks = {ok, bad};
    const auto j = nlohmann::json::parse(suite_json(r));
    EXPECT_EQ(j["passed"], 1);
    EXPECT_EQ(j["failed"], 1);
    EXPECT_EQ(j["verdict"], "fail");
    EXPECT_EQ(j["checks"][1]["name"], "b");
    EXPECT_NE(suite_table(r).find("FAIL"), std::string::npos);
}
