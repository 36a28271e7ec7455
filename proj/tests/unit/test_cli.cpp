#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "fimcrb_cli/commands.hpp"

using namespace fimcrb::cli;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome invoke(const RunConfig& c) {
    std::ostringstream out, err;
    const int code = run(c, out, err);
    return {code, out.str(), err.str()};
}

RunConfig command(const std::string& name) {
    RunConfig c;
    c.command = name;
    return c;
}

std::vector<std::vector<double>> csv_rows(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || std::isalpha(static_cast<unsigned char>(line[0]))) continue;
        std::vector<double> row;
        std::istringstream cells(line);
        std::string cell;
        while (std::getline(cells, cell, ',')) row.push_back(std::stod(cell));
        rows.push_back(row);
    }
    return rows;
}

}  // namespace

TEST(Cli, CoeffsGg) {
    RunConfig c = command("coeffs");
    c.family = "gg";
    c.s = 2.0;
    c.format = "json";
    const Outcome o = invoke(c);
    ASSERT_EQ(o.code, kSuccess) << o.err;
    const auto j = nlohmann::json::parse(o.out);
    EXPECT_NEAR(j["a1"].get<double>(), 5.0 / 6.0, 1e-10);
    EXPECT_NEAR(j["a2"].get<double>(), 1.0 / 6.0, 1e-10);
}

TEST(Cli, CoeffsTableMentionsBothRoutes) {
    RunConfig c = command("coeffs");
    c.family = "gg";
    c.s = 0.5;
    const Outcome o = invoke(c);
    ASSERT_EQ(o.code, kSuccess);
    EXPECT_NE(o.out.find("closed-form"), std::string::npos);
    EXPECT_NE(o.out.find("quadrature"), std::string::npos);
}

TEST(Cli, UnknownFamilyIsUsageError) {
    RunConfig c = command("coeffs");
    c.family = "laplace";
    const Outcome o = invoke(c);
    EXPECT_EQ(o.code, kUsageError);
    EXPECT_FALSE(o.err.empty());
    EXPECT_EQ(invoke(command("frobnicate")).code, kUsageError);
}

TEST(Cli, InvalidParameterIsUsageError) {
    RunConfig c = command("crb");
    c.family = "gg";
    c.s = -1.0;
    EXPECT_EQ(invoke(c).code, kUsageError);
    RunConfig r = command("crb");
    r.family = "gg";
    r.s = 20.0;
    r.unknown_s = true;
    EXPECT_EQ(invoke(r).code, kUsageError);
}

TEST(Cli, GammaCrb) {
    RunConfig c = command("crb");
    c.family = "gamma";
    c.m = 2.0;
    c.n = 10;
    c.format = "json";
    const Outcome o = invoke(c);
    ASSERT_EQ(o.code, kSuccess) << o.err;
    const auto j = nlohmann::json::parse(o.out);
    EXPECT_NEAR(j["crb_theta1"][0][0].get<double>(), 0.1, 1e-12);
    EXPECT_NEAR(j["crb_theta2"][0][0].get<double>(), 0.284785742812584, 1e-12);
}

TEST(Cli, GgIidCrb) {
    RunConfig c = command("crb");
    c.family = "gg";
    c.s = 1.0;
    c.iid = 50;
    const Outcome o = invoke(c);
    ASSERT_EQ(o.code, kSuccess) << o.err;
    EXPECT_NE(o.out.find("0.04"), std::string::npos);
}

TEST(Cli, UnknownShapeCrb) {
    RunConfig c = command("crb");
    c.family = "gg";
    c.s = 0.5;
    c.unknown_s = true;
    const Outcome o = invoke(c);
    ASSERT_EQ(o.code, kSuccess) << o.err;
    EXPECT_NE(o.out.find("4.86246113"), std::string::npos);
}

TEST(Cli, SweepRows) {
    RunConfig c = command("sweep-s");
    c.format = "csv";
    const Outcome o = invoke(c);
    ASSERT_EQ(o.code, kSuccess) << o.err;
    EXPECT_NE(o.out.find("s,n,crb_known_s,crb_unknown_s,gaussian_level"), std::string::npos);
    const auto rows = csv_rows(o.out);
    ASSERT_GE(rows.size(), 8u);
    bool saw_one = false;
    for (const auto& r : rows) {
        ASSERT_EQ(r.size(), 5u);
        EXPECT_NEAR(r[2], 2.0 / r[0], 1e-9);
        EXPECT_GE(r[3], r[2] - 1e-9);
        if (r[0] == 1.0) {
            saw_one = true;
            EXPECT_NEAR(r[3], 2.0, 1e-6);
        }
    }
    EXPECT_TRUE(saw_one);
}

TEST(Cli, SampleIsDeterministic) {
    RunConfig c = command("sample");
    c.family = "student-t";
    c.n = 3;
    c.samples = 500;
    c.seed = 42;
    c.format = "csv";
    const Outcome a = invoke(c), b = invoke(c);
    ASSERT_EQ(a.code, kSuccess) << a.err;
    EXPECT_EQ(a.out, b.out);
    c.seed = 43;
    EXPECT_NE(invoke(c).out, a.out);
}

TEST(Cli, GammaSamplesArePositive) {
    RunConfig c = command("sample");
    c.family = "gamma";
    c.n = 3;
    c.samples = 2000;
    c.format = "csv";
    const Outcome o = invoke(c);
    ASSERT_EQ(o.code, kSuccess) << o.err;
    const auto rows = csv_rows(o.out);
    ASSERT_EQ(rows.size(), 2000u);
    double sum = 0.0;
    for (const auto& r : rows) {
        ASSERT_EQ(r.size(), 3u);
        for (double x : r) {
            EXPECT_GT(x, 0.0);
            sum += x;
        }
    }
    EXPECT_NEAR(sum / 6000.0, 1.0, 0.05);
}

TEST(Cli, EllipticalSampleCovariance) {
    RunConfig c = command("sample");
    c.family = "gg";
    c.s = 0.5;
    c.n = 2;
    c.sigma2 = 2.0;
    c.samples = 100000;
    const Outcome o = invoke(c);
    ASSERT_EQ(o.code, kSuccess) << o.err;
    double s11 = 0, s12 = 0, q11 = 0;
    const auto rows = csv_rows(o.out);
    for (const auto& r : rows) {
        s11 += r[0] * r[0];
        s12 += r[0] * r[1];
        q11 += std::pow(r[0], 4);
    }
    const double n = static_cast<double>(rows.size());
    const double se = std::sqrt((q11 / n - std::pow(s11 / n, 2)) / n);
    EXPECT_NEAR(s11 / n, 2.0, 4 * se);
    EXPECT_NEAR(s12 / n, 0.0, 4 * se);
}

TEST(Cli, VerifyQuickPassesAndFaultFails) {
    RunConfig c = command("verify");
    c.quick = true;
    EXPECT_EQ(invoke(c).code, kSuccess);
    c.inject_fault = "bad-normalization";
    const Outcome o = invoke(c);
    EXPECT_EQ(o.code, kVerificationFailure);
    EXPECT_NE(o.out.find("failed: normalization"), std::string::npos);
}

TEST(Cli, OracleJson) {
    RunConfig c = command("oracle");
    c.family = "student-t";
    c.samples = 100000;
    c.format = "json";
    const Outcome o = invoke(c);
    ASSERT_EQ(o.code, kSuccess) << o.err;
    const auto j = nlohmann::json::parse(o.out);
    EXPECT_EQ(j["config"]["seed"], 20240611);
    EXPECT_LE(j["max_abs_z"].get<double>(), 4.0);
}

TEST(Cli, InfiniteMeanInformationIsNumericError) {
    RunConfig c = command("oracle");
    c.family = "gg";
    c.s = 0.2;
    c.samples = 10000;
    EXPECT_EQ(invoke(c).code, kNumericError);
}

TEST(Cli, OutputDirectoryFromEnvironment) {
    const auto dir = std::filesystem::temp_directory_path() / "fimcrb_cli_test";
    std::filesystem::create_directories(dir);
    ::setenv("FIMCRB_OUTPUT_DIR", dir.c_str(), 1);
    RunConfig c = command("coeffs");
    c.output = "coeffs.txt";
    const Outcome o = invoke(c);
    ::unsetenv("FIMCRB_OUTPUT_DIR");
    ASSERT_EQ(o.code, kSuccess) << o.err;
    EXPECT_TRUE(o.out.empty());
    std::ifstream in(dir / "coeffs.txt");
    std::stringstream text;
    text << in.rdbuf();
    EXPECT_NE(text.str().find("config"), std::string::npos);
    std::filesystem::remove_all(dir);
}

TEST(Cli, ConfigSerializationIsParseable) {
    RunConfig c = command("crb");
    c.family = "gamma";
    const auto j = nlohmann::json::parse(serialize(c));
    EXPECT_EQ(j["family"], "gamma");
    EXPECT_EQ(j["m"], 1.0);
}
