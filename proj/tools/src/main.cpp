#include <iostream>

#include <CLI11.hpp>

#include "fimcrb_cli/commands.hpp"

namespace {

using fimcrb::cli::RunConfig;

const std::vector<std::string> kElliptical{"gaussian", "gg", "student-t", "compound-gaussian"};
const std::vector<std::string> kAll{"gaussian", "gg", "student-t", "compound-gaussian", "gamma"};

void add_family(CLI::App* app, RunConfig& c, const std::vector<std::string>& families) {
    app->add_option("--family", c.family, "Distribution family")
        ->check(CLI::IsMember(families))
        ->capture_default_str();
    app->add_option("--n", c.n, "Dimension (elliptical) or sample count (gamma)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app->add_option("--s", c.s, "Generalized-Gaussian exponent s > 0")->capture_default_str();
    app->add_option("--nu", c.nu, "Student-t degrees of freedom, nu > 2")->capture_default_str();
    app->add_option("--texture", c.texture,
                    "Compound-Gaussian texture: point:1.0 | two:a,b@p (tau = a w.p. p, b "
                    "otherwise) | invgamma:shape (shape > 1); E[tau] must be 1")
        ->capture_default_str();
}

void add_theta(CLI::App* app, RunConfig& c) {
    app->add_option("--m", c.m, "Mean (default 1 for gamma, 0 otherwise)");
    app->add_option("--sigma2", c.sigma2, "Variance")->capture_default_str();
}

void add_output(CLI::App* app, RunConfig& c, const std::vector<std::string>& formats) {
    app->add_option("-o,--output", c.output,
                    "Output file (relative paths resolve against $FIMCRB_OUTPUT_DIR)");
    app->add_option("--format", c.format, "Output format")
        ->check(CLI::IsMember(formats))
        ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fisher information and Cramer-Rao bounds for elliptical and Gamma location-scale models"};
    app.require_subcommand(1);
    RunConfig c;

    auto* coeffs = app.add_subcommand("coeffs", "Coefficients (a0, a1, a2) of an elliptical generator");
    add_family(coeffs, c, kElliptical);
    add_output(coeffs, c, {"table", "json"});

    auto* crb = app.add_subcommand("crb", "CRB blocks, Gaussian reference and Loewner-order verdict");
    add_family(crb, c, kAll);
    add_theta(crb, c);
    crb->add_option("--iid", c.iid, "Number of i.i.d. replications of the observation")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    crb->add_flag("--unknown-s", c.unknown_s, "Treat the GG exponent as an unknown nuisance parameter");
    add_output(crb, c, {"table", "json"});

    auto* sweep = app.add_subcommand("sweep-s", "n CRB(sigma2)/sigma2^2 against the GG exponent s");
    sweep->add_option("--s-min", c.s_min, "Smallest s")->capture_default_str();
    sweep->add_option("--s-max", c.s_max, "Largest s")->capture_default_str();
    sweep->add_option("--steps", c.steps, "Grid points (s = 1 is added when in range)")
        ->capture_default_str();
    sweep->add_option("--iid", c.iid, "Sample count n reported in the n column")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    add_output(sweep, c, {"csv", "json"});

    auto* verify = app.add_subcommand("verify", "Run the inequality and oracle suite; exit 0 iff all pass");
    verify->add_flag("--quick", c.quick, "Monte Carlo with N = 10^4 instead of 10^6");
    verify->add_option("--samples", c.samples, "Monte Carlo sample count (0 disables Monte Carlo)");
    verify->add_option("--seed", c.seed, "Master seed")->capture_default_str();
    verify->add_option("--inject-fault", c.inject_fault, "Add a deliberately broken generator")
        ->check(CLI::IsMember({"bad-normalization"}));
    add_output(verify, c, {"table", "json"});

    auto* sample = app.add_subcommand("sample", "Draws as CSV, one observation per row");
    add_family(sample, c, kAll);
    add_theta(sample, c);
    sample->add_option("--samples", c.samples, "Number of draws (default 1000)");
    sample->add_option("--seed", c.seed, "Seed")->capture_default_str();
    add_output(sample, c, {"csv"});

    auto* oracle = app.add_subcommand("oracle", "Monte Carlo FIM against the analytic FIM, as JSON");
    add_family(oracle, c, kAll);
    add_theta(oracle, c);
    oracle->add_option("--samples", c.samples, "Monte Carlo sample count (default 10^6)");
    oracle->add_option("--seed", c.seed, "Seed")->capture_default_str();
    add_output(oracle, c, {"json"});

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return fimcrb::cli::kUsageError;
    }
    c.command = app.get_subcommands().front()->get_name();
    if (c.command == "sweep-s" && c.format == "table") {
        c.format = "csv";
    }
    if ((c.command == "sample") && c.format == "table") {
        c.format = "csv";
    }
    if (c.command == "oracle") {
        c.format = "json";
    }
    return fimcrb::cli::run(c, std::cout, std::cerr);
}
