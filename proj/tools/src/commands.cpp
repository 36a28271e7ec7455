#include "fimcrb_cli/commands.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <nlohmann/json.hpp>

#include "fimcrb/crb.hpp"
#include "fimcrb/error.hpp"
#include "fimcrb/fim.hpp"
#include "fimcrb/gamma_model.hpp"
#include "fimcrb/generators.hpp"
#include "fimcrb/gg_shape.hpp"
#include "fimcrb/oracle.hpp"
#include "fimcrb/report_io.hpp"
#include "fimcrb/sampling.hpp"
#include "fimcrb/suite.hpp"

namespace fimcrb::cli {
namespace {

using nlohmann::json;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

bool is_elliptical(const std::string& family) {
    return family == "gaussian" || family == "gg" || family == "student-t" ||
           family == "compound-gaussian";
}

GeneratorPtr generator_for(const RunConfig& c, int n) {
    if (!is_elliptical(c.family)) {
        throw UsageError("family '" + c.family + "' is not elliptical");
    }
    return make_generator(c.family, n, c.s, c.nu, c.texture);
}

LocationScaleModel model_for(const RunConfig& c) {
    auto [mean, cov] = builtin_iid_scalar(c.n);
    return LocationScaleModel(mean, cov, generator_for(c, c.n));
}

std::string num(double x) { return format_number(x); }

std::string params_text(const ParameterList& params) {
    std::string out;
    for (const auto& [k, v] : params) {
        out += (out.empty() ? "" : " ") + k + "=" + num(v);
    }
    return out.empty() ? "-" : out;
}

}  // namespace

std::string serialize(const RunConfig& c) {
    json j = {{"command", c.command}, {"family", c.family}, {"n", c.n},
              {"s", c.s}, {"nu", c.nu}, {"texture", c.texture},
              {"m", c.mean()}, {"sigma2", c.sigma2}, {"iid", c.iid},
              {"unknown_s", c.unknown_s}, {"seed", c.seed}, {"format", c.format},
              {"quick", c.quick}, {"inject_fault", c.inject_fault},
              {"s_min", c.s_min}, {"s_max", c.s_max}, {"steps", c.steps}};
    j["samples"] = c.samples ? json(*c.samples) : json(nullptr);
    return j.dump();
}

int cmd_coeffs(const RunConfig& c, std::ostream& out) {
    const GeneratorPtr gen = generator_for(c, c.n);
    const EllipticalCoefficients quad = elliptical_coefficients_quadrature(*gen);
    std::optional<EllipticalCoefficients> closed;
    if (c.family == "gg") {
        closed = gg_coefficients_closed_form(c.n, c.s);
    } else if (c.family == "gaussian") {
        closed = gg_coefficients_closed_form(c.n, 1.0);
        closed->a0 = 1.0;
    }
    const double tol = 1e-8;
    const bool converged = quad.a0_error <= tol && quad.a1_error <= tol;

    if (c.format == "json") {
        json j = json::parse(coefficients_json(gen->family(), c.n, gen->shape(), quad));
        if (closed) {
            json cf = {{"a1", closed->a1}, {"a2", closed->a2}};
            cf["a0"] = closed->has_a0() ? json(closed->a0) : json(nullptr);
            j["closed_form"] = cf;
            j["difference"] = {{"a1", quad.a1 - closed->a1}, {"a2", quad.a2 - closed->a2}};
        }
        j["quadrature_error"] = {{"a0", quad.a0_error}, {"a1", quad.a1_error}};
        j["config"] = json::parse(serialize(c));
        out << j.dump(2) << "\n";
        return kSuccess;
    }
    out << "# config: " << serialize(c) << "\n";
    out << "family " << gen->family() << ", n = " << c.n << ", " << params_text(gen->shape()) << "\n";
    out << std::left << std::setw(6) << "coef" << std::setw(20) << "quadrature" << std::setw(20)
        << "closed-form" << "difference\n";
    auto row = [&](const char* name, double q, std::optional<double> cf) {
        out << std::setw(6) << name << std::setw(20) << num(q) << std::setw(20)
            << (cf ? num(*cf) : "-") << (cf ? num(q - *cf) : "-") << "\n";
    };
    row("a0", quad.a0, closed && closed->has_a0() ? std::optional<double>(closed->a0) : std::nullopt);
    row("a1", quad.a1, closed ? std::optional<double>(closed->a1) : std::nullopt);
    row("a2", quad.a2, closed ? std::optional<double>(closed->a2) : std::nullopt);
    out << "quadrature error estimates: a0 " << num(quad.a0_error) << ", a1 " << num(quad.a1_error)
        << " (" << (converged ? "converged to 1e-8" : "NOT converged to 1e-8") << ")\n";
    return kSuccess;
}

int cmd_crb(const RunConfig& c, std::ostream& out) {
    if (c.iid < 1) {
        throw UsageError("--iid must be >= 1");
    }
    if (c.family == "gamma") {
        const CrbReport report = gamma_crb_report(c.mean(), c.sigma2, c.n);
        if (c.format == "json") {
            json j = json::parse(crb_report_json(report));
            const FimMatrix fim = gamma_fim(c.mean(), c.sigma2, c.n);
            json flat = json::array();
            for (Eigen::Index i = 0; i < 2; ++i) {
                for (Eigen::Index k = 0; k < 2; ++k) {
                    flat.push_back(fim.matrix()(i, k));
                }
            }
            j["fim"] = flat;
            j["blocks"] = {{"theta1", 1}, {"theta2", 1}, {"theta3", 0}};
            j["config"] = json::parse(serialize(c));
            out << j.dump(2) << "\n";
            return kSuccess;
        }
        out << "# config: " << serialize(c) << "\n";
        out << "CRB(m) = " << num((*report.crb_theta1)(0, 0)) << "\n";
        out << "CRB(sigma2) = " << num(report.crb_theta2(0, 0)) << "\n";
        out << crb_report_table(report);
        return kSuccess;
    }

    if (c.unknown_s) {
        if (c.family != "gg" || c.n != 1) {
            throw UsageError("--unknown-s needs --family gg with --n 1 (i.i.d. scalar observations)");
        }
        const GgCrbResult known = gg_crb_sigma2(c.iid, c.s, ShapeKnowledge::known_s);
        const GgCrbResult unknown = gg_crb_sigma2(c.iid, c.s, ShapeKnowledge::unknown_s);
        const double scale = c.sigma2 * c.sigma2 / c.iid;
        if (c.format == "json") {
            json j = {{"family", "gg"},
                      {"s", c.s},
                      {"n", c.iid},
                      {"crb_sigma2_known_s", known.normalized_crb * scale},
                      {"crb_sigma2_unknown_s", unknown.normalized_crb * scale},
                      {"normalized_known_s", known.normalized_crb},
                      {"normalized_unknown_s", unknown.normalized_crb},
                      {"a3_estimate", unknown.a3_estimate},
                      {"method", unknown.method},
                      {"config", json::parse(serialize(c))}};
            out << j.dump(2) << "\n";
            return kSuccess;
        }
        out << "# config: " << serialize(c) << "\n";
        out << "CRB(sigma2), s known = " << num(known.normalized_crb * scale) << "\n";
        out << "CRB(sigma2), s unknown = " << num(unknown.normalized_crb * scale) << "\n";
        out << "n CRB(sigma2)/sigma2^2: known " << num(known.normalized_crb) << ", unknown "
            << num(unknown.normalized_crb) << ", Gaussian 2\n";
        out << "a3 estimate (per observation) = " << num(unknown.a3_estimate) << " ["
            << unknown.method << "]\n";
        return kSuccess;
    }

    const LocationScaleModel model = model_for(c);
    const VectorXd theta1 = VectorXd::Constant(1, c.mean());
    const VectorXd theta2 = VectorXd::Constant(1, c.sigma2);
    const CrbReport report = elliptical_crb_report(model, theta1, theta2, c.iid);
    if (c.format == "json") {
        EllipticalCoefficients coeffs = elliptical_coefficients_quadrature(model.generator());
        json j = json::parse(crb_report_json(report));
        if (std::isfinite(coeffs.a0)) {
            const FimMatrix fim =
                elliptical_fim(model.mean_map(), model.cov_map(), coeffs, theta1, theta2)
                    .replicated(c.iid);
            const json cj = json::parse(coefficients_json(model.generator().family(), c.n,
                                                          model.generator().shape(), coeffs, &fim));
            j["fim"] = cj["fim"];
            j["blocks"] = cj["blocks"];
        }
        j["config"] = json::parse(serialize(c));
        out << j.dump(2) << "\n";
        return kSuccess;
    }
    out << "# config: " << serialize(c) << "\n";
    if (report.crb_theta1) {
        out << "CRB(m) = " << num((*report.crb_theta1)(0, 0)) << "\n";
    }
    out << "CRB(sigma2) = " << num(report.crb_theta2(0, 0)) << "\n";
    out << crb_report_table(report);
    return kSuccess;
}

int cmd_sweep_s(const RunConfig& c, std::ostream& out) {
    const std::vector<double> grid = sweep_grid(c.s_min, c.s_max, c.steps);
    const std::vector<SweepRow> rows = gg_sweep(c.iid, grid);
    if (c.format == "json") {
        json j = json::array();
        for (const SweepRow& r : rows) {
            j.push_back({{"s", r.s},
                         {"n", r.n},
                         {"crb_known_s", r.crb_known_s},
                         {"crb_unknown_s", r.crb_unknown_s},
                         {"gaussian_level", r.gaussian_level},
                         {"a3_estimate", r.a3_estimate}});
        }
        out << json{{"config", json::parse(serialize(c))}, {"rows", j}}.dump(2) << "\n";
        return kSuccess;
    }
    write_sweep_csv(out, rows, serialize(c));
    return kSuccess;
}

int cmd_verify(const RunConfig& c, std::ostream& out) {
    SuiteConfig suite = c.quick ? quick_suite_config() : SuiteConfig{};
    if (c.samples) {
        suite.mc_samples = *c.samples;
    }
    suite.seed = c.seed;
    if (!c.inject_fault.empty()) {
        if (c.inject_fault != "bad-normalization") {
            throw UsageError("unknown fault '" + c.inject_fault + "' (known: bad-normalization)");
        }
        suite.inject_bad_normalization = true;
    }
    const SuiteReport report = verify_inequality_suite(suite);
    if (c.format == "json") {
        json j = json::parse(suite_json(report));
        j["run_config"] = json::parse(serialize(c));
        out << j.dump(2) << "\n";
    } else {
        out << "# config: " << serialize(c) << "\n" << suite_table(report);
        for (const CheckResult* f : report.failures()) {
            out << "failed: " << f->name << " [" << f->family << ", n=" << f->n << "] " << f->detail
                << "\n";
        }
    }
    return report.all_passed() ? kSuccess : kVerificationFailure;
}

int cmd_sample(const RunConfig& c, std::ostream& out) {
    const std::size_t count = c.samples.value_or(1000);
    if (count == 0) {
        throw UsageError("--samples must be >= 1");
    }
    MatrixXd draws;
    if (c.family == "gamma") {
        draws = gamma_sample(c.mean(), c.sigma2, c.n, count, c.seed);
    } else {
        const LocationScaleModel model = model_for(c);
        draws = sample_elliptical(model, VectorXd::Constant(1, c.mean()), VectorXd::Constant(1, c.sigma2),
                                  count, c.seed);
    }
    write_sample_csv(out, draws, serialize(c));
    return kSuccess;
}

int cmd_oracle(const RunConfig& c, std::ostream& out) {
    const std::size_t count = c.samples.value_or(1000000);
    OracleComparison cmp;
    if (c.family == "gamma") {
        const GammaScoreModel sm(GammaModel(c.n, c.mean(), c.sigma2));
        const EmpiricalFim emp = empirical_fim(sm, count, c.seed);
        cmp = compare_to_target(emp.estimate, emp.standard_error, gamma_fim(c.mean(), c.sigma2, c.n).matrix());
    } else {
        const LocationScaleModel model = model_for(c);
        const VectorXd theta1 = VectorXd::Constant(1, c.mean());
        const VectorXd theta2 = VectorXd::Constant(1, c.sigma2);
        const EllipticalScoreModel sm(model, theta1, theta2);
        const EmpiricalFim emp = empirical_fim(sm, count, c.seed);
        const EllipticalCoefficients coeffs = elliptical_coefficients_quadrature(model.generator());
        if (!std::isfinite(coeffs.a0)) {
            throw NumericError("mean information is infinite for this generator; no finite target");
        }
        const FimMatrix target = elliptical_fim(model.mean_map(), model.cov_map(), coeffs, theta1, theta2);
        cmp = compare_to_target(emp.estimate, emp.standard_error, target.matrix());
    }
    json j = json::parse(oracle_json(cmp));
    j["config"] = json::parse(serialize(c));
    out << j.dump(2) << "\n";
    return cmp.passed ? kSuccess : kVerificationFailure;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
    try {
        std::ofstream file;
        std::ostream* sink = &out;
        if (!config.output.empty()) {
            std::filesystem::path path(config.output);
            if (path.is_relative()) {
                if (const char* dir = std::getenv("FIMCRB_OUTPUT_DIR"); dir != nullptr && *dir) {
                    path = std::filesystem::path(dir) / path;
                }
            }
            file.open(path, std::ios::binary);
            if (!file) {
                err << "error: cannot open output file " << path << "\n";
                return kUsageError;
            }
            sink = &file;
        }
        sink->imbue(std::locale::classic());
        if (config.command == "coeffs") {
            return cmd_coeffs(config, *sink);
        }
        if (config.command == "crb") {
            return cmd_crb(config, *sink);
        }
        if (config.command == "sweep-s") {
            return cmd_sweep_s(config, *sink);
        }
        if (config.command == "verify") {
            return cmd_verify(config, *sink);
        }
        if (config.command == "sample") {
            return cmd_sample(config, *sink);
        }
        if (config.command == "oracle") {
            return cmd_oracle(config, *sink);
        }
        err << "error: unknown command '" << config.command << "'\n";
        return kUsageError;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kUsageError;
    } catch (const NumericError& e) {
        err << "numeric error: " << e.what() << "\n";
        return kNumericError;
    } catch (const RankDeficiencyError& e) {
        err << "numeric error: " << e.what() << "\n";
        return kNumericError;
    } catch (const Error& e) {
        // domain, range, model, support and constraint errors all stem from the input
        err << "error: " << e.what() << "\n";
        return kUsageError;
    }
}

}  // namespace fimcrb::cli
