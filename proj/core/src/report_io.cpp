#include "fimcrb/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <iomanip>
#include <sstream>

#include <nlohmann/json.hpp>

namespace fimcrb {
namespace {

using nlohmann::json;

json number(double x) {
    if (std::isfinite(x)) {
        return x;
    }
    return format_number(x);
}

json matrix_json(const MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            row.push_back(number(m(i, j)));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

json blocks_json(const BlockIndex& index) {
    return {{"theta1", index.q1}, {"theta2", index.q2}, {"theta3", index.q3}};
}

json comparison_json(const CrbComparison& c) {
    return {{"block", to_string(c.block)},
            {"verdict", to_string(c.comparison.order)},
            {"min_margin", c.comparison.min_margin},
            {"max_margin", c.comparison.max_margin},
            {"tolerance", c.comparison.tolerance}};
}

std::string pad(const std::string& s, std::size_t width) {
    return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

void write_matrix(std::ostringstream& out, const char* label, const MatrixXd& m) {
    out << label << ":\n";
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        out << "  ";
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            out << (j ? "  " : "") << format_number(m(i, j));
        }
        out << "\n";
    }
}

}  // namespace

std::string format_number(double x) {
    if (std::isnan(x)) {
        return "nan";
    }
    if (std::isinf(x)) {
        return x > 0 ? "inf" : "-inf";
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

std::string coefficients_json(const std::string& family, int n, const ParameterList& params,
                              const EllipticalCoefficients& coefficients, const FimMatrix* fim) {
    json p = json::object();
    for (const auto& [k, v] : params) {
        p[k] = v;
    }
    json out = {{"family", family},
                {"n", n},
                {"params", p},
                {"a0", coefficients.has_a0() ? number(coefficients.a0) : json(nullptr)},
                {"a1", coefficients.a1},
                {"a2", coefficients.a2},
                {"method", to_string(coefficients.method)}};
    if (fim != nullptr) {
        json flat = json::array();
        const MatrixXd& m = fim->matrix();
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            for (Eigen::Index j = 0; j < m.cols(); ++j) {
                flat.push_back(number(m(i, j)));
            }
        }
        out["fim"] = flat;
        out["blocks"] = blocks_json(fim->index());
    }
    return out.dump(2);
}

std::string oracle_json(const OracleComparison& c) {
    json out = {{"estimate", matrix_json(c.estimate)},
                {"se", matrix_json(c.standard_error)},
                {"target", matrix_json(c.target)},
                {"z_scores", matrix_json(c.z_scores)},
                {"max_abs_z", c.max_abs_z},
                {"z_threshold", c.z_threshold},
                {"verdict", c.passed ? "pass" : "fail"}};
    return out.dump(2);
}

std::string crb_report_json(const CrbReport& r) {
    json out = {{"family", r.family}, {"crb_theta2", matrix_json(r.crb_theta2)}};
    out["crb_theta1"] = r.crb_theta1 ? matrix_json(*r.crb_theta1) : json(nullptr);
    out["gaussian_reference"] = {
        {"crb_theta1", r.gaussian_theta1 ? matrix_json(*r.gaussian_theta1) : json(nullptr)},
        {"crb_theta2", matrix_json(r.gaussian_theta2)}};
    json comps = json::array();
    for (const auto& c : r.comparisons) {
        comps.push_back(comparison_json(c));
    }
    out["comparisons"] = comps;
    out["notes"] = r.notes;
    return out.dump(2);
}

std::string crb_report_table(const CrbReport& r) {
    std::ostringstream out;
    out << "family: " << r.family << "\n";
    if (r.crb_theta1) {
        write_matrix(out, "CRB(theta1)", *r.crb_theta1);
        write_matrix(out, "Gaussian CRB(theta1)", *r.gaussian_theta1);
    }
    write_matrix(out, "CRB(theta2)", r.crb_theta2);
    write_matrix(out, "Gaussian CRB(theta2)", r.gaussian_theta2);
    for (const auto& c : r.comparisons) {
        out << "order " << to_string(c.block) << ": CRB " << to_string(c.comparison.order)
            << " Gaussian CRB (eigenvalue margins of Gaussian - CRB: "
            << format_number(c.comparison.min_margin) << " .. "
            << format_number(c.comparison.max_margin) << ")\n";
    }
    for (const auto& note : r.notes) {
        out << "note: " << note << "\n";
    }
    return out.str();
}

std::string suite_json(const SuiteReport& report) {
    const SuiteConfig& cfg = report.config;
    json config = {{"dimensions", cfg.dimensions},
                   {"gg_shapes", cfg.gg_shapes},
                   {"student_nu", cfg.student_nu},
                   {"textures", cfg.textures},
                   {"mc_samples", cfg.mc_samples},
                   {"mc_dimensions", cfg.mc_dimensions},
                   {"seed", cfg.seed},
                   {"inject_bad_normalization", cfg.inject_bad_normalization}};
    json checks = json::array();
    for (const CheckResult& c : report.checks) {
        checks.push_back({{"group", c.group},
                          {"name", c.name},
                          {"family", c.family},
                          {"n", c.n},
                          {"status", to_string(c.status)},
                          {"value", number(c.value)},
                          {"bound", number(c.bound)},
                          {"margin", number(c.margin)},
                          {"detail", c.detail}});
    }
    json out = {{"config", config},
                {"passed", report.count(CheckStatus::passed)},
                {"failed", report.count(CheckStatus::failed)},
                {"skipped", report.count(CheckStatus::skipped)},
                {"verdict", report.all_passed() ? "pass" : "fail"},
                {"checks", checks}};
    return out.dump(2);
}

std::string suite_table(const SuiteReport& report) {
    std::ostringstream out;
    out << pad("status", 7) << pad("group", 13) << pad("check", 42) << pad("family", 34)
        << pad("n", 4) << pad("margin", 18) << "detail\n";
    for (const CheckResult& c : report.checks) {
        out << pad(to_string(c.status), 7) << pad(c.group, 13) << pad(c.name, 42)
            << pad(c.family, 34) << pad(std::to_string(c.n), 4)
            << pad(std::isnan(c.margin) ? "-" : format_number(c.margin), 18) << c.detail << "\n";
    }
    out << "\n"
        << report.count(CheckStatus::passed) << " passed, " << report.count(CheckStatus::failed)
        << " failed, " << report.count(CheckStatus::skipped) << " skipped: "
        << (report.all_passed() ? "PASS" : "FAIL") << "\n";
    return out.str();
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows,
                     const std::string& config) {
    out << "# config: " << config << "\n";
    out << "s,n,crb_known_s,crb_unknown_s,gaussian_level\n";
    for (const SweepRow& r : rows) {
        out << format_number(r.s) << ',' << r.n << ',' << format_number(r.crb_known_s) << ','
            << format_number(r.crb_unknown_s) << ',' << format_number(r.gaussian_level) << "\n";
    }
}

void write_sample_csv(std::ostream& out, const MatrixXd& draws, const std::string& config) {
    out << "# config: " << config << "\n";
    for (Eigen::Index j = 0; j < draws.cols(); ++j) {
        out << (j ? "," : "") << 'x' << (j + 1);
    }
    out << "\n";
    for (Eigen::Index i = 0; i < draws.rows(); ++i) {
        for (Eigen::Index j = 0; j < draws.cols(); ++j) {
            out << (j ? "," : "") << format_number(draws(i, j));
        }
        out << "\n";
    }
}

}  // namespace fimcrb
