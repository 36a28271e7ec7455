#include "fimcrb/crb.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fimcrb/error.hpp"
#include "fimcrb/generators.hpp"

namespace fimcrb {
namespace {

// Indices of every parameter outside `block`.
std::vector<Eigen::Index> complement_indices(const BlockIndex& index, Block block) {
    std::vector<Eigen::Index> out;
    for (Block other : {Block::theta1, Block::theta2, Block::theta3}) {
        if (other == block) {
            continue;
        }
        for (Eigen::Index k = 0; k < index.size(other); ++k) {
            out.push_back(index.offset(other) + k);
        }
    }
    return out;
}

MatrixXd gather(const MatrixXd& m, const std::vector<Eigen::Index>& rows,
                const std::vector<Eigen::Index>& cols) {
    MatrixXd out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < cols.size(); ++j) {
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m(rows[i], cols[j]);
        }
    }
    return out;
}

std::vector<Eigen::Index> block_indices(const BlockIndex& index, Block block) {
    std::vector<Eigen::Index> out;
    for (Eigen::Index k = 0; k < index.size(block); ++k) {
        out.push_back(index.offset(block) + k);
    }
    return out;
}

MatrixXd profile_out(const MatrixXd& full, const std::vector<Eigen::Index>& keep,
                     const std::vector<Eigen::Index>& drop, const std::string& what) {
    const MatrixXd kk = gather(full, keep, keep);
    if (drop.empty()) {
        return kk;
    }
    const MatrixXd kd = gather(full, keep, drop);
    const MatrixXd dd = gather(full, drop, drop);
    const SymmetricInverse dd_inv = invert_symmetric(dd, what + " nuisance block");
    MatrixXd eff = kk - kd * dd_inv.inverse * kd.transpose();
    return 0.5 * (eff + eff.transpose());
}

}  // namespace

CrbBlock crb_from_fim(const FimMatrix& fim, Block block, NuisancePolicy policy) {
    const BlockIndex& index = fim.index();
    if (index.size(block) == 0) {
        throw ModelError(std::string("crb_from_fim: block ") + to_string(block) + " is empty");
    }
    CrbBlock out;
    out.block = block;
    out.policy = policy;
    const std::string label = std::string("information on ") + to_string(block);
    if (policy == NuisancePolicy::none) {
        out.information = fim.block(block, block);
    } else {
        out.information = profile_out(fim.matrix(), block_indices(index, block),
                                      complement_indices(index, block), label);
    }
    const SymmetricInverse inv = invert_symmetric(out.information, label);
    out.crb = 0.5 * (inv.inverse + inv.inverse.transpose());
    out.condition_number = inv.condition_number;
    return out;
}

MatrixXd schur_complement(const FimMatrix& fim, Block target, Block nuisance) {
    if (target == nuisance) {
        throw ModelError("schur_complement: target and nuisance blocks coincide");
    }
    return profile_out(fim.matrix(), block_indices(fim.index(), target),
                       block_indices(fim.index(), nuisance),
                       std::string("schur complement on ") + to_string(target));
}

NuisanceReduction reduce_nuisance(const FimMatrix& fim, double scale) {
    if (fim.index().q2 == 0 || fim.index().q3 == 0) {
        throw ModelError("reduce_nuisance: needs non-empty theta2 and theta3 blocks");
    }
    NuisanceReduction out;
    out.block_information = fim.block(Block::theta2, Block::theta2);
    out.effective_information = schur_complement(fim, Block::theta2, Block::theta3);
    if (out.block_information.size() == 1) {
        out.a3_estimate = scale * (out.effective_information(0, 0) - out.block_information(0, 0));
    }
    return out;
}

// ---------------------------------------------------------------------------

CrbReport elliptical_crb_report(const LocationScaleModel& model, const VectorXd& theta1,
                                const VectorXd& theta2, double replications) {
    const DensityGenerator& gen = model.generator();
    CrbReport report;
    report.family = gen.family();

    EllipticalCoefficients coeffs = elliptical_coefficients_quadrature(gen);
    if (const auto* gg = dynamic_cast<const GeneralizedGaussianGenerator*>(&gen)) {
        const EllipticalCoefficients closed = gg_coefficients_closed_form(gen.dimension(), gg->s());
        coeffs.a1 = closed.a1;
        coeffs.a2 = closed.a2;
        report.notes.push_back("theta2 coefficients from the generalized-Gaussian closed form");
    }

    const FimMatrix gauss = slepian_bangs_gaussian(model.mean_map(), model.cov_map(), theta1,
                                                   theta2)
                                .replicated(replications);
    const bool infinite_mean_info = model.q1() > 0 && std::isinf(coeffs.a0);
    EllipticalCoefficients usable = coeffs;
    if (infinite_mean_info) {
        usable.a0 = 1.0;  // placeholder: theta1 decouples, its CRB is set below
        report.notes.push_back(
            "E[Q phi^2(Q)] diverges for this generator: infinite information on theta1, CRB(theta1) = 0");
    }
    const FimMatrix fim =
        elliptical_fim(model.mean_map(), model.cov_map(), usable, theta1, theta2).replicated(replications);

    report.crb_theta2 = crb_from_fim(fim, Block::theta2, NuisancePolicy::schur).crb;
    report.gaussian_theta2 = crb_from_fim(gauss, Block::theta2, NuisancePolicy::schur).crb;
    if (model.q1() > 0) {
        report.gaussian_theta1 = crb_from_fim(gauss, Block::theta1, NuisancePolicy::schur).crb;
        if (infinite_mean_info) {
            report.crb_theta1 = MatrixXd::Zero(model.q1(), model.q1());
        } else {
            report.crb_theta1 = crb_from_fim(fim, Block::theta1, NuisancePolicy::schur).crb;
        }
        report.comparisons.push_back(
            {Block::theta1, loewner_compare(*report.crb_theta1, *report.gaussian_theta1)});
    }
    report.comparisons.push_back(
        {Block::theta2, loewner_compare(report.crb_theta2, report.gaussian_theta2)});
    return report;
}

CrbReport gamma_crb_report(double m, double sigma2, int n) {
    CrbReport report;
    report.family = "gamma";
    const FimMatrix fim = gamma_fim(m, sigma2, n);
    report.crb_theta1 = crb_from_fim(fim, Block::theta1, NuisancePolicy::schur).crb;
    report.crb_theta2 = crb_from_fim(fim, Block::theta2, NuisancePolicy::schur).crb;

    const auto [mean_map, cov_map] = builtin_iid_scalar(n);
    const FimMatrix gauss = slepian_bangs_gaussian(mean_map, cov_map, VectorXd::Constant(1, m),
                                                   VectorXd::Constant(1, sigma2));
    report.gaussian_theta1 = crb_from_fim(gauss, Block::theta1, NuisancePolicy::none).crb;
    report.gaussian_theta2 = crb_from_fim(gauss, Block::theta2, NuisancePolicy::none).crb;
    report.comparisons.push_back(
        {Block::theta1, loewner_compare(*report.crb_theta1, *report.gaussian_theta1)});
    report.comparisons.push_back(
        {Block::theta2, loewner_compare(report.crb_theta2, report.gaussian_theta2)});
    report.notes.push_back("non-symmetric density: theta1/theta2 coupled, Schur policy used");
    return report;
}

double gamma_normalized_crb_sigma2(double ratio) {
    if (!(ratio > 0.0)) {
        throw DomainError("ratio", "sigma2 / m^2 must be > 0");
    }
    // sigma2 = 1, m = 1/sqrt(r), n = 1
    const double m = 1.0 / std::sqrt(ratio);
    const FimMatrix fim = gamma_fim(m, 1.0, 1);
    const CrbBlock crb = crb_from_fim(fim, Block::theta2, NuisancePolicy::schur);
    return crb.crb(0, 0) / 2.0;
}

GammaExpansionCheck gamma_crb_expansion_check(std::vector<double> ratios) {
    if (ratios.size() < 2) {
        throw DomainError("ratios", "gamma_crb_expansion_check needs at least two ratios");
    }
    std::sort(ratios.begin(), ratios.end(), std::greater<>());
    GammaExpansionCheck out;
    out.ratios = ratios;
    out.all_above_gaussian = true;
    for (double r : ratios) {
        if (r < 1e-8) {
            std::ostringstream msg;
            msg << "ratio " << r << ": alpha = " << 1.0 / r
                << " is large enough that alpha psi'(alpha) - 1 and the CRB excess lose digits";
            out.warnings.push_back(msg.str());
        }
        const double normalized = gamma_normalized_crb_sigma2(r);
        out.normalized.push_back(normalized);
        out.slopes.push_back((normalized - 1.0) / r);
        if (!(normalized > 1.0)) {
            out.all_above_gaussian = false;
        }
    }
    // Neville's scheme evaluated at r = 0.
    std::vector<double> p = out.slopes;
    const std::size_t k = p.size();
    for (std::size_t level = 1; level < k; ++level) {
        for (std::size_t i = 0; i + level < k; ++i) {
            const double ri = ratios[i];
            const double rj = ratios[i + level];
            p[i] = (rj * p[i] - ri * p[i + 1]) / (rj - ri);
        }
    }
    out.limit_estimate = p[0];
    return out;
}

}  // namespace fimcrb
