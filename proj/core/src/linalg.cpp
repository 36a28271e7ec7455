#include "fimcrb/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "fimcrb/error.hpp"

namespace fimcrb {

VectorXd vec(const MatrixXd& a) {
    return Eigen::Map<const VectorXd>(a.data(), a.size());
}

MatrixXd unvec(const VectorXd& v, Eigen::Index n) {
    if (v.size() != n * n) {
        throw ModelError("unvec: vector length is not n^2");
    }
    return Eigen::Map<const MatrixXd>(v.data(), n, n);
}

MatrixXd kronecker(const MatrixXd& a, const MatrixXd& b) {
    MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

double asymmetry(const MatrixXd& a) {
    if (a.rows() != a.cols()) {
        throw ModelError("asymmetry: matrix is not square");
    }
    if (a.size() == 0) {
        return 0.0;
    }
    return (a - a.transpose()).cwiseAbs().maxCoeff();
}

double min_eigenvalue(const MatrixXd& symmetric) {
    if (symmetric.size() == 0) {
        return 0.0;
    }
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(symmetric, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

SymmetricInverse invert_symmetric(const MatrixXd& a, const std::string& what, double rank_tol) {
    if (a.rows() != a.cols() || a.rows() == 0) {
        throw ModelError(what + ": expected a non-empty square matrix");
    }
    const MatrixXd sym = 0.5 * (a + a.transpose());
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(sym);
    if (es.info() != Eigen::Success) {
        throw NumericError(what + ": eigendecomposition failed");
    }
    const VectorXd& lambda = es.eigenvalues();
    const double scale = lambda.cwiseAbs().maxCoeff();
    const double cutoff = rank_tol * std::max(scale, std::numeric_limits<double>::min());

    std::vector<Eigen::Index> null_idx;
    for (Eigen::Index i = 0; i < lambda.size(); ++i) {
        if (lambda(i) <= cutoff) {
            null_idx.push_back(i);
        }
    }
    if (!null_idx.empty()) {
        MatrixXd basis(a.rows(), static_cast<Eigen::Index>(null_idx.size()));
        for (std::size_t k = 0; k < null_idx.size(); ++k) {
            basis.col(static_cast<Eigen::Index>(k)) = es.eigenvectors().col(null_idx[k]);
        }
        std::ostringstream msg;
        msg << what << ": matrix is rank deficient (" << null_idx.size()
            << " eigenvalue(s) <= " << cutoff << ", smallest " << lambda.minCoeff() << ")";
        throw RankDeficiencyError(msg.str(), std::move(basis));
    }

    SymmetricInverse out;
    out.inverse = es.eigenvectors() * lambda.cwiseInverse().asDiagonal() *
                  es.eigenvectors().transpose();
    out.min_eigenvalue = lambda.minCoeff();
    out.max_eigenvalue = lambda.maxCoeff();
    out.condition_number = out.max_eigenvalue / out.min_eigenvalue;
    return out;
}

MatrixXd cholesky_factor(const MatrixXd& a, const std::string& what) {
    Eigen::LLT<MatrixXd> llt(a);
    if (llt.info() != Eigen::Success) {
        throw ModelError(what + ": matrix is not positive definite");
    }
    return llt.matrixL();
}

const char* to_string(LoewnerOrder order) {
    switch (order) {
        case LoewnerOrder::less_equal:
            return "<=";
        case LoewnerOrder::greater_equal:
            return ">=";
        case LoewnerOrder::equal:
            return "==";
        case LoewnerOrder::incomparable:
            return "incomparable";
    }
    return "?";
}

LoewnerComparison loewner_compare(const MatrixXd& candidate, const MatrixXd& reference,
                                  double rel_tol) {
    if (candidate.rows() != reference.rows() || candidate.cols() != reference.cols()) {
        throw ModelError("loewner_compare: shape mismatch");
    }
    const MatrixXd diff = reference - candidate;
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(0.5 * (diff + diff.transpose()),
                                               Eigen::EigenvaluesOnly);
    LoewnerComparison out;
    out.min_margin = es.eigenvalues().minCoeff();
    out.max_margin = es.eigenvalues().maxCoeff();
    const double scale = std::max(std::abs(candidate.trace()), std::abs(reference.trace()));
    out.tolerance = rel_tol * std::max(scale, std::numeric_limits<double>::min());

    const bool le = out.min_margin >= -out.tolerance;
    const bool ge = out.max_margin <= out.tolerance;
    if (le && ge) {
        out.order = LoewnerOrder::equal;
    } else if (le) {
        out.order = LoewnerOrder::less_equal;
    } else if (ge) {
        out.order = LoewnerOrder::greater_equal;
    } else {
        out.order = LoewnerOrder::incomparable;
    }
    return out;
}

}  // namespace fimcrb
