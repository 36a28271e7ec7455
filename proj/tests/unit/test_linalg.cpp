#include <gtest/gtest.h>

#include "fimcrb/error.hpp"
#include "fimcrb/linalg.hpp"

using namespace fimcrb;

TEST(Vec, RoundTrip) {
    MatrixXd a(3, 3);
    a << 1, 2, 3, 4, 5, 6, 7, 8, 9;
    const VectorXd v = vec(a);
    EXPECT_EQ(v(1), 4.0);  // column-stacking
    EXPECT_EQ(unvec(v, 3), a);
}

TEST(Kronecker, MixedProductProperty) {
    const MatrixXd a = MatrixXd::Random(2, 3), b = MatrixXd::Random(3, 2);
    const MatrixXd c = MatrixXd::Random(3, 2), d = MatrixXd::Random(2, 3);
    const MatrixXd lhs = kronecker(a, b) * kronecker(c, d);
    const MatrixXd rhs = kronecker(a * c, b * d);
    EXPECT_LT((lhs - rhs).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Kronecker, VecIdentity) {
    // vec(A X B) = (B^T kron A) vec(X)
    const MatrixXd a = MatrixXd::Random(3, 3), x = MatrixXd::Random(3, 3), b = MatrixXd::Random(3, 3);
    EXPECT_LT((vec(a * x * b) - kronecker(b.transpose(), a) * vec(x)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(InvertSymmetric, Diagonal) {
    MatrixXd a = MatrixXd::Zero(2, 2);
    a.diagonal() << 4.0, 8.0;
    const SymmetricInverse inv = invert_symmetric(a, "diag");
    EXPECT_DOUBLE_EQ(inv.inverse(0, 0), 0.25);
    EXPECT_DOUBLE_EQ(inv.inverse(1, 1), 0.125);
    EXPECT_DOUBLE_EQ(inv.condition_number, 2.0);
}

TEST(InvertSymmetric, RankDeficiencyCarriesNullSpace) {
    MatrixXd a(2, 2);
    a << 1, 1, 1, 1;
    try {
        invert_symmetric(a, "ones");
        FAIL() << "expected RankDeficiencyError";
    } catch (const RankDeficiencyError& e) {
        ASSERT_EQ(e.null_space().cols(), 1);
        const VectorXd z = e.null_space().col(0);
        EXPECT_LT((a * z).norm(), 1e-12);
        EXPECT_NEAR(z.norm(), 1.0, 1e-12);
    }
}

TEST(CholeskyFactor, RejectsIndefinite) {
    MatrixXd a(2, 2);
    a << 1, 2, 2, 1;
    EXPECT_THROW(cholesky_factor(a, "indefinite"), ModelError);
    MatrixXd b(2, 2);
    b << 4, 2, 2, 3;
    const MatrixXd l = cholesky_factor(b, "pd");
    EXPECT_LT((l * l.transpose() - b).cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_EQ(l(0, 1), 0.0);
}

TEST(Loewner, Verdicts) {
    const MatrixXd i = MatrixXd::Identity(2, 2);
    EXPECT_EQ(loewner_compare(0.5 * i, i).order, LoewnerOrder::less_equal);
    EXPECT_EQ(loewner_compare(2.0 * i, i).order, LoewnerOrder::greater_equal);
    EXPECT_EQ(loewner_compare(i, i).order, LoewnerOrder::equal);
    MatrixXd mixed = i;
    mixed(0, 0) = 2.0;
    mixed(1, 1) = 0.5;
    const LoewnerComparison c = loewner_compare(mixed, i);
    EXPECT_EQ(c.order, LoewnerOrder::incomparable);
    EXPECT_NEAR(c.min_margin, -1.0, 1e-14);
    EXPECT_NEAR(c.max_margin, 0.5, 1e-14);
}

TEST(MinEigenvalue, Symmetric) {
    MatrixXd a(2, 2);
    a << 2, 1, 1, 2;
    EXPECT_NEAR(min_eigenvalue(a), 1.0, 1e-14);
    EXPECT_EQ(asymmetry(a), 0.0);
}
