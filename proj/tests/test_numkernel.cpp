#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "ctrlframe/numkernel.hpp"
#include "oracles.hpp"

using namespace ctrlframe;

namespace {

double orthonormality_error(const Matrix& v) {
    return (v.transpose() * v - Matrix::identity(v.cols())).frobenius_norm();
}

void expect_penrose(const Matrix& m, const Matrix& p, double tol) {
    const double scale_m = std::max(1.0, m.frobenius_norm());
    const double scale_p = std::max(1.0, p.frobenius_norm());
    EXPECT_LE((m * p * m - m).frobenius_norm() / scale_m, tol);
    EXPECT_LE((p * m * p - p).frobenius_norm() / scale_p, tol);
    const Matrix mp = m * p;
    const Matrix pm = p * m;
    EXPECT_LE((mp - mp.transpose()).frobenius_norm() / std::max(1.0, mp.frobenius_norm()), tol);
    EXPECT_LE((pm - pm.transpose()).frobenius_norm() / std::max(1.0, pm.frobenius_norm()), tol);
}

}  // namespace

TEST(Matrix, RejectsNonFiniteEntries) {
    EXPECT_THROW(Matrix(1, 2, {1.0, NAN}), Error);
    EXPECT_THROW(Matrix(1, 1, {INFINITY}), Error);
    EXPECT_THROW(Matrix(2, 2, {1.0, 2.0, 3.0}), Error);
}

TEST(SymEigen, Identity) {
    const SymEigen e = sym_eigen(Matrix::identity(2));
    EXPECT_DOUBLE_EQ(e.values[0], 1.0);
    EXPECT_DOUBLE_EQ(e.values[1], 1.0);
    EXPECT_LE(orthonormality_error(e.vectors), 1e-15);
}

TEST(SymEigen, TwoByTwoMatchesCharacteristicPolynomial) {
    const Matrix m{{2.0, 1.0}, {1.0, 1.0}};
    const auto [hi, lo] = oracle::eig2x2(m);
    const SymEigen e = sym_eigen(m);
    EXPECT_NEAR(e.values[0], hi, 1e-14);
    EXPECT_NEAR(e.values[1], lo, 1e-14);
    EXPECT_NEAR(e.values[0], (3.0 + std::sqrt(5.0)) / 2.0, 1e-14);
    EXPECT_NEAR(e.values[1], (3.0 - std::sqrt(5.0)) / 2.0, 1e-14);
}

TEST(SymEigen, DiagonalSortedNonIncreasing) {
    const Vector d{2.0, 0.0, 5.0};
    const SymEigen e = sym_eigen(Matrix::diagonal(d));
    EXPECT_EQ(e.values, (Vector{5.0, 2.0, 0.0}));
}

TEST(SymEigen, Errors) {
    try {
        (void)sym_eigen(Matrix(2, 3));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::NotSquare);
    }
    try {
        (void)sym_eigen(Matrix{{1.0, 2.0}, {0.0, 1.0}});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::NotSymmetric);
    }
    // asymmetry inside the tolerance is accepted
    EXPECT_NO_THROW((void)sym_eigen(Matrix{{1.0, 2.0}, {2.0 + 1e-12, 1.0}}));
}

TEST(SymEigen, RandomReconstructionAndOrthonormality) {
    std::mt19937_64 rng(11);
    for (int seed = 0; seed < 100; ++seed) {
        const std::size_t n = 1 + static_cast<std::size_t>(seed % 8);
        const Matrix m = oracle::random_symmetric(rng, n);
        const SymEigen e = sym_eigen(m);
        const Matrix recon = e.vectors * Matrix::diagonal(e.values) * e.vectors.transpose();
        EXPECT_LE((recon - m).frobenius_norm(), 1e-9 * std::max(1.0, m.frobenius_norm()));
        EXPECT_LE(orthonormality_error(e.vectors), 1e-10 * static_cast<double>(n));
        EXPECT_TRUE(std::is_sorted(e.values.rbegin(), e.values.rend()));
    }
}

TEST(Pinv, Examples) {
    const Matrix swap{{0.0, 1.0}, {1.0, 0.0}};
    EXPECT_LE((pinv(swap) - swap).frobenius_norm(), 1e-15);

    const Matrix d{{2.0, 0.0}, {0.0, 0.0}};
    EXPECT_LE((pinv(d) - Matrix{{0.5, 0.0}, {0.0, 0.0}}).frobenius_norm(), 1e-15);

    // minimum-norm solution of x + y = 1
    const Matrix row{{1.0, 1.0}};
    const Matrix p = pinv(row);
    ASSERT_EQ(p.rows(), 2u);
    ASSERT_EQ(p.cols(), 1u);
    EXPECT_NEAR(p(0, 0), 0.5, 1e-15);
    EXPECT_NEAR(p(1, 0), 0.5, 1e-15);
}

TEST(Pinv, ZeroMatrixGivesZero) {
    const Matrix p = pinv(Matrix(2, 3));
    EXPECT_EQ(p.rows(), 3u);
    EXPECT_TRUE(p.is_zero());
}

TEST(Pinv, PenroseIdentitiesOnRandomRectangular) {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<std::size_t> dim(1, 7);
    for (int t = 0; t < 100; ++t) {
        const std::size_t r = dim(rng);
        const std::size_t c = dim(rng);
        Matrix m = oracle::random_matrix(rng, r, c);
        if (t % 3 == 0 && c > 1) {
            // duplicate a column to make it rank deficient
            for (std::size_t i = 0; i < r; ++i) m(i, c - 1) = m(i, 0);
        }
        expect_penrose(m, pinv(m), 1e-8);
    }
}

TEST(Pinv, InvolutionOnFullRank) {
    std::mt19937_64 rng(6);
    for (int t = 0; t < 50; ++t) {
        const Matrix m = oracle::random_matrix(rng, 3 + t % 3, 3);
        EXPECT_LE(oracle::rel_frobenius(pinv(pinv(m)), m), 1e-7);
    }
}

TEST(Rank, Examples) {
    EXPECT_EQ(rank(Matrix::identity(3)), 3u);
    EXPECT_EQ(rank(Matrix{{1.0, 1.0}, {1.0, 1.0}}), 1u);
    EXPECT_EQ(rank(Matrix{{0.0, 1.0}, {1.0, 0.0}}), 2u);
    EXPECT_EQ(rank(Matrix(3, 2)), 0u);
}

TEST(Rank, TransposeAndGramInvariance) {
    std::mt19937_64 rng(8);
    for (int t = 0; t < 60; ++t) {
        const std::size_t r = 1 + static_cast<std::size_t>(t % 5);
        const std::size_t inner = 1 + static_cast<std::size_t>(t % 3);
        const std::size_t c = 2 + static_cast<std::size_t>(t % 4);
        // product of thin factors has rank min(r, inner, c)
        const Matrix m = oracle::random_matrix(rng, r, inner) * oracle::random_matrix(rng, inner, c);
        const std::size_t k = rank(m);
        EXPECT_EQ(k, std::min({r, inner, c}));
        EXPECT_EQ(rank(m.transpose()), k);
        EXPECT_EQ(rank(m * m.transpose()), k);
    }
}

TEST(Svd, ReconstructsMatrix) {
    std::mt19937_64 rng(9);
    for (int t = 0; t < 30; ++t) {
        const Matrix m = oracle::random_matrix(rng, 1 + t % 4, 1 + t % 6);
        const Svd d = svd(m);
        const Matrix recon = d.u * Matrix::diagonal(d.singular_values) * d.v.transpose();
        EXPECT_LE(oracle::rel_frobenius(recon, m), 1e-12);
        EXPECT_TRUE(std::is_sorted(d.singular_values.rbegin(), d.singular_values.rend()));
    }
}
