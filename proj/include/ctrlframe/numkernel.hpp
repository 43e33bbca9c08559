#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "error.hpp"
#include "matrix.hpp"

// Dense factorizations for the small matrices used throughout the library
// (grammians, frame operators, reachability matrices). Everything here is a
// pure function of its arguments.

namespace ctrlframe {

/// Relative singular-value cutoff used by rank() and pinv() unless overridden.
inline constexpr double kDefaultRankTol = 1e-10;

struct SymEigen {
    Vector values;   // non-increasing
    Matrix vectors;  // column i pairs with values[i]
};

struct Svd {
    Matrix u;                 // rows x k, orthonormal columns where sigma > 0
    Vector singular_values;   // length k = min(rows, cols), non-increasing
    Matrix v;                 // cols x k, orthonormal columns
};

namespace detail {

inline constexpr int kMaxSweeps = 100;

// Stable non-increasing ordering of `values`, returned as a permutation.
inline std::vector<std::size_t> descending_order(const Vector& values) {
    std::vector<std::size_t> idx(values.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
    return idx;
}

inline double off_diagonal_norm(const Matrix& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (i != j) s += a(i, j) * a(i, j);
    return std::sqrt(s);
}

// One-sided (Hestenes) Jacobi for a matrix with cols <= rows.
inline Svd one_sided_jacobi(const Matrix& m) {
    const std::size_t r = m.rows();
    const std::size_t c = m.cols();
    Matrix w = m;
    Matrix v = Matrix::identity(c);
    constexpr double eps = 1e-15;

    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        bool rotated = false;
        for (std::size_t p = 0; p + 1 < c; ++p) {
            for (std::size_t q = p + 1; q < c; ++q) {
                double alpha = 0.0, beta = 0.0, gamma = 0.0;
                for (std::size_t i = 0; i < r; ++i) {
                    alpha += w(i, p) * w(i, p);
                    beta += w(i, q) * w(i, q);
                    gamma += w(i, p) * w(i, q);
                }
                if (gamma == 0.0 || std::abs(gamma) <= eps * std::sqrt(alpha * beta)) continue;
                rotated = true;
                const double zeta = (beta - alpha) / (2.0 * gamma);
                const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double cs = 1.0 / std::sqrt(1.0 + t * t);
                const double sn = cs * t;
                for (std::size_t i = 0; i < r; ++i) {
                    const double wp = w(i, p);
                    const double wq = w(i, q);
                    w(i, p) = cs * wp - sn * wq;
                    w(i, q) = sn * wp + cs * wq;
                }
                for (std::size_t i = 0; i < c; ++i) {
                    const double vp = v(i, p);
                    const double vq = v(i, q);
                    v(i, p) = cs * vp - sn * vq;
                    v(i, q) = sn * vp + cs * vq;
                }
            }
        }
        if (!rotated) break;
    }

    Vector sigma(c);
    for (std::size_t j = 0; j < c; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < r; ++i) s += w(i, j) * w(i, j);
        sigma[j] = std::sqrt(s);
    }
    const auto order = descending_order(sigma);

    Svd out{Matrix(r, c), Vector(c), Matrix(c, c)};
    for (std::size_t k = 0; k < c; ++k) {
        const std::size_t j = order[k];
        out.singular_values[k] = sigma[j];
        for (std::size_t i = 0; i < r; ++i) out.u(i, k) = sigma[j] > 0.0 ? w(i, j) / sigma[j] : 0.0;
        for (std::size_t i = 0; i < c; ++i) out.v(i, k) = v(i, j);
    }
    return out;
}

}  // namespace detail

/// Cyclic Jacobi eigen-decomposition of a symmetric matrix.
///
/// Sweeps until the off-diagonal Frobenius norm drops to 1e-12 of the input
/// norm (or 100 sweeps). Values come back sorted non-increasing; ties keep
/// the Jacobi output order.
inline SymEigen sym_eigen(const Matrix& m) {
    if (!m.is_square()) throw Error(Errc::NotSquare, "sym_eigen needs a square matrix, got " + m.shape());
    const std::size_t n = m.rows();
    const double norm = m.frobenius_norm();
    const double asym = (m - m.transpose()).frobenius_norm();
    if (asym > 1e-9 * std::max(1.0, norm)) {
        throw Error(Errc::NotSymmetric, "asymmetry " + std::to_string(asym) + " exceeds tolerance");
    }

    Matrix a = (m + m.transpose()) * 0.5;
    Matrix v = Matrix::identity(n);

    for (int sweep = 0; sweep < detail::kMaxSweeps; ++sweep) {
        if (detail::off_diagonal_norm(a) <= 1e-12 * norm) break;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                // A <- J^T A J with J acting on columns p, q.
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(k, p);
                    const double akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a(p, k);
                    const double aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v(k, p);
                    const double vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    Vector diag(n);
    for (std::size_t i = 0; i < n; ++i) diag[i] = a(i, i);
    const auto order = detail::descending_order(diag);

    SymEigen out{Vector(n), Matrix(n, n)};
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = diag[order[k]];
        for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
    }
    return out;
}

/// Thin SVD, M = U diag(sigma) V^T, by one-sided Jacobi on the narrower side.
inline Svd svd(const Matrix& m) {
    if (m.cols() <= m.rows()) return detail::one_sided_jacobi(m);
    Svd t = detail::one_sided_jacobi(m.transpose());
    return Svd{std::move(t.v), std::move(t.singular_values), std::move(t.u)};
}

inline Vector singular_values(const Matrix& m) { return svd(m).singular_values; }

/// Number of singular values above tol * sigma_max; 0 for the zero matrix.
inline std::size_t rank(const Matrix& m, double tol = kDefaultRankTol) {
    const Vector s = singular_values(m);
    if (s.empty() || s.front() == 0.0) return 0;
    const double cutoff = tol * s.front();
    return static_cast<std::size_t>(std::count_if(s.begin(), s.end(), [&](double x) { return x > cutoff; }));
}

/// Moore-Penrose pseudoinverse; singular values at or below tol * sigma_max
/// are treated as zero.
inline Matrix pinv(const Matrix& m, double tol = kDefaultRankTol) {
    const Svd d = svd(m);
    Matrix out(m.cols(), m.rows());
    if (d.singular_values.empty() || d.singular_values.front() == 0.0) return out;
    const double cutoff = tol * d.singular_values.front();
    for (std::size_t k = 0; k < d.singular_values.size(); ++k) {
        const double s = d.singular_values[k];
        if (s <= cutoff) continue;
        for (std::size_t i = 0; i < m.cols(); ++i) {
            const double vik = d.v(i, k) / s;
            if (vik == 0.0) continue;
            for (std::size_t j = 0; j < m.rows(); ++j) out(i, j) += vik * d.u(j, k);
        }
    }
    return out;
}

}  // namespace ctrlframe
