#pragma once

// Test-only reference computations. Nothing here calls the library's
// factorizations: solves use Gaussian elimination with partial pivoting,
// 2x2 spectra come from the characteristic polynomial, gradients from
// central differences.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

#include "ctrlframe/ctrlframe.hpp"

namespace oracle {

using ctrlframe::FrameSequence;
using ctrlframe::LtiSystem;
using ctrlframe::Matrix;
using ctrlframe::Vector;

inline double rel_frobenius(const Matrix& a, const Matrix& b) {
    return (a - b).frobenius_norm() / std::max(1.0, b.frobenius_norm());
}

inline double rel(double a, double b) { return std::abs(a - b) / std::max(1e-300, std::abs(b)); }

/// Solves M x = b by Gaussian elimination with partial pivoting.
inline Vector gauss_solve(Matrix m, Vector b) {
    const std::size_t n = m.rows();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(m(r, col)) > std::abs(m(piv, col))) piv = r;
        if (m(piv, col) == 0.0) throw std::runtime_error("singular");
        if (piv != col) {
            for (std::size_t c = 0; c < n; ++c) std::swap(m(col, c), m(piv, c));
            std::swap(b[col], b[piv]);
        }
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = m(r, col) / m(col, col);
            for (std::size_t c = col; c < n; ++c) m(r, c) -= f * m(col, c);
            b[r] -= f * b[col];
        }
    }
    Vector x(n);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t c = i + 1; c < n; ++c) s -= m(i, c) * x[c];
        x[i] = s / m(i, i);
    }
    return x;
}

/// Determinant by elimination.
inline double lu_det(Matrix m) {
    const std::size_t n = m.rows();
    double det = 1.0;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(m(r, col)) > std::abs(m(piv, col))) piv = r;
        if (m(piv, col) == 0.0) return 0.0;
        if (piv != col) {
            for (std::size_t c = 0; c < n; ++c) std::swap(m(col, c), m(piv, c));
            det = -det;
        }
        det *= m(col, col);
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = m(r, col) / m(col, col);
            for (std::size_t c = col; c < n; ++c) m(r, c) -= f * m(col, c);
        }
    }
    return det;
}

inline Matrix inverse(const Matrix& m) {
    const std::size_t n = m.rows();
    Matrix inv(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        Vector e(n, 0.0);
        e[j] = 1.0;
        const Vector col = gauss_solve(m, e);
        for (std::size_t i = 0; i < n; ++i) inv(i, j) = col[i];
    }
    return inv;
}

/// Roots of lambda^2 - tr lambda + det for a 2x2 symmetric matrix, larger first.
inline std::pair<double, double> eig2x2(const Matrix& m) {
    const double tr = m(0, 0) + m(1, 1);
    const double det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    const double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - det));
    return {tr / 2.0 + disc, tr / 2.0 - disc};
}

/// Gram-side frame potential: direct double loop over all ordered pairs.
inline double brute_frame_potential(const FrameSequence& f) {
    double s = 0.0;
    for (const auto& a : f.vectors())
        for (const auto& b : f.vectors()) {
            const double ip = ctrlframe::dot(a, b);
            s += ip * ip;
        }
    return s;
}

// ---------------------------------------------------------------------------
// Generators

inline Matrix random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c, double sd = 1.0) {
    std::normal_distribution<double> nd(0.0, sd);
    Matrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) m(i, j) = nd(rng);
    return m;
}

inline Matrix random_symmetric(std::mt19937_64& rng, std::size_t n) {
    const Matrix a = random_matrix(rng, n, n);
    return (a + a.transpose()) * 0.5;
}

inline Vector random_vector(std::mt19937_64& rng, std::size_t n, double sd = 1.0) {
    std::normal_distribution<double> nd(0.0, sd);
    Vector v(n);
    for (double& x : v) x = nd(rng);
    return v;
}

inline FrameSequence random_frame(std::mt19937_64& rng, std::size_t n, std::size_t k) {
    std::vector<Vector> vs;
    for (std::size_t i = 0; i < k; ++i) vs.push_back(random_vector(rng, n));
    return FrameSequence(n, std::move(vs));
}

/// Orthogonal matrix by modified Gram-Schmidt on a random square matrix.
inline Matrix random_orthogonal(std::mt19937_64& rng, std::size_t n) {
    std::vector<Vector> cols;
    while (cols.size() < n) {
        Vector v = random_vector(rng, n);
        for (const auto& q : cols) {
            const double p = ctrlframe::dot(v, q);
            for (std::size_t i = 0; i < n; ++i) v[i] -= p * q[i];
        }
        const double len = ctrlframe::norm2(v);
        if (len < 1e-8) continue;
        for (double& x : v) x /= len;
        cols.push_back(v);
    }
    return Matrix::from_columns(n, cols);
}

/// Generic pair with A entries ~ N(0, 1/n): almost surely controllable.
inline LtiSystem random_system(std::mt19937_64& rng, std::size_t n, std::size_t m) {
    return LtiSystem(random_matrix(rng, n, n, 1.0 / std::sqrt(static_cast<double>(n))), random_matrix(rng, n, m));
}

/// Pair with a reachable subspace of dimension r < n, hidden by an orthogonal
/// change of coordinates: A = Q [[A11, A12], [0, A22]] Q^T, B = Q [B1; 0].
inline LtiSystem random_uncontrollable_system(std::mt19937_64& rng, std::size_t n, std::size_t m, std::size_t r) {
    Matrix a = random_matrix(rng, n, n, 1.0 / std::sqrt(static_cast<double>(n)));
    Matrix b = random_matrix(rng, n, m);
    for (std::size_t i = r; i < n; ++i) {
        for (std::size_t j = 0; j < r; ++j) a(i, j) = 0.0;
        for (std::size_t j = 0; j < m; ++j) b(i, j) = 0.0;
    }
    const Matrix q = random_orthogonal(rng, n);
    return LtiSystem(q * a * q.transpose(), q * b);
}

/// Spectrum and norms with spectrum > norms. Starts from the greedy spectrum
/// (alpha_1, ..., alpha_{n-1}, rest), which always majorizes alpha, mixes it
/// with the flat spectrum when that is feasible, then moves a random share of
/// the last entry onto the first. Each step preserves the relation.
inline ctrlframe::SpectrumNormSpec random_majorized_pair(std::mt19937_64& rng, std::size_t n, std::size_t k) {
    std::uniform_real_distribution<double> u(0.1, 2.0);
    std::uniform_real_distribution<double> t(0.0, 1.0);
    Vector alpha(k);
    for (double& x : alpha) x = u(rng);
    std::sort(alpha.begin(), alpha.end(), std::greater<>());
    const double total = std::accumulate(alpha.begin(), alpha.end(), 0.0);
    const double a = total / static_cast<double>(n);

    Vector lambda(n);
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        lambda[i] = alpha[i];
        acc += alpha[i];
    }
    lambda[n - 1] = total - acc;
    std::sort(lambda.begin(), lambda.end(), std::greater<>());
    if (alpha.front() <= a) {
        const double w = t(rng);
        for (double& x : lambda) x = w * x + (1.0 - w) * a;
    }
    if (n > 1) {
        const double shift = 0.9 * t(rng) * lambda[n - 1];
        lambda[0] += shift;
        lambda[n - 1] -= shift;
    }
    std::sort(lambda.begin(), lambda.end(), std::greater<>());
    return {lambda, alpha};
}

/// Central differences of f at `f0` w.r.t. each coordinate of each vector.
inline std::vector<Vector> central_difference(const std::function<double(const FrameSequence&)>& fn,
                                              const FrameSequence& f0, double h) {
    std::vector<Vector> grad(f0.size(), Vector(f0.dim()));
    for (std::size_t i = 0; i < f0.size(); ++i) {
        for (std::size_t r = 0; r < f0.dim(); ++r) {
            auto plus = f0.vectors();
            auto minus = f0.vectors();
            plus[i][r] += h;
            minus[i][r] -= h;
            grad[i][r] = (fn(FrameSequence(f0.dim(), plus)) - fn(FrameSequence(f0.dim(), minus))) / (2.0 * h);
        }
    }
    return grad;
}

}  // namespace oracle
