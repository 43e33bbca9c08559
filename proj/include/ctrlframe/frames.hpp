#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>
#include <initializer_list>
#include <vector>

#include "error.hpp"
#include "matrix.hpp"
#include "numkernel.hpp"

namespace ctrlframe {

inline constexpr double kDefaultTightTol = 1e-8;

/// Ordered sequence of K >= 1 vectors in R^n. Spanning is not required.
class FrameSequence {
public:
    FrameSequence(std::size_t dim, std::vector<Vector> vectors) : dim_(dim), vectors_(std::move(vectors)) {
        validate();
    }

    // Dimension taken from the first vector.
    explicit FrameSequence(std::vector<Vector> vectors)
        : dim_(vectors.empty() ? 0 : vectors.front().size()), vectors_(std::move(vectors)) {
        validate();
    }

    FrameSequence(std::initializer_list<Vector> vectors) : FrameSequence(std::vector<Vector>(vectors)) {}

    /// Columns of a matrix, e.g. of a reachability matrix K_T.
    static FrameSequence from_columns(const Matrix& m) { return FrameSequence(m.rows(), m.columns()); }

    [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
    [[nodiscard]] std::size_t size() const noexcept { return vectors_.size(); }
    [[nodiscard]] const std::vector<Vector>& vectors() const noexcept { return vectors_; }
    [[nodiscard]] const Vector& operator[](std::size_t i) const { return vectors_[i]; }

    [[nodiscard]] Vector squared_norms() const {
        Vector out;
        out.reserve(vectors_.size());
        for (const auto& v : vectors_) out.push_back(dot(v, v));
        return out;
    }

    [[nodiscard]] double total_squared_norm() const {
        double s = 0.0;
        for (const auto& v : vectors_) s += dot(v, v);
        return s;
    }

    /// n x K matrix with the vectors as columns.
    [[nodiscard]] Matrix synthesis() const { return Matrix::from_columns(dim_, vectors_); }

    friend bool operator==(const FrameSequence&, const FrameSequence&) = default;

private:
    void validate() const {
        if (vectors_.empty()) throw Error(Errc::InvalidArgument, "frame needs at least one vector");
        if (dim_ == 0) throw Error(Errc::InvalidArgument, "frame dimension must be >= 1");
        for (std::size_t i = 0; i < vectors_.size(); ++i) {
            if (vectors_[i].size() != dim_) {
                throw Error(Errc::DimensionMismatch, "vector " + std::to_string(i) + " has length " +
                                                         std::to_string(vectors_[i].size()) + ", expected " +
                                                         std::to_string(dim_));
            }
            for (double x : vectors_[i]) {
                if (!std::isfinite(x)) throw Error(Errc::NonFinite, "vector " + std::to_string(i));
            }
        }
    }

    std::size_t dim_;
    std::vector<Vector> vectors_;
};

struct TightnessReport {
    bool is_tight = false;
    double frame_constant = 0.0;  // a = (1/n) sum ||v_i||^2
    double residual = 0.0;        // ||G - aI||_F / a
    bool norm_condition_ok = false;

    friend bool operator==(const TightnessReport&, const TightnessReport&) = default;
};

/// Target spectrum (length n) and squared norms (length K >= n), both non-increasing.
struct SpectrumNormSpec {
    Vector spectrum;
    Vector norms;
};

/// G = sum v_i v_i^T.
inline Matrix frame_operator(const FrameSequence& f) {
    const std::size_t n = f.dim();
    Matrix g(n, n);
    for (const auto& v : f.vectors()) {
        for (std::size_t i = 0; i < n; ++i) {
            if (v[i] == 0.0) continue;
            for (std::size_t j = i; j < n; ++j) g(i, j) += v[i] * v[j];
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) g(j, i) = g(i, j);
    return g;
}

/// FP = sum_i sum_j <v_j, v_i>^2, evaluated on the K x K Gram side.
inline double frame_potential(const FrameSequence& f) {
    const auto& v = f.vectors();
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        s += dot(v[i], v[i]) * dot(v[i], v[i]);
        for (std::size_t j = i + 1; j < v.size(); ++j) {
            const double ip = dot(v[i], v[j]);
            s += 2.0 * ip * ip;
        }
    }
    return s;
}

/// NFP = FP / (sum ||v_i||^2)^2, which equals tr(G^2) / (tr G)^2. Lies in [1/n, 1].
inline double normalized_frame_potential(const FrameSequence& f) {
    const double total = f.total_squared_norm();
    if (total == 0.0) throw Error(Errc::AllZeroFrame, "normalized frame potential of an all-zero frame");
    return frame_potential(f) / (total * total);
}

/// FF(u, v) = 2 <u, v> (u - v).
inline Vector frame_force(const Vector& u, const Vector& v) {
    if (u.size() != v.size()) throw Error(Errc::DimensionMismatch, "frame force of unequal dimensions");
    const double scale = 2.0 * dot(u, v);
    Vector out(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) out[i] = scale * (u[i] - v[i]);
    return out;
}

inline TightnessReport tightness(const FrameSequence& f, double tol = kDefaultTightTol) {
    const double total = f.total_squared_norm();
    if (total == 0.0) throw Error(Errc::AllZeroFrame, "tightness of an all-zero frame");
    const std::size_t n = f.dim();
    const double a = total / static_cast<double>(n);

    Matrix diff = frame_operator(f);
    for (std::size_t i = 0; i < n; ++i) diff(i, i) -= a;

    TightnessReport r;
    r.frame_constant = a;
    r.residual = diff.frobenius_norm() / std::max(a, std::numeric_limits<double>::min());
    r.is_tight = r.residual <= tol;
    // ||v_i||^2 <= lambda_max(G) <= a (1 + residual), so this slack keeps
    // is_tight => norm_condition_ok exact under rounding.
    const Vector sq = f.squared_norms();
    r.norm_condition_ok = *std::max_element(sq.begin(), sq.end()) <= a * (1.0 + tol);
    return r;
}

namespace detail {

inline void require_non_increasing(const Vector& x, const char* what) {
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        if (x[i + 1] > x[i]) {
            throw Error(Errc::NotSorted, std::string(what) + " must be non-increasing (entry " + std::to_string(i + 1) +
                                             " exceeds entry " + std::to_string(i) + ")");
        }
    }
}

inline void require_positive(const Vector& x, const char* what) {
    for (double v : x) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw Error(Errc::InvalidArgument, std::string(what) + " must be positive finite reals");
        }
    }
}

inline std::string fmt(double x) {
    std::ostringstream os;
    os.precision(10);
    os << x;
    return os.str();
}

// First violated condition of the majorization relation, or empty.
inline std::string majorization_violation(const Vector& spectrum, const Vector& norms) {
    const std::size_t n = spectrum.size();
    const double total_l = std::accumulate(spectrum.begin(), spectrum.end(), 0.0);
    const double total_a = std::accumulate(norms.begin(), norms.end(), 0.0);
    const double scale = std::max({1.0, std::abs(total_l), std::abs(total_a)});
    double sl = 0.0, sa = 0.0;
    for (std::size_t m = 0; m + 1 < n; ++m) {
        sl += spectrum[m];
        sa += norms[m];
        if (sl < sa - 1e-12 * scale) {
            return "partial sum at m = " + std::to_string(m + 1) + ": " + fmt(sl) + " < " + fmt(sa);
        }
    }
    if (std::abs(total_l - total_a) > 1e-9 * scale) {
        return "total sum: " + fmt(total_l) + " != " + fmt(total_a);
    }
    return {};
}

}  // namespace detail

/// spectrum > norms in the sense: partial sums of the spectrum dominate those
/// of the norms for m <= n-1, and the totals agree (1e-9 relative).
inline bool majorizes(const Vector& spectrum, const Vector& norms) {
    detail::require_non_increasing(spectrum, "spectrum");
    detail::require_non_increasing(norms, "norms");
    if (spectrum.empty()) throw Error(Errc::InvalidArgument, "empty spectrum");
    if (norms.size() < spectrum.size()) {
        throw Error(Errc::LengthMismatch, "need K >= n, got K = " + std::to_string(norms.size()) +
                                              ", n = " + std::to_string(spectrum.size()));
    }
    return detail::majorization_violation(spectrum, norms).empty();
}

/// Vectors v_1..v_K in R^n with ||v_i||^2 = norms[i] and frame operator
/// spectrum `spectrum`.
///
/// Builds the K x K Gram matrix Q diag(spectrum, 0, ..., 0) Q^T with the
/// prescribed diagonal using K-1 Givens rotations. Step t pins norms[t] by
/// rotating the adjacent pair (j, j+1) of the sorted working diagonal that
/// brackets it; the remaining diagonal stays sorted and still majorizes the
/// remaining targets. The frame is then read off as v_k = diag(sqrt(spectrum)) Q[k, :n]^T,
/// whose frame operator is exactly diag(spectrum).
inline FrameSequence construct_with_spectrum_and_norms(const SpectrumNormSpec& spec) {
    const Vector& lambda = spec.spectrum;
    const Vector& alpha = spec.norms;
    detail::require_positive(lambda, "spectrum");
    detail::require_positive(alpha, "norms");
    if (!majorizes(lambda, alpha)) {
        throw Error(Errc::MajorizationViolated, detail::majorization_violation(lambda, alpha));
    }

    const std::size_t n = lambda.size();
    const std::size_t k = alpha.size();

    Matrix q = Matrix::identity(k);
    // Working diagonal, kept sorted non-increasing, with the coordinate each entry lives on.
    std::vector<double> diag(k, 0.0);
    std::copy(lambda.begin(), lambda.end(), diag.begin());
    std::vector<std::size_t> coord(k);
    std::iota(coord.begin(), coord.end(), std::size_t{0});
    std::vector<std::size_t> pinned(k);

    for (std::size_t t = 0; t + 1 < k; ++t) {
        const double target = alpha[t];
        // bracket: diag[j] >= target >= diag[j+1]
        std::size_t j = 0;
        while (j + 2 < diag.size() && diag[j + 1] > target) ++j;

        const double dp = diag[j];
        const double dq = diag[j + 1];
        double c2 = dp > dq ? (target - dq) / (dp - dq) : 1.0;
        c2 = std::clamp(c2, 0.0, 1.0);
        const double c = std::sqrt(c2);
        const double s = std::sqrt(1.0 - c2);

        // Row rotation on coordinates (p, r): new (p,p) = c^2 dp + s^2 dq.
        const std::size_t p = coord[j];
        const std::size_t r = coord[j + 1];
        for (std::size_t col = 0; col < k; ++col) {
            const double qp = q(p, col);
            const double qr = q(r, col);
            q(p, col) = c * qp + s * qr;
            q(r, col) = -s * qp + c * qr;
        }

        pinned[t] = p;
        diag[j + 1] = dp + dq - target;
        diag.erase(diag.begin() + static_cast<std::ptrdiff_t>(j));
        coord.erase(coord.begin() + static_cast<std::ptrdiff_t>(j));
    }
    pinned[k - 1] = coord.front();

    std::vector<Vector> vectors(k, Vector(n));
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t r = 0; r < n; ++r) vectors[i][r] = std::sqrt(lambda[r]) * q(pinned[i], r);
    }
    return FrameSequence(n, std::move(vectors));
}

/// Tight frame of R^n with squared norms `norms`; throws InfeasibleNorms when
/// the largest squared norm exceeds a = (1/n) sum norms.
inline FrameSequence tight_frame_with_norms(const Vector& norms, std::size_t n) {
    if (n == 0) throw Error(Errc::InvalidArgument, "dimension must be >= 1");
    detail::require_positive(norms, "norms");
    detail::require_non_increasing(norms, "norms");
    const double a = std::accumulate(norms.begin(), norms.end(), 0.0) / static_cast<double>(n);
    if (norms.front() > a * (1.0 + 1e-12)) {
        throw Error(Errc::InfeasibleNorms, "alpha_1 = " + detail::fmt(norms.front()) + " > a = " + detail::fmt(a));
    }
    return construct_with_spectrum_and_norms(SpectrumNormSpec{Vector(n, a), norms});
}

}  // namespace ctrlframe
