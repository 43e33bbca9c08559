#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string_view>

#include "error.hpp"
#include "frames.hpp"
#include "lti.hpp"
#include "matrix.hpp"
#include "numkernel.hpp"

// Measures of quality of a pair (A, B) over a horizon T: the three classical
// grammian measures, mu = tr(W^2) / (tr W)^2, and the sufficiency test built on mu.

namespace ctrlframe {

inline constexpr double kInfinite = std::numeric_limits<double>::infinity();

/// Eigenvalues of W at or below this fraction of lambda_max count as zero.
inline constexpr double kDefaultSingularTol = 1e-10;

/// Guard band on the strict inequality mu < 1/(n-1).
inline constexpr double kSufficiencyGuard = 1e-12;

enum class Sufficiency { ProvablyControllable, Inconclusive };

constexpr std::string_view to_string(Sufficiency s) {
    return s == Sufficiency::ProvablyControllable ? "ProvablyControllable" : "Inconclusive";
}

struct Tolerances {
    double rank = kDefaultRankTol;
    double tight = kDefaultTightTol;
    double singular = kDefaultSingularTol;

    friend bool operator==(const Tolerances&, const Tolerances&) = default;
};

struct QualityReport {
    std::size_t horizon = 0;
    std::size_t states = 0;
    std::size_t inputs = 0;
    std::size_t tau = 0;
    std::size_t rank = 0;  // rank of K_T
    bool horizon_covers_index = false;  // T >= tau
    bool controllable = false;
    double trace_inv_grammian = kInfinite;
    double min_eig_inv = kInfinite;
    double det_grammian = 0.0;
    double mu = 1.0;
    Sufficiency sufficiency = Sufficiency::Inconclusive;
    TightnessReport tightness;

    friend bool operator==(const QualityReport&, const QualityReport&) = default;
};

struct TightOptimalValues {
    double a = 0.0;
    double trace_inv = 0.0;    // n / a
    double min_eig_inv = 0.0;  // 1 / a
    double det = 0.0;          // a^n
};

namespace detail {
inline bool has_singular_eigenvalue(const Vector& values, double tol) {
    const double top = values.front();
    return top <= 0.0 || values.back() <= tol * top;
}
}  // namespace detail

/// tr(W^{-1}) = sum 1/lambda_i; Infinite for a singular grammian.
inline double trace_inverse_grammian(const Matrix& w, double tol = kDefaultSingularTol) {
    const Vector values = sym_eigen(w).values;
    if (detail::has_singular_eigenvalue(values, tol)) return kInfinite;
    double s = 0.0;
    for (double l : values) s += 1.0 / l;
    return s;
}

/// 1 / lambda_min(W); Infinite for a singular grammian.
inline double min_eig_inverse(const Matrix& w, double tol = kDefaultSingularTol) {
    const Vector values = sym_eigen(w).values;
    if (detail::has_singular_eigenvalue(values, tol)) return kInfinite;
    return 1.0 / values.back();
}

/// Product of the eigenvalues of W, with eigenvalues at the singular cutoff
/// counted as zero.
inline double det_grammian(const Matrix& w, double tol = kDefaultSingularTol) {
    const Vector values = sym_eigen(w).values;
    if (detail::has_singular_eigenvalue(values, tol)) return 0.0;
    double p = 1.0;
    for (double l : values) p *= l;
    return p;
}

/// mu(A, B, T) = tr(W_T^2) / (tr W_T)^2.
inline double system_moq(const LtiSystem& sys, std::size_t horizon) {
    if (sys.b().is_zero()) throw Error(Errc::ZeroInputMap, "B is the zero matrix");
    const Matrix w = grammian(sys, horizon);
    const double tr = w.trace();
    const double fro = w.frobenius_norm();
    return fro * fro / (tr * tr);
}

inline Sufficiency sufficiency_test(const LtiSystem& sys, std::size_t horizon) {
    const double mu = system_moq(sys, horizon);
    const std::size_t n = sys.states();
    if (n == 1) return Sufficiency::ProvablyControllable;
    const double bound = 1.0 / static_cast<double>(n - 1);
    return mu < bound - kSufficiencyGuard ? Sufficiency::ProvablyControllable : Sufficiency::Inconclusive;
}

/// Objective values at the tight optimum G* = a I_n.
inline TightOptimalValues tight_optimal_values(const Vector& norms, std::size_t n) {
    if (n == 0) throw Error(Errc::InvalidArgument, "dimension must be >= 1");
    if (norms.empty()) throw Error(Errc::InvalidArgument, "norms must be non-empty");
    detail::require_positive(norms, "norms");
    const double a = std::accumulate(norms.begin(), norms.end(), 0.0) / static_cast<double>(n);
    const double top = *std::max_element(norms.begin(), norms.end());
    if (norms.size() < n || top > a * (1.0 + 1e-12)) {
        throw Error(Errc::InfeasibleNorms, "alpha_1 = " + detail::fmt(top) + " > a = " + detail::fmt(a));
    }
    return TightOptimalValues{a, static_cast<double>(n) / a, 1.0 / a, std::pow(a, static_cast<double>(n))};
}

inline QualityReport quality_report(const LtiSystem& sys, std::size_t horizon, const Tolerances& tol = {}) {
    detail::require_horizon(horizon);
    if (sys.b().is_zero()) throw Error(Errc::ZeroInputMap, "B is the zero matrix");

    QualityReport r;
    r.horizon = horizon;
    r.states = sys.states();
    r.inputs = sys.inputs();
    r.tau = reachability_index(sys, tol.rank);
    r.horizon_covers_index = horizon >= r.tau;
    r.controllable = is_controllable(sys, tol.rank);

    const Matrix k = reachability_matrix(sys, horizon);
    r.rank = ctrlframe::rank(k, tol.rank);

    const Matrix w = grammian(sys, horizon);
    if (r.controllable) {
        r.trace_inv_grammian = trace_inverse_grammian(w, tol.singular);
        r.min_eig_inv = min_eig_inverse(w, tol.singular);
        r.det_grammian = det_grammian(w, tol.singular);
    } else {
        // W_T is singular in exact arithmetic: image K_T lies in the reachable space.
        r.trace_inv_grammian = kInfinite;
        r.min_eig_inv = kInfinite;
        r.det_grammian = 0.0;
    }
    r.mu = system_moq(sys, horizon);
    r.sufficiency = sufficiency_test(sys, horizon);
    r.tightness = tightness(FrameSequence::from_columns(k), tol.tight);
    return r;
}

}  // namespace ctrlframe
