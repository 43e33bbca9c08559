#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "error.hpp"
#include "matrix.hpp"
#include "numkernel.hpp"

namespace ctrlframe {

/// Discrete-time pair (A, B): x(t+1) = A x(t) + B u(t).
class LtiSystem {
public:
    LtiSystem(Matrix a, Matrix b) : a_(std::move(a)), b_(std::move(b)) {
        if (!a_.is_square()) throw Error(Errc::NotSquare, "A must be square, got " + a_.shape());
        if (a_.rows() == 0) throw Error(Errc::InvalidArgument, "A must be at least 1x1");
        if (b_.rows() != a_.rows()) {
            throw Error(Errc::DimensionMismatch,
                        "B has " + std::to_string(b_.rows()) + " rows, A has " + std::to_string(a_.rows()));
        }
        if (b_.cols() == 0) throw Error(Errc::InvalidArgument, "B needs at least one column");
    }

    [[nodiscard]] const Matrix& a() const noexcept { return a_; }
    [[nodiscard]] const Matrix& b() const noexcept { return b_; }
    [[nodiscard]] std::size_t states() const noexcept { return a_.rows(); }
    [[nodiscard]] std::size_t inputs() const noexcept { return b_.cols(); }

private:
    Matrix a_;
    Matrix b_;
};

/// Controls u(0)..u(T-1) in forward time together with their effort sum ||u(t)||^2.
struct ControlPlan {
    std::vector<Vector> controls;
    double effort = 0.0;

    static ControlPlan from_controls(std::vector<Vector> controls) {
        double j = 0.0;
        for (const auto& u : controls) j += dot(u, u);
        return ControlPlan{std::move(controls), j};
    }

    [[nodiscard]] std::size_t horizon() const noexcept { return controls.size(); }
};

struct Trajectory {
    std::vector<Vector> states;  // x(0)..x(T)
};

namespace detail {
inline void require_horizon(std::size_t horizon) {
    if (horizon == 0) throw Error(Errc::InvalidArgument, "horizon T must be >= 1");
}
}  // namespace detail

/// K_T = (B  AB  ...  A^{T-1}B), n x Tm.
inline Matrix reachability_matrix(const LtiSystem& sys, std::size_t horizon) {
    detail::require_horizon(horizon);
    const std::size_t n = sys.states();
    const std::size_t m = sys.inputs();
    Matrix k(n, horizon * m);
    Matrix block = sys.b();
    for (std::size_t t = 0; t < horizon; ++t) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < m; ++j) k(i, t * m + j) = block(i, j);
        if (t + 1 < horizon) block = sys.a() * block;
    }
    return k;
}

/// W_T = K_T K_T^T.
inline Matrix grammian(const LtiSystem& sys, std::size_t horizon) {
    const Matrix k = reachability_matrix(sys, horizon);
    Matrix w = k * k.transpose();
    // exact symmetry
    for (std::size_t i = 0; i < w.rows(); ++i)
        for (std::size_t j = i + 1; j < w.cols(); ++j) w(j, i) = w(i, j);
    return w;
}

/// Smallest t in [1, n] with rank(K_t) = rank(K_n). Defined for uncontrollable
/// pairs too, in which case the saturated rank is below n.
inline std::size_t reachability_index(const LtiSystem& sys, double tol = kDefaultRankTol) {
    const std::size_t n = sys.states();
    const std::size_t full = rank(reachability_matrix(sys, n), tol);
    for (std::size_t t = 1; t < n; ++t) {
        if (rank(reachability_matrix(sys, t), tol) == full) return t;
    }
    return n;
}

inline bool is_controllable(const LtiSystem& sys, double tol = kDefaultRankTol) {
    return rank(reachability_matrix(sys, sys.states()), tol) == sys.states();
}

/// x(T) - A^T x(0), the displacement the controls must produce.
inline Vector target_displacement(const LtiSystem& sys, const Vector& x0, const Vector& xT, std::size_t horizon) {
    const std::size_t n = sys.states();
    if (x0.size() != n || xT.size() != n) {
        throw Error(Errc::DimensionMismatch, "state vectors must have length " + std::to_string(n));
    }
    Vector free = x0;
    for (std::size_t t = 0; t < horizon; ++t) free = sys.a() * free;
    return xT - free;
}

/// Minimum-effort controls steering x0 to xT in `horizon` steps.
///
/// The stacked vector (u(T-1); ...; u(0)) is K_T^+ d with d = xT - A^T x0;
/// the plan is returned in forward time. Throws TargetUnreachable when the
/// projection residual ||K K^+ d - d|| exceeds 1e-8 * max(1, ||d||).
inline ControlPlan min_energy_control(const LtiSystem& sys, const Vector& x0, const Vector& xT, std::size_t horizon,
                                      double tol = kDefaultRankTol) {
    detail::require_horizon(horizon);
    const Vector d = target_displacement(sys, x0, xT, horizon);
    const Matrix k = reachability_matrix(sys, horizon);
    const Vector stacked = pinv(k, tol) * d;

    const double residual = norm2(k * stacked - d);
    const double limit = 1e-8 * std::max(1.0, norm2(d));
    if (residual > limit) {
        throw Error(Errc::TargetUnreachable,
                    "target not reachable in " + std::to_string(horizon) + " steps, residual " +
                        std::to_string(residual));
    }

    const std::size_t m = sys.inputs();
    std::vector<Vector> controls(horizon, Vector(m));
    for (std::size_t i = 0; i < horizon; ++i) {
        // block i of the stack multiplies A^i B, i.e. it is u(T-1-i)
        auto& u = controls[horizon - 1 - i];
        for (std::size_t j = 0; j < m; ++j) u[j] = stacked[i * m + j];
    }
    return ControlPlan::from_controls(std::move(controls));
}

inline Trajectory simulate(const LtiSystem& sys, const Vector& x0, const ControlPlan& plan) {
    if (x0.size() != sys.states()) {
        throw Error(Errc::DimensionMismatch, "x0 must have length " + std::to_string(sys.states()));
    }
    Trajectory out;
    out.states.reserve(plan.horizon() + 1);
    out.states.push_back(x0);
    for (std::size_t t = 0; t < plan.horizon(); ++t) {
        const Vector& u = plan.controls[t];
        if (u.size() != sys.inputs()) {
            throw Error(Errc::DimensionMismatch, "u(" + std::to_string(t) + ") has length " +
                                                    std::to_string(u.size()) + ", expected " +
                                                    std::to_string(sys.inputs()));
        }
        out.states.push_back(sys.a() * out.states.back() + sys.b() * u);
    }
    return out;
}

}  // namespace ctrlframe
