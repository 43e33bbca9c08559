#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <future>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "error.hpp"
#include "frames.hpp"
#include "matrix.hpp"
#include "moq.hpp"
#include "numkernel.hpp"

// Fixed-norm optimization of frame-operator objectives over sequences
// (v_1..v_K) with ||v_i||^2 = alpha_i, plus a Monte-Carlo bound oracle.
//
// Descent runs on the product of spheres of radii sqrt(alpha_i): the
// Euclidean gradient is projected onto the tangent space, a step is taken,
// and every vector is renormalized. Step sizes come from Armijo backtracking.
//
// Minimized functions (Euclidean gradients w.r.t. v_i, G = sum v_i v_i^T):
//   TraceInverse    tr(G^-1)                    -2 G^-2 v_i
//   Determinant     -log det G                  -2 G^-1 v_i
//   FramePotential  tr(G^2)                      4 G v_i
//   MinEigInverse   1 / softmin(lambda(G))      -2 P v_i / softmin^2
// where softmin = -tau log sum exp(-lambda_k / tau) and P = sum w_k u_k u_k^T
// with softmax weights w_k. The true objective is always evaluated at the end.

namespace ctrlframe::lab {

enum class Objective { TraceInverse, MinEigInverse, Determinant, FramePotential };

constexpr std::string_view to_string(Objective o) {
    switch (o) {
        case Objective::TraceInverse: return "trace-inv";
        case Objective::MinEigInverse: return "min-eig-inv";
        case Objective::Determinant: return "det";
        case Objective::FramePotential: return "fp";
    }
    return "unknown";
}

inline std::optional<Objective> parse_objective(std::string_view s) {
    for (auto o : {Objective::TraceInverse, Objective::MinEigInverse, Objective::Determinant,
                   Objective::FramePotential}) {
        if (s == to_string(o)) return o;
    }
    return std::nullopt;
}

/// Determinant is maximized, everything else minimized.
constexpr bool is_maximized(Objective o) { return o == Objective::Determinant; }

/// Softmin temperature relative to the frame constant a.
inline constexpr double kSoftminTemperature = 1e-3;

struct LabConfig {
    Objective objective = Objective::TraceInverse;
    Vector norms;  // alpha, non-increasing
    std::size_t dim = 0;
    std::size_t restarts = 10;
    std::size_t max_iters = 2000;
    double step = 0.1;
    std::uint64_t seed = 0;
    double tol = 1e-15;  // relative decrease at which a restart stops
    bool parallel = false;
};

struct RestartResult {
    FrameSequence frame{1, {Vector{1.0}}};
    double value = 0.0;  // true objective at the terminal point
    std::size_t iterations = 0;
    bool converged = false;
    double max_norm_error = 0.0;  // max relative |‖v_i‖^2 - alpha_i| over all iterates
    std::vector<double> history;  // minimized function after each accepted step, starting point first
};

struct LabResult {
    FrameSequence best_frame{1, {Vector{1.0}}};
    double best_value = 0.0;
    double target_value = 0.0;
    double gap = 0.0;
    std::size_t converged_restarts = 0;
    std::size_t best_restart = 0;

    friend bool operator==(const LabResult&, const LabResult&) = default;
};

struct SampleCheck {
    double observed = 0.0;  // min over samples, or max for Determinant
    double bound = 0.0;
    std::size_t violations = 0;
};

namespace detail {

// V diag(h(lambda)) V^T
template <class F>
Matrix spectral_function(const SymEigen& e, F&& h) {
    const std::size_t n = e.values.size();
    Matrix out(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        const double hk = h(e.values[k], k);
        if (hk == 0.0) continue;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) out(i, j) += hk * e.vectors(i, k) * e.vectors(j, k);
    }
    return out;
}

inline bool spans(const SymEigen& e) {
    return e.values.back() > 1e-12 * std::max(e.values.front(), std::numeric_limits<double>::min());
}

// softmin value and its weights, computed stably around lambda_min.
inline double softmin(const Vector& values, double temperature, Vector* weights) {
    const double lmin = values.back();
    double z = 0.0;
    Vector w(values.size());
    for (std::size_t k = 0; k < values.size(); ++k) {
        w[k] = std::exp(-(values[k] - lmin) / temperature);
        z += w[k];
    }
    if (weights != nullptr) {
        for (double& x : w) x /= z;
        *weights = std::move(w);
    }
    return lmin - temperature * std::log(z);
}

}  // namespace detail

/// The true objective: tr(G^-1), 1/lambda_min(G), det(G) or FP.
inline double objective_value(Objective o, const FrameSequence& f) {
    if (o == Objective::FramePotential) return frame_potential(f);
    const SymEigen e = sym_eigen(frame_operator(f));
    const Vector& l = e.values;
    switch (o) {
        case Objective::TraceInverse: {
            if (l.back() <= 0.0) return kInfinite;
            double s = 0.0;
            for (double x : l) s += 1.0 / x;
            return s;
        }
        case Objective::MinEigInverse: return l.back() <= 0.0 ? kInfinite : 1.0 / l.back();
        case Objective::Determinant: {
            double p = 1.0;
            for (double x : l) p *= std::max(x, 0.0);
            return p;
        }
        case Objective::FramePotential: break;
    }
    return frame_potential(f);
}

/// Softmin temperature for squared norms `norms` in R^n: kSoftminTemperature * a.
inline double softmin_temperature(const Vector& norms, std::size_t n) {
    return kSoftminTemperature * std::accumulate(norms.begin(), norms.end(), 0.0) / static_cast<double>(n);
}

/// The smooth function the optimizer minimizes (see header comment).
/// +Infinity outside the spanning set, except for FramePotential.
/// `temperature` only affects MinEigInverse.
inline double descent_value(Objective o, const FrameSequence& f, double temperature) {
    if (o == Objective::FramePotential) {
        const Matrix g = frame_operator(f);
        const double fro = g.frobenius_norm();
        return fro * fro;
    }
    const SymEigen e = sym_eigen(frame_operator(f));
    if (!detail::spans(e)) return kInfinite;
    const Vector& l = e.values;
    switch (o) {
        case Objective::TraceInverse: {
            double s = 0.0;
            for (double x : l) s += 1.0 / x;
            return s;
        }
        case Objective::Determinant: {
            double s = 0.0;
            for (double x : l) s += std::log(x);
            return -s;
        }
        case Objective::MinEigInverse: {
            const double s = detail::softmin(l, temperature, nullptr);
            return s > 0.0 ? 1.0 / s : kInfinite;
        }
        case Objective::FramePotential: break;
    }
    return kInfinite;
}

/// Euclidean gradient of descent_value with respect to each v_i.
inline std::vector<Vector> descent_gradient(Objective o, const FrameSequence& f, double temperature) {
    Matrix m;  // gradient_i = m * v_i
    if (o == Objective::FramePotential) {
        m = frame_operator(f) * 4.0;
    } else {
        const SymEigen e = sym_eigen(frame_operator(f));
        if (!detail::spans(e)) throw Error(Errc::NonSpanningStart, "gradient at a non-spanning point");
        switch (o) {
            case Objective::TraceInverse:
                m = detail::spectral_function(e, [](double l, std::size_t) { return -2.0 / (l * l); });
                break;
            case Objective::Determinant:
                m = detail::spectral_function(e, [](double l, std::size_t) { return -2.0 / l; });
                break;
            case Objective::MinEigInverse: {
                Vector w;
                const double s = detail::softmin(e.values, temperature, &w);
                const double scale = -2.0 / (s * s);
                m = detail::spectral_function(e, [&](double, std::size_t k) { return scale * w[k]; });
                break;
            }
            case Objective::FramePotential: break;
        }
    }
    std::vector<Vector> out;
    out.reserve(f.size());
    for (const auto& v : f.vectors()) out.push_back(m * v);
    return out;
}

/// n/a, 1/a, a^n for the grammian objectives and (sum alpha)^2 / n for FP.
inline double target_value(Objective o, const Vector& norms, std::size_t n) {
    const TightOptimalValues t = tight_optimal_values(norms, n);
    switch (o) {
        case Objective::TraceInverse: return t.trace_inv;
        case Objective::MinEigInverse: return t.min_eig_inv;
        case Objective::Determinant: return t.det;
        case Objective::FramePotential: {
            const double s = t.a * static_cast<double>(n);
            return s * s / static_cast<double>(n);
        }
    }
    return 0.0;
}

inline void validate(const LabConfig& cfg) {
    if (cfg.dim == 0) throw Error(Errc::InvalidArgument, "dimension must be >= 1");
    if (cfg.restarts == 0) throw Error(Errc::InvalidArgument, "restarts must be >= 1");
    if (cfg.max_iters == 0) throw Error(Errc::InvalidArgument, "max_iters must be >= 1");
    if (!(cfg.step > 0.0)) throw Error(Errc::InvalidArgument, "step must be positive");
    ctrlframe::detail::require_positive(cfg.norms, "norms");
    ctrlframe::detail::require_non_increasing(cfg.norms, "norms");
    if (cfg.norms.size() < cfg.dim) {
        throw Error(Errc::InfeasibleNorms, "need K >= n, got K = " + std::to_string(cfg.norms.size()));
    }
    tight_optimal_values(cfg.norms, cfg.dim);
}

/// Independent normal directions, rescaled so that ||v_i||^2 = norms[i].
inline FrameSequence random_fixed_norm_frame(const Vector& norms, std::size_t dim, std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<Vector> vs(norms.size(), Vector(dim));
    for (std::size_t i = 0; i < norms.size(); ++i) {
        double len = 0.0;
        while (len == 0.0) {
            for (double& x : vs[i]) x = normal(rng);
            len = norm2(vs[i]);
        }
        const double scale = std::sqrt(norms[i]) / len;
        for (double& x : vs[i]) x *= scale;
    }
    return FrameSequence(dim, std::move(vs));
}

/// Stream for one restart; depends only on (seed, restart index).
inline std::mt19937_64 restart_rng(std::uint64_t seed, std::size_t restart) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(restart), static_cast<std::uint32_t>(restart >> 32)};
    return std::mt19937_64(seq);
}

inline RestartResult run_restart(const LabConfig& cfg, std::size_t restart) {
    auto rng = restart_rng(cfg.seed, restart);
    const Vector& alpha = cfg.norms;
    const std::size_t k = alpha.size();

    std::optional<FrameSequence> start;
    for (int draw = 0; draw < 10 && !start; ++draw) {
        FrameSequence f = random_fixed_norm_frame(alpha, cfg.dim, rng);
        if (detail::spans(sym_eigen(frame_operator(f)))) start = std::move(f);
    }
    if (!start) throw Error(Errc::NonSpanningStart, "10 random starts failed to span R^n");

    const double temperature = softmin_temperature(alpha, cfg.dim);
    RestartResult out;
    out.frame = std::move(*start);
    double value = descent_value(cfg.objective, out.frame, temperature);
    out.history.push_back(value);
    double t = cfg.step;

    auto norm_error = [&](const FrameSequence& f) {
        double worst = 0.0;
        for (std::size_t i = 0; i < k; ++i) worst = std::max(worst, std::abs(dot(f[i], f[i]) - alpha[i]) / alpha[i]);
        return worst;
    };
    out.max_norm_error = norm_error(out.frame);

    for (std::size_t iter = 0; iter < cfg.max_iters; ++iter) {
        out.iterations = iter + 1;
        std::vector<Vector> grad = descent_gradient(cfg.objective, out.frame, temperature);
        double gnorm2 = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            const Vector& v = out.frame[i];
            const double radial = dot(grad[i], v) / alpha[i];
            for (std::size_t r = 0; r < cfg.dim; ++r) grad[i][r] -= radial * v[r];
            gnorm2 += dot(grad[i], grad[i]);
        }
        if (gnorm2 <= 1e-30 * std::max(1.0, value * value)) {
            out.converged = true;
            break;
        }

        bool accepted = false;
        while (t > 1e-20) {
            std::vector<Vector> trial(k, Vector(cfg.dim));
            for (std::size_t i = 0; i < k; ++i) {
                for (std::size_t r = 0; r < cfg.dim; ++r) trial[i][r] = out.frame[i][r] - t * grad[i][r];
                const double len = norm2(trial[i]);
                if (len == 0.0) {
                    trial[i] = out.frame[i];
                    continue;
                }
                const double scale = std::sqrt(alpha[i]) / len;
                for (double& x : trial[i]) x *= scale;
            }
            FrameSequence candidate(cfg.dim, std::move(trial));
            const double next = descent_value(cfg.objective, candidate, temperature);
            if (next <= value - 1e-4 * t * gnorm2) {
                const double decrease = value - next;
                out.frame = std::move(candidate);
                value = next;
                out.history.push_back(value);
                out.max_norm_error = std::max(out.max_norm_error, norm_error(out.frame));
                accepted = true;
                t = std::min(2.0 * t, 1e6);
                if (decrease <= cfg.tol * std::max(1.0, std::abs(value))) out.converged = true;
                break;
            }
            t *= 0.5;
        }
        if (!accepted) {
            // no representable decrease left
            out.converged = true;
            break;
        }
        if (out.converged) break;
    }

    out.value = objective_value(cfg.objective, out.frame);
    return out;
}

/// Best terminal point over `restarts` random starts; ties go to the lower
/// restart index. Serial and parallel runs give identical results.
inline LabResult optimize(const LabConfig& cfg) {
    validate(cfg);
    std::vector<RestartResult> runs(cfg.restarts);
    if (cfg.parallel) {
        std::vector<std::future<RestartResult>> jobs;
        jobs.reserve(cfg.restarts);
        for (std::size_t r = 0; r < cfg.restarts; ++r) {
            jobs.push_back(std::async(std::launch::async, [&cfg, r] { return run_restart(cfg, r); }));
        }
        for (std::size_t r = 0; r < cfg.restarts; ++r) runs[r] = jobs[r].get();
    } else {
        for (std::size_t r = 0; r < cfg.restarts; ++r) runs[r] = run_restart(cfg, r);
    }

    const bool maximize = is_maximized(cfg.objective);
    std::size_t best = 0;
    for (std::size_t r = 1; r < runs.size(); ++r) {
        const bool better = maximize ? runs[r].value > runs[best].value : runs[r].value < runs[best].value;
        if (better) best = r;
    }

    LabResult res;
    res.best_frame = runs[best].frame;
    res.best_value = runs[best].value;
    res.target_value = target_value(cfg.objective, cfg.norms, cfg.dim);
    res.gap = std::abs(res.best_value - res.target_value) / std::abs(res.target_value);
    res.converged_restarts = static_cast<std::size_t>(
        std::count_if(runs.begin(), runs.end(), [](const RestartResult& r) { return r.converged; }));
    res.best_restart = best;
    return res;
}

/// Optimal and tight: gap <= tol and the best frame is tight at 1e-4.
inline bool certify_optimum(const LabResult& result, double tol) {
    return result.gap <= tol && tightness(result.best_frame, 1e-4).is_tight;
}

/// Draws random fixed-norm sequences and checks the tight-frame bound on
/// each; a violation is a sample beating the bound by more than 1e-9 (relative).
inline SampleCheck sample_bound_check(Objective o, const Vector& norms, std::size_t dim, std::size_t samples,
                                      std::uint64_t seed) {
    LabConfig cfg;
    cfg.objective = o;
    cfg.norms = norms;
    cfg.dim = dim;
    validate(cfg);

    SampleCheck out;
    out.bound = target_value(o, norms, dim);
    const bool maximize = is_maximized(o);
    out.observed = maximize ? -kInfinite : kInfinite;
    const double slack = 1e-9 * std::max(1.0, std::abs(out.bound));

    std::mt19937_64 rng = restart_rng(seed, 0);
    for (std::size_t s = 0; s < samples; ++s) {
        const double v = objective_value(o, random_fixed_norm_frame(norms, dim, rng));
        if (maximize) {
            out.observed = std::max(out.observed, v);
            if (v > out.bound + slack) ++out.violations;
        } else {
            out.observed = std::min(out.observed, v);
            if (v < out.bound - slack) ++out.violations;
        }
    }
    return out;
}

}  // namespace ctrlframe::lab
