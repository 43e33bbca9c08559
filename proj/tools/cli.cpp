#include "cli.hpp"

#include <fstream>
#include <iomanip>
#include <locale>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <openssl/evp.h>

#include "ctrlframe/ctrlframe.hpp"
#include "ctrlframe/io.hpp"

namespace ctrlframe::cli {

namespace {

using io::json;

std::string num(double x) {
    if (std::isinf(x)) return x > 0 ? "Infinite" : "-Infinite";
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os << std::setprecision(10) << x;
    return os.str();
}

std::string join(const Vector& v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + num(v[i]);
    return s + ")";
}

int exit_code_for(Errc code) {
    switch (code) {
        case Errc::ZeroInputMap:
        case Errc::AllZeroFrame:
        case Errc::NonSpanningStart: return kExitDegenerate;
        case Errc::InfeasibleNorms:
        case Errc::MajorizationViolated: return kExitInfeasible;
        case Errc::TargetUnreachable: return kExitUnreachable;
        default: return kExitInput;
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io::InputError(path + ": cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// ---------------------------------------------------------------------------

struct AnalyzeArgs {
    std::string path;
    std::optional<std::size_t> horizon;
    std::optional<double> rank_tol;
    std::optional<double> tight_tol;
    bool as_json = false;
};

int cmd_analyze(const AnalyzeArgs& args, std::ostream& out) {
    const std::string text = read_file(args.path);
    const io::SystemFile file = io::parse_system_text(text);
    const LtiSystem& sys = file.system;

    Tolerances tol;
    if (file.rank_tol) tol.rank = *file.rank_tol;
    if (file.tight_tol) tol.tight = *file.tight_tol;
    if (args.rank_tol) tol.rank = *args.rank_tol;
    if (args.tight_tol) tol.tight = *args.tight_tol;
    const std::size_t horizon = args.horizon.value_or(file.horizon.value_or(sys.states()));

    const QualityReport r = quality_report(sys, horizon, tol);
    if (args.as_json) {
        out << io::dump(io::report_to_json(r, io::ReportMeta{kVersion, sha256_hex(text), tol})) << '\n';
        return kExitOk;
    }
    const double n = static_cast<double>(r.states);
    out << "system: n = " << r.states << ", m = " << r.inputs << ", T = " << r.horizon << '\n'
        << "reachability index tau: " << r.tau << " (T >= tau: " << (r.horizon_covers_index ? "yes" : "no") << ")\n"
        << "rank K_T: " << r.rank << '\n'
        << "controllable: " << (r.controllable ? "yes" : "no") << '\n'
        << "trace(W^-1): " << num(r.trace_inv_grammian) << '\n'
        << "1/lambda_min(W): " << num(r.min_eig_inv) << '\n'
        << "det(W): " << num(r.det_grammian) << '\n'
        << "mu: " << num(r.mu) << " (lower bound 1/n = " << num(1.0 / n) << ")\n"
        << "sufficiency: " << to_string(r.sufficiency) << '\n'
        << "tightness of K_T columns: " << (r.tightness.is_tight ? "tight" : "not tight")
        << " (a = " << num(r.tightness.frame_constant) << ", residual = " << num(r.tightness.residual)
        << ", norm condition " << (r.tightness.norm_condition_ok ? "ok" : "violated") << ")\n"
        << "tolerances: rank " << num(tol.rank) << ", tight " << num(tol.tight) << ", singular "
        << num(tol.singular) << '\n';
    return kExitOk;
}

// ---------------------------------------------------------------------------

struct FrameArgs {
    std::string quantity;
    std::string path;
    double tol = kDefaultTightTol;
    bool as_json = false;
};

int cmd_frame(const FrameArgs& args, std::ostream& out) {
    const FrameSequence f = io::parse_frame_text(read_file(args.path));
    if (args.quantity == "potential") {
        const double fp = frame_potential(f);
        if (args.as_json) {
            out << io::dump(json{{"frame_potential", fp}}) << '\n';
        } else {
            out << "frame potential: " << num(fp) << '\n';
        }
    } else if (args.quantity == "nfp") {
        const double nfp = normalized_frame_potential(f);
        if (args.as_json) {
            out << io::dump(json{{"normalized_frame_potential", nfp}}) << '\n';
        } else {
            out << "normalized frame potential: " << num(nfp) << '\n';
        }
    } else {
        const TightnessReport t = tightness(f, args.tol);
        if (args.as_json) {
            out << io::dump(io::tightness_to_json(t)) << '\n';
        } else {
            out << "is_tight: " << (t.is_tight ? "true" : "false") << '\n'
                << "frame_constant: " << num(t.frame_constant) << '\n'
                << "residual: " << num(t.residual) << '\n'
                << "norm_condition_ok: " << (t.norm_condition_ok ? "true" : "false") << '\n'
                << "tolerance: " << num(args.tol) << '\n';
        }
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------

struct ConstructArgs {
    Vector norms;
    std::size_t dim = 0;
    Vector spectrum;
    std::string out_path;
};

int cmd_construct(const ConstructArgs& args, std::ostream& out) {
    const bool tight = args.spectrum.empty();
    if (tight && args.dim == 0) throw io::InputError("--dim: required without --spectrum");
    if (!tight && args.dim != 0 && args.dim != args.spectrum.size()) {
        throw io::InputError("--dim: " + std::to_string(args.dim) + " disagrees with --spectrum length " +
                             std::to_string(args.spectrum.size()));
    }
    const FrameSequence f = tight ? tight_frame_with_norms(args.norms, args.dim)
                                  : construct_with_spectrum_and_norms(SpectrumNormSpec{args.spectrum, args.norms});

    const Vector achieved = sym_eigen(frame_operator(f)).values;
    const Vector sq = f.squared_norms();
    double norm_err = 0.0;
    for (std::size_t i = 0; i < sq.size(); ++i) {
        norm_err = std::max(norm_err, std::abs(sq[i] - args.norms[i]) / args.norms[i]);
    }

    const std::string doc = io::dump(io::frame_to_json(f));
    if (!args.out_path.empty()) {
        std::ofstream file(args.out_path, std::ios::binary);
        if (!file) throw io::InputError(args.out_path + ": cannot write file");
        file << doc << '\n';
    }

    if (tight) {
        const TightnessReport t = tightness(f);
        out << "tight frame: K = " << f.size() << ", n = " << f.dim() << ", a = " << num(t.frame_constant)
            << ", residual = " << num(t.residual) << (t.is_tight ? " < " : " >= ") << num(kDefaultTightTol) << '\n';
    } else {
        double spec_err = 0.0;
        for (std::size_t i = 0; i < achieved.size(); ++i) {
            spec_err = std::max(spec_err, std::abs(achieved[i] - args.spectrum[i]) / args.spectrum[i]);
        }
        out << "frame: K = " << f.size() << ", n = " << f.dim() << '\n'
            << "spectrum target " << join(args.spectrum) << ", achieved " << join(achieved)
            << ", max relative error " << num(spec_err) << '\n';
    }
    out << "squared norms " << join(sq) << ", max relative error " << num(norm_err) << '\n';
    if (args.out_path.empty()) {
        out << doc << '\n';
    } else {
        out << "wrote " << args.out_path << '\n';
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------

struct LabArgs {
    std::string objective;
    lab::LabConfig cfg;
    double certify_tol = 1e-4;
    bool as_json = false;
};

int cmd_lab(LabArgs args, std::ostream& out) {
    const auto objective = lab::parse_objective(args.objective);
    if (!objective) throw io::InputError("--objective: unknown objective '" + args.objective + "'");
    args.cfg.objective = *objective;

    const lab::LabResult res = lab::optimize(args.cfg);
    const bool certified = lab::certify_optimum(res, args.certify_tol);
    if (args.as_json) {
        out << io::dump(io::lab_result_to_json(res, args.cfg, certified, kVersion)) << '\n';
        return kExitOk;
    }
    out << "objective: " << lab::to_string(args.cfg.objective) << '\n'
        << "best value: " << num(res.best_value) << " (restart " << res.best_restart << ")\n"
        << "target value: " << num(res.target_value) << '\n'
        << "relative gap: " << num(res.gap) << '\n'
        << "converged restarts: " << res.converged_restarts << " / " << args.cfg.restarts << '\n'
        << "certified tight optimum: " << (certified ? "true" : "false") << '\n';
    return kExitOk;
}

// ---------------------------------------------------------------------------

struct ControlArgs {
    std::string path;
    Vector x0;
    Vector xT;
    std::optional<std::size_t> horizon;
    std::optional<double> rank_tol;
    bool as_json = false;
};

int cmd_control(const ControlArgs& args, std::ostream& out) {
    const io::SystemFile file = io::parse_system_text(read_file(args.path));
    const LtiSystem& sys = file.system;
    const std::size_t n = sys.states();
    const Vector x0 = args.x0.empty() ? Vector(n, 0.0) : args.x0;
    if (x0.size() != n) throw io::InputError("--x0: expected " + std::to_string(n) + " entries");
    if (args.xT.size() != n) throw io::InputError("--xT: expected " + std::to_string(n) + " entries");
    const std::size_t horizon = args.horizon.value_or(file.horizon.value_or(n));
    const double rank_tol = args.rank_tol.value_or(file.rank_tol.value_or(kDefaultRankTol));

    const ControlPlan plan = min_energy_control(sys, x0, args.xT, horizon, rank_tol);
    const Trajectory traj = simulate(sys, x0, plan);
    const double residual = norm2(traj.states.back() - args.xT);

    if (args.as_json) {
        json controls = json::array();
        for (const auto& u : plan.controls) controls.push_back(u);
        json states = json::array();
        for (const auto& x : traj.states) states.push_back(x);
        out << io::dump(json{{"horizon", horizon},
                             {"controls", controls},
                             {"effort", plan.effort},
                             {"states", states},
                             {"terminal_residual", residual}})
            << '\n';
        return kExitOk;
    }
    for (std::size_t t = 0; t < plan.horizon(); ++t) out << "u(" << t << ") = " << join(plan.controls[t]) << '\n';
    out << "effort: " << num(plan.effort) << '\n'
        << "x(T) = " << join(traj.states.back()) << '\n'
        << "terminal residual: " << num(residual) << '\n';
    return kExitOk;
}

}  // namespace

std::string sha256_hex(const std::string& bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
        EVP_DigestFinal_ex(ctx.get(), digest, &len) != 1) {
        throw std::runtime_error("sha256 failed");
    }
    static constexpr char hex[] = "0123456789abcdef";
    std::string s;
    for (unsigned int i = 0; i < len; ++i) {
        s += hex[digest[i] >> 4];
        s += hex[digest[i] & 0xF];
    }
    return s;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Controllability quality measures and finite tight frames", "ctrlframe"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    AnalyzeArgs analyze;
    auto* sub_analyze = app.add_subcommand("analyze", "Quality report of a system file");
    sub_analyze->add_option("path", analyze.path, "System JSON file")->required();
    sub_analyze->add_option("--horizon,-T", analyze.horizon, "Horizon T (default: file T, else n)")
        ->check(CLI::PositiveNumber);
    sub_analyze->add_option("--tol", analyze.rank_tol, "Relative rank cutoff")->check(CLI::PositiveNumber);
    sub_analyze->add_option("--tight-tol", analyze.tight_tol, "Tightness residual tolerance")
        ->check(CLI::PositiveNumber);
    sub_analyze->add_flag("--json", analyze.as_json, "Machine-readable report");

    FrameArgs frame;
    auto* sub_frame = app.add_subcommand("frame", "Frame potential, NFP and tightness of a frame file");
    sub_frame->require_subcommand(1);
    for (const char* q : {"potential", "nfp", "tightness"}) {
        auto* s = sub_frame->add_subcommand(q);
        s->add_option("path", frame.path, "Frame JSON file")->required();
        s->add_flag("--json", frame.as_json);
        if (std::string(q) == "tightness") {
            s->add_option("--tol", frame.tol, "Tightness residual tolerance")->check(CLI::PositiveNumber);
        }
        s->callback([&frame, q] { frame.quantity = q; });
    }

    ConstructArgs construct;
    auto* sub_construct = app.add_subcommand("construct", "Build a frame with prescribed norms (and spectrum)");
    sub_construct->add_option("--norms", construct.norms, "Squared norms alpha, non-increasing")->required();
    sub_construct->add_option("--dim", construct.dim, "Dimension n");
    sub_construct->add_option("--spectrum", construct.spectrum, "Frame operator spectrum, non-increasing");
    sub_construct->add_option("--out", construct.out_path, "Output frame file");

    LabArgs labargs;
    auto* sub_lab = app.add_subcommand("lab", "Fixed-norm optimization against the tight-frame optimum");
    sub_lab->add_option("--objective", labargs.objective, "trace-inv | min-eig-inv | det | fp")->required();
    sub_lab->add_option("--norms", labargs.cfg.norms, "Squared norms alpha, non-increasing")->required();
    sub_lab->add_option("--dim", labargs.cfg.dim, "Dimension n")->required();
    sub_lab->add_option("--restarts", labargs.cfg.restarts)->check(CLI::PositiveNumber);
    sub_lab->add_option("--max-iters", labargs.cfg.max_iters)->check(CLI::PositiveNumber);
    sub_lab->add_option("--step", labargs.cfg.step, "Initial step size")->check(CLI::PositiveNumber);
    sub_lab->add_option("--seed", labargs.cfg.seed);
    sub_lab->add_option("--tol", labargs.cfg.tol, "Relative objective decrease that ends a restart");
    sub_lab->add_option("--certify-tol", labargs.certify_tol, "Gap accepted by the certification");
    sub_lab->add_flag("--parallel", labargs.cfg.parallel, "Run restarts concurrently");
    sub_lab->add_flag("--json", labargs.as_json);

    ControlArgs control;
    auto* sub_control = app.add_subcommand("control", "Minimum-energy control between two states");
    sub_control->add_option("path", control.path, "System JSON file")->required();
    sub_control->add_option("--x0", control.x0, "Initial state (default 0)");
    sub_control->add_option("--xT", control.xT, "Target state")->required();
    sub_control->add_option("--horizon,-T", control.horizon)->check(CLI::PositiveNumber);
    sub_control->add_option("--tol", control.rank_tol, "Relative rank cutoff")->check(CLI::PositiveNumber);
    sub_control->add_flag("--json", control.as_json);

    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const auto& a : args) argv.push_back(a.c_str());
    if (argv.empty()) argv.push_back("ctrlframe");

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::Success& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitInput;
    }

    try {
        if (sub_analyze->parsed()) return cmd_analyze(analyze, out);
        if (sub_frame->parsed()) return cmd_frame(frame, out);
        if (sub_construct->parsed()) return cmd_construct(construct, out);
        if (sub_lab->parsed()) return cmd_lab(labargs, out);
        if (sub_control->parsed()) return cmd_control(control, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code_for(e.code());
    }
    return kExitInput;
}

}  // namespace ctrlframe::cli
