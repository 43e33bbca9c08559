#pragma once

#include <charconv>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "error.hpp"
#include "frames.hpp"
#include "lab.hpp"
#include "lti.hpp"
#include "matrix.hpp"
#include "moq.hpp"

// JSON schemas for system files, frame files and reports.
//
//   system: {"A": [[...]], "B": [[...]], "T": int?, "tol": {"rank": real?, "tight": real?}?}
//   frame:  {"vectors": [[...], ...]}
//   report: QualityReport fields plus "tool_version", "input_sha256", "tolerances"
//
// Infinite measures are written as the string "Infinity".

namespace ctrlframe::io {

using json = nlohmann::json;

inline constexpr const char* kInfinityToken = "Infinity";

/// Validation failure in an input document; the message names the field.
class InputError : public Error {
public:
    explicit InputError(const std::string& what) : Error(Errc::InvalidArgument, what) {}
};

struct SystemFile {
    LtiSystem system;
    std::optional<std::size_t> horizon;
    std::optional<double> rank_tol;
    std::optional<double> tight_tol;
};

struct ReportMeta {
    std::string tool_version;
    std::string input_sha256;
    Tolerances tolerances;

    friend bool operator==(const ReportMeta&, const ReportMeta&) = default;
};

// ---------------------------------------------------------------------------
// Writer: 17 significant digits, independent of the C locale.

namespace detail {

inline void write_real(std::string& out, double x) {
    if (std::isinf(x)) {
        out += x > 0 ? "\"Infinity\"" : "\"-Infinity\"";
        return;
    }
    if (std::isnan(x)) {
        out += "null";
        return;
    }
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
    std::string s(buf, res.ptr);
    if (s.find_first_of(".eE") == std::string::npos) s += ".0";
    out += s;
}

inline void write_indent(std::string& out, int indent, int depth) {
    if (indent < 0) return;
    out += '\n';
    out.append(static_cast<std::size_t>(indent * depth), ' ');
}

inline void write(std::string& out, const json& j, int indent, int depth) {
    switch (j.type()) {
        case json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += '{';
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out += ',';
                first = false;
                write_indent(out, indent, depth + 1);
                out += json(it.key()).dump();
                out += indent < 0 ? ":" : ": ";
                write(out, it.value(), indent, depth + 1);
            }
            write_indent(out, indent, depth);
            out += '}';
            return;
        }
        case json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            // numeric rows stay on one line
            const bool flat = std::all_of(j.begin(), j.end(), [](const json& e) { return e.is_primitive(); });
            out += '[';
            bool first = true;
            for (const auto& e : j) {
                if (!first) out += flat && indent >= 0 ? ", " : ",";
                first = false;
                if (!flat) write_indent(out, indent, depth + 1);
                write(out, e, indent, depth + 1);
            }
            if (!flat) write_indent(out, indent, depth);
            out += ']';
            return;
        }
        case json::value_t::number_float: write_real(out, j.get<double>()); return;
        default: out += j.dump(); return;
    }
}

}  // namespace detail

/// Serializes `j`; indent < 0 gives a single line.
inline std::string dump(const json& j, int indent = 2) {
    std::string out;
    detail::write(out, j, indent, 0);
    return out;
}

inline json real(double x) { return json(x); }

inline double read_real(const json& j, const std::string& field) {
    if (j.is_string() && j.get<std::string>() == kInfinityToken) return kInfinite;
    if (!j.is_number()) throw InputError(field + ": expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw InputError(field + ": not finite");
    return v;
}

// ---------------------------------------------------------------------------
// Input documents

inline json parse_text(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw InputError(std::string("malformed JSON: ") + e.what());
    }
}

/// Row-major nested array -> Matrix; `field` names the key in diagnostics.
inline Matrix read_matrix(const json& j, const std::string& field) {
    if (!j.is_array() || j.empty()) throw InputError(field + ": expected a non-empty array of rows");
    std::size_t cols = 0;
    std::vector<double> entries;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const json& row = j[i];
        const std::string where = field + "[" + std::to_string(i) + "]";
        if (!row.is_array() || row.empty()) throw InputError(where + ": expected a non-empty array of numbers");
        if (i == 0) cols = row.size();
        if (row.size() != cols) {
            throw InputError(where + ": has " + std::to_string(row.size()) + " entries, expected " +
                             std::to_string(cols));
        }
        for (std::size_t c = 0; c < row.size(); ++c) {
            const std::string cell = where + "[" + std::to_string(c) + "]";
            if (!row[c].is_number()) throw InputError(cell + ": expected a number");
            const double v = row[c].get<double>();
            if (!std::isfinite(v)) throw InputError(cell + ": not finite");
            entries.push_back(v);
        }
    }
    return Matrix(j.size(), cols, std::move(entries));
}

inline Vector read_vector(const json& j, const std::string& field) {
    if (!j.is_array() || j.empty()) throw InputError(field + ": expected a non-empty array of numbers");
    Vector v;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string cell = field + "[" + std::to_string(i) + "]";
        if (!j[i].is_number()) throw InputError(cell + ": expected a number");
        v.push_back(j[i].get<double>());
        if (!std::isfinite(v.back())) throw InputError(cell + ": not finite");
    }
    return v;
}

inline json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) rows.push_back(m.row(i));
    return rows;
}

inline SystemFile parse_system(const json& j) {
    if (!j.is_object()) throw InputError("system file: expected a JSON object");
    if (!j.contains("A")) throw InputError("A: missing");
    if (!j.contains("B")) throw InputError("B: missing");
    Matrix a = read_matrix(j.at("A"), "A");
    Matrix b = read_matrix(j.at("B"), "B");
    if (!a.is_square()) throw InputError("A: must be square, got " + a.shape());
    if (b.rows() != a.rows()) {
        throw InputError("B: has " + std::to_string(b.rows()) + " rows, A has " + std::to_string(a.rows()));
    }

    std::optional<std::size_t> horizon;
    if (j.contains("T")) {
        const json& t = j.at("T");
        if (!t.is_number_integer() || t.get<long long>() < 1) throw InputError("T: expected a positive integer");
        horizon = t.get<std::size_t>();
    }

    std::optional<double> rank_tol, tight_tol;
    if (j.contains("tol")) {
        const json& tol = j.at("tol");
        if (!tol.is_object()) throw InputError("tol: expected an object");
        auto read_tol = [&](const char* key) -> std::optional<double> {
            if (!tol.contains(key)) return std::nullopt;
            const double v = read_real(tol.at(key), std::string("tol.") + key);
            if (!(v > 0.0)) throw InputError(std::string("tol.") + key + ": must be positive");
            return v;
        };
        rank_tol = read_tol("rank");
        tight_tol = read_tol("tight");
    }
    return SystemFile{LtiSystem(std::move(a), std::move(b)), horizon, rank_tol, tight_tol};
}

inline SystemFile parse_system_text(const std::string& text) { return parse_system(parse_text(text)); }

inline FrameSequence parse_frame(const json& j) {
    if (!j.is_object()) throw InputError("frame file: expected a JSON object");
    if (!j.contains("vectors")) throw InputError("vectors: missing");
    const json& vs = j.at("vectors");
    if (!vs.is_array() || vs.empty()) throw InputError("vectors: expected a non-empty array of vectors");
    std::vector<Vector> out;
    for (std::size_t i = 0; i < vs.size(); ++i) {
        out.push_back(read_vector(vs[i], "vectors[" + std::to_string(i) + "]"));
        if (out.back().size() != out.front().size()) {
            throw InputError("vectors[" + std::to_string(i) + "]: has length " + std::to_string(out.back().size()) +
                             ", expected " + std::to_string(out.front().size()));
        }
    }
    return FrameSequence(std::move(out));
}

inline FrameSequence parse_frame_text(const std::string& text) { return parse_frame(parse_text(text)); }

inline json frame_to_json(const FrameSequence& f) {
    json vs = json::array();
    for (const auto& v : f.vectors()) vs.push_back(v);
    return json{{"vectors", vs}};
}

// ---------------------------------------------------------------------------
// Reports

inline json tightness_to_json(const TightnessReport& t) {
    return json{{"is_tight", t.is_tight},
                {"frame_constant", real(t.frame_constant)},
                {"residual", real(t.residual)},
                {"norm_condition_ok", t.norm_condition_ok}};
}

inline TightnessReport tightness_from_json(const json& j) {
    TightnessReport t;
    t.is_tight = j.at("is_tight").get<bool>();
    t.frame_constant = read_real(j.at("frame_constant"), "tightness.frame_constant");
    t.residual = read_real(j.at("residual"), "tightness.residual");
    t.norm_condition_ok = j.at("norm_condition_ok").get<bool>();
    return t;
}

inline json tolerances_to_json(const Tolerances& t) {
    return json{{"rank", real(t.rank)},
                {"tight", real(t.tight)},
                {"singular", real(t.singular)},
                {"sufficiency_guard", real(kSufficiencyGuard)}};
}

inline json report_to_json(const QualityReport& r, const ReportMeta& meta) {
    return json{{"tool_version", meta.tool_version},
                {"input_sha256", meta.input_sha256},
                {"tolerances", tolerances_to_json(meta.tolerances)},
                {"horizon", r.horizon},
                {"states", r.states},
                {"inputs", r.inputs},
                {"tau", r.tau},
                {"rank", r.rank},
                {"horizon_covers_index", r.horizon_covers_index},
                {"controllable", r.controllable},
                {"trace_inv_grammian", real(r.trace_inv_grammian)},
                {"min_eig_inv", real(r.min_eig_inv)},
                {"det_grammian", real(r.det_grammian)},
                {"mu", real(r.mu)},
                {"sufficiency", std::string(to_string(r.sufficiency))},
                {"tightness", tightness_to_json(r.tightness)}};
}

inline std::pair<QualityReport, ReportMeta> report_from_json(const json& j) {
    try {
        QualityReport r;
        r.horizon = j.at("horizon").get<std::size_t>();
        r.states = j.at("states").get<std::size_t>();
        r.inputs = j.at("inputs").get<std::size_t>();
        r.tau = j.at("tau").get<std::size_t>();
        r.rank = j.at("rank").get<std::size_t>();
        r.horizon_covers_index = j.at("horizon_covers_index").get<bool>();
        r.controllable = j.at("controllable").get<bool>();
        r.trace_inv_grammian = read_real(j.at("trace_inv_grammian"), "trace_inv_grammian");
        r.min_eig_inv = read_real(j.at("min_eig_inv"), "min_eig_inv");
        r.det_grammian = read_real(j.at("det_grammian"), "det_grammian");
        r.mu = read_real(j.at("mu"), "mu");
        const auto s = j.at("sufficiency").get<std::string>();
        if (s == to_string(Sufficiency::ProvablyControllable)) {
            r.sufficiency = Sufficiency::ProvablyControllable;
        } else if (s == to_string(Sufficiency::Inconclusive)) {
            r.sufficiency = Sufficiency::Inconclusive;
        } else {
            throw InputError("sufficiency: unknown verdict '" + s + "'");
        }
        r.tightness = tightness_from_json(j.at("tightness"));

        ReportMeta meta;
        meta.tool_version = j.at("tool_version").get<std::string>();
        meta.input_sha256 = j.at("input_sha256").get<std::string>();
        const json& tol = j.at("tolerances");
        meta.tolerances.rank = read_real(tol.at("rank"), "tolerances.rank");
        meta.tolerances.tight = read_real(tol.at("tight"), "tolerances.tight");
        meta.tolerances.singular = read_real(tol.at("singular"), "tolerances.singular");
        return {r, meta};
    } catch (const json::exception& e) {
        throw InputError(std::string("report: ") + e.what());
    }
}

inline json lab_result_to_json(const lab::LabResult& res, const lab::LabConfig& cfg, bool certified,
                               const std::string& tool_version) {
    return json{{"tool_version", tool_version},
                {"objective", std::string(lab::to_string(cfg.objective))},
                {"norms", cfg.norms},
                {"dim", cfg.dim},
                {"restarts", cfg.restarts},
                {"max_iters", cfg.max_iters},
                {"step", real(cfg.step)},
                {"seed", cfg.seed},
                {"tol", real(cfg.tol)},
                {"best_value", real(res.best_value)},
                {"target_value", real(res.target_value)},
                {"gap", real(res.gap)},
                {"converged_restarts", res.converged_restarts},
                {"best_restart", res.best_restart},
                {"certified", certified},
                {"best_frame", frame_to_json(res.best_frame).at("vectors")}};
}

}  // namespace ctrlframe::io
