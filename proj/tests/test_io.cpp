#include <gtest/gtest.h>

#include <clocale>
#include <random>

#include "ctrlframe/ctrlframe.hpp"
#include "ctrlframe/io.hpp"
#include "oracles.hpp"

using namespace ctrlframe;
using namespace ctrlframe::io;

namespace {

std::string message_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::InvalidArgument);
        return e.what();
    }
    ADD_FAILURE() << "no error raised";
    return {};
}

bool contains(const std::string& hay, const std::string& needle) { return hay.find(needle) != std::string::npos; }

ReportMeta meta() { return ReportMeta{std::string(kVersion), std::string(64, 'a'), Tolerances{}}; }

}  // namespace

TEST(Dump, SeventeenSignificantDigits) {
    EXPECT_EQ(dump(json(0.1), -1), "0.10000000000000001");
    EXPECT_EQ(dump(json(1.0), -1), "1.0");
    EXPECT_EQ(dump(json(-3.0), -1), "-3.0");
    EXPECT_EQ(dump(json(1e-300), -1), "1e-300");
    EXPECT_EQ(dump(json(1.0 / 3.0), -1), "0.33333333333333331");
    EXPECT_EQ(dump(json(kInfinite), -1), "\"Infinity\"");
    EXPECT_EQ(dump(json(7), -1), "7");
    EXPECT_EQ(dump(json(true), -1), "true");
}

TEST(Dump, IndependentOfLocale) {
    const std::string before = dump(json{{"x", 0.5}});
    if (std::setlocale(LC_NUMERIC, "de_DE.UTF-8") != nullptr) {
        EXPECT_EQ(dump(json{{"x", 0.5}}), before);
        std::setlocale(LC_NUMERIC, "C");
    }
    EXPECT_TRUE(contains(before, "0.5"));
}

TEST(Dump, ParsesBackToSameDoubles) {
    std::mt19937_64 rng(51);
    std::uniform_real_distribution<double> u(-1e6, 1e6);
    for (int t = 0; t < 1000; ++t) {
        const double x = u(rng) * std::pow(10.0, t % 40 - 20);
        EXPECT_EQ(json::parse(dump(json(x))).get<double>(), x);
    }
}

TEST(SystemFile, ParsesSamples) {
    const SystemFile f = parse_system_text(R"({"A": [[0, 1], [0, 0]], "B": [[0], [1]], "T": 2})");
    EXPECT_EQ(f.system.a(), (Matrix{{0.0, 1.0}, {0.0, 0.0}}));
    EXPECT_EQ(f.system.b(), (Matrix{{0.0}, {1.0}}));
    EXPECT_EQ(f.horizon, 2u);
    EXPECT_FALSE(f.rank_tol.has_value());

    const SystemFile g = parse_system_text(R"({"A": [[1]], "B": [[1, 2]], "tol": {"rank": 1e-8, "tight": 1e-6}})");
    EXPECT_FALSE(g.horizon.has_value());
    EXPECT_EQ(g.rank_tol, 1e-8);
    EXPECT_EQ(g.tight_tol, 1e-6);
}

TEST(SystemFile, DiagnosticsNameTheField) {
    EXPECT_TRUE(contains(message_of([] { (void)parse_system_text(R"({"A": [[1, 0]], "B": [[1]]})"); }), "A"));
    EXPECT_TRUE(contains(message_of([] { (void)parse_system_text(R"({"A": [[1, 0], [0]], "B": [[1], [1]]})"); }),
                         "A[1]: has 1 entries, expected 2"));
    EXPECT_TRUE(contains(message_of([] { (void)parse_system_text(R"({"A": [[1]], "B": [[1], [2]]})"); }), "B"));
    EXPECT_TRUE(contains(message_of([] { (void)parse_system_text(R"({"A": [[1, "x"], [0, 1]], "B": [[1], [1]]})"); }),
                         "A[0][1]"));
    EXPECT_TRUE(contains(message_of([] { (void)parse_system_text(R"({"B": [[1]]})"); }), "A: missing"));
    EXPECT_TRUE(contains(message_of([] { (void)parse_system_text(R"({"A": [[1]], "B": [[1]], "T": 0})"); }), "T"));
    EXPECT_TRUE(contains(message_of([] { (void)parse_system_text(R"({"A": [[1]], "B": [[1]], "T": 1.5})"); }), "T"));
    EXPECT_TRUE(contains(message_of([] { (void)parse_system_text(R"({"A": [[1]], "B": [[1]], "tol": {"rank": -1}})"); }),
                         "tol.rank"));
    EXPECT_TRUE(contains(message_of([] { (void)parse_system_text("{\"A\": [[1]],"); }), "malformed JSON"));
}

TEST(FrameFile, ParsesAndReportsErrors) {
    const FrameSequence f = parse_frame_text(R"({"vectors": [[1, 0], [1, 1]]})");
    EXPECT_EQ(f.dim(), 2u);
    EXPECT_EQ(f.size(), 2u);
    EXPECT_EQ(f[1], (Vector{1.0, 1.0}));
    EXPECT_TRUE(contains(message_of([] { (void)parse_frame_text(R"({"vectors": [[1, 0], [1]]})"); }),
                         "vectors[1]: has length 1, expected 2"));
    EXPECT_TRUE(contains(message_of([] { (void)parse_frame_text(R"({"vectors": []})"); }), "vectors"));
    EXPECT_TRUE(contains(message_of([] { (void)parse_frame_text(R"({"v": [[1]]})"); }), "vectors: missing"));
}

TEST(FrameFile, RoundTrip) {
    std::mt19937_64 rng(52);
    for (int t = 0; t < 20; ++t) {
        const FrameSequence f = oracle::random_frame(rng, 1 + t % 4, 1 + t % 6);
        EXPECT_EQ(parse_frame_text(dump(frame_to_json(f))), f);
    }
}

TEST(Report, RoundTripsAndIsAFixedPoint) {
    std::mt19937_64 rng(53);
    std::vector<QualityReport> reports{
        quality_report(LtiSystem(Matrix{{0.0, 1.0}, {0.0, 0.0}}, Matrix{{0.0}, {1.0}}), 2),
        quality_report(LtiSystem(Matrix::identity(2), Matrix{{1.0}, {0.0}}), 2),
    };
    for (int t = 0; t < 30; ++t) {
        const std::size_t n = 1 + static_cast<std::size_t>(t % 4);
        reports.push_back(quality_report(oracle::random_system(rng, n, 1 + t % 2), 1 + static_cast<std::size_t>(t % 5)));
    }
    for (const QualityReport& r : reports) {
        const std::string text = dump(report_to_json(r, meta()));
        const auto [back, back_meta] = report_from_json(parse_text(text));
        EXPECT_EQ(back, r);
        EXPECT_EQ(back_meta, meta());
        EXPECT_EQ(dump(report_to_json(back, back_meta)), text);
    }
}

TEST(Report, ContainsEveryField) {
    const QualityReport r = quality_report(LtiSystem(Matrix::identity(2), Matrix{{1.0}, {0.0}}), 2);
    const json j = report_to_json(r, meta());
    for (const char* key : {"tool_version", "input_sha256", "tolerances", "horizon", "tau", "controllable",
                            "trace_inv_grammian", "min_eig_inv", "det_grammian", "mu", "sufficiency", "tightness"}) {
        EXPECT_TRUE(j.contains(key)) << key;
    }
    const json text = json::parse(dump(j));
    EXPECT_EQ(text.at("trace_inv_grammian"), "Infinity");
    EXPECT_EQ(text.at("sufficiency"), "Inconclusive");
}

TEST(Report, RejectsUnknownVerdict) {
    json j = report_to_json(quality_report(LtiSystem(Matrix{{1.0}}, Matrix{{1.0}}), 1), meta());
    j["sufficiency"] = "Maybe";
    EXPECT_TRUE(contains(message_of([&] { (void)report_from_json(j); }), "sufficiency"));
    j.erase("mu");
    EXPECT_THROW((void)report_from_json(j), InputError);
}
