#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "tcalg/verify.hpp"

namespace {

using namespace tcalg;

RunConfig square_config() {
    RunConfig c;
    c.zeros = {0.0, 0.0};
    return c;
}

const VerificationReport& half_report() {
    static const VerificationReport r = run_verify(RunConfig{});
    return r;
}

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("tcalg_test_" + name);
}

TEST(RunVerify, SquarePassesWithTinyResiduals) {
    const auto r = run_verify(square_config());
    EXPECT_TRUE(r.passed());
    for (const auto& c : r.checks) {
        EXPECT_FALSE(c.errored) << c.id << ": " << c.message;
        if (c.relation == Relation::AtMost) {
            EXPECT_LE(c.residual, 1e-10) << c.id;
        }
    }
    ASSERT_NE(r.find("power_map_relations"), nullptr);
    EXPECT_EQ(r.find("power_map_relations")->residual, 0.0);
}

TEST(RunVerify, DefaultsPass) {
    const auto& r = half_report();
    for (const auto& c : r.checks) EXPECT_TRUE(c.passed) << c.id << " residual " << c.residual << " " << c.message;
    EXPECT_TRUE(r.passed());
    EXPECT_EQ(r.find("power_map_relations"), nullptr);
}

TEST(RunVerify, ManifestCompleteness) {
    const auto& r = half_report();
    std::vector<std::string> ids;
    for (const auto& c : r.checks) ids.push_back(c.id);
    EXPECT_EQ(ids, expected_check_ids(RunConfig{}.product()));
    EXPECT_EQ(std::set<std::string>(ids.begin(), ids.end()).size(), ids.size());
    for (const auto& id : ids) EXPECT_NE(find_check(id), nullptr) << id;
    EXPECT_EQ(expected_check_ids(BlaschkeProduct::monomial(3)).back(), "power_map_relations");
}

TEST(RunVerify, CornerTooLargeIsConfigError) {
    RunConfig c;
    c.corner = 65;
    EXPECT_THROW(run_verify(c), ConfigError);
}

TEST(RunVerify, ValidationRules) {
    const auto bad = [](auto mutate) {
        RunConfig c;
        mutate(c);
        return c;
    };
    EXPECT_THROW(validate(bad([](RunConfig& c) { c.grid = 1000; })), ConfigError);
    EXPECT_THROW(validate(bad([](RunConfig& c) { c.truncation = 2048; })), ConfigError);
    EXPECT_THROW(validate(bad([](RunConfig& c) { c.corner = 0; })), ConfigError);
    EXPECT_THROW(validate(bad([](RunConfig& c) { c.zeros = {0.5, 0.0}; })), ConfigError);
    EXPECT_THROW(validate(bad([](RunConfig& c) { c.zeros = {0.0}; })), ConfigError);
    EXPECT_THROW(validate(bad([](RunConfig& c) { c.tolerances["no_such_check"] = 1.0; })), ConfigError);
    EXPECT_THROW(validate(bad([](RunConfig& c) { c.tolerances["conjugacy"] = 0.0; })), ConfigError);
    EXPECT_NO_THROW(validate(RunConfig{}));
}

TEST(RunVerify, ModuleErrorIsCapturedPerCheck) {
    RunConfig c;
    c.conjugacy_max_iterations = 1;
    const auto r = run_verify(c);
    const auto* conj = r.find("conjugacy");
    ASSERT_NE(conj, nullptr);
    EXPECT_TRUE(conj->errored);
    EXPECT_FALSE(conj->passed);
    EXPECT_TRUE(std::isnan(conj->residual));
    EXPECT_FALSE(conj->message.empty());
    EXPECT_TRUE(r.errored());
    EXPECT_FALSE(r.passed());
    EXPECT_EQ(r.checks.size(), check_manifest.size());
    EXPECT_TRUE(r.find("k_groups")->passed);
}

TEST(RunVerify, ToleranceOverrideCanFail) {
    RunConfig c = square_config();
    c.tolerances["lift_expanding"] = 5.0;
    const auto r = run_verify(c);
    EXPECT_FALSE(r.find("lift_expanding")->passed);
    EXPECT_EQ(r.find("lift_expanding")->tolerance, 5.0);
    EXPECT_FALSE(r.passed());
}

TEST(RunVerify, ParallelMatchesSequential) {
    const auto par = run_verify(RunConfig{}, true);
    EXPECT_TRUE(canonical_equal(par, half_report()));
}

TEST(Reports, CanonicalRoundTrip) {
    const auto& r = half_report();
    const auto text = render_report(r, ReportFormat::Canonical);
    const auto back = parse_canonical(text);
    EXPECT_TRUE(canonical_equal(back, r));
    EXPECT_EQ(back.config, r.config);
    EXPECT_EQ(render_report(back, ReportFormat::Canonical), text);

    RunConfig c;
    c.conjugacy_max_iterations = 1;
    const auto errored = run_verify(c);
    EXPECT_TRUE(canonical_equal(parse_canonical(render_report(errored, ReportFormat::Canonical)), errored));
}

TEST(Reports, CanonicalIsByteDeterministic) {
    const auto again = run_verify(RunConfig{});
    EXPECT_EQ(render_report(again, ReportFormat::Canonical), render_report(half_report(), ReportFormat::Canonical));
}

TEST(Reports, TableHasHeaderAndOneRowPerCheck) {
    const auto& r = half_report();
    std::istringstream in(render_report(r, ReportFormat::Table));
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, table_header);
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        ASSERT_LT(rows, r.checks.size());
        EXPECT_EQ(line.rfind(r.checks[rows].id + ",PASS,", 0), 0u) << line;
        ++rows;
    }
    EXPECT_EQ(rows, r.checks.size());
}

TEST(Reports, HumanSummary) {
    const auto text = render_report(half_report(), ReportFormat::Human);
    EXPECT_NE(text.find("ALL CHECKS PASSED"), std::string::npos);
    EXPECT_NE(text.find("[PASS] log_derivative_identity"), std::string::npos);
}

TEST(Reports, EmitWritesAndRejectsBadPath) {
    const auto path = temp_file("report.json");
    emit_report(half_report(), ReportFormat::Canonical, path.string());
    std::ifstream in(path);
    std::stringstream buf;
    buf << in.rdbuf();
    EXPECT_EQ(buf.str(), render_report(half_report(), ReportFormat::Canonical));
    std::filesystem::remove(path);
    EXPECT_THROW(emit_report(half_report(), ReportFormat::Table, "/nonexistent-dir/x/report.csv"), Error);
}

TEST(Reports, ParseFormat) {
    EXPECT_EQ(parse_format("human"), ReportFormat::Human);
    EXPECT_EQ(parse_format("canonical"), ReportFormat::Canonical);
    EXPECT_EQ(parse_format("table"), ReportFormat::Table);
    EXPECT_THROW(parse_format("xml"), ConfigError);
}

TEST(Config, FieldWiseOverride) {
    const auto path = temp_file("config.json");
    {
        std::ofstream out(path);
        out << R"({"zeros": [[0, 0], [0.3, 0.4]], "corner": 16, "tolerances": {"conjugacy": 1e-5}})";
    }
    const auto c = load_config(path.string());
    std::filesystem::remove(path);
    EXPECT_EQ(c.zeros.size(), 2u);
    EXPECT_EQ(c.zeros[1], cplx(0.3, 0.4));
    EXPECT_EQ(c.corner, 16);
    EXPECT_EQ(c.truncation, 256);
    EXPECT_EQ(c.tolerances.at("conjugacy"), 1e-5);
}

TEST(Config, JsonRoundTrip) {
    RunConfig c;
    c.lambda_angle = 0.25;
    c.seed = 99;
    c.tolerances["tm_gram"] = 1e-9;
    RunConfig back;
    apply_json(back, to_json(c));
    EXPECT_EQ(back, c);
}

TEST(Config, Errors) {
    RunConfig c;
    EXPECT_THROW(apply_json(c, nlohmann::json::parse(R"({"bogus": 1})")), ConfigError);
    EXPECT_THROW(apply_json(c, nlohmann::json::parse(R"({"zeros": [1, 2]})")), ConfigError);
    EXPECT_THROW(apply_json(c, nlohmann::json::parse(R"({"corner": "big"})")), ConfigError);
    EXPECT_THROW(apply_json(c, nlohmann::json::parse("[]")), ConfigError);
    EXPECT_THROW(load_config("/nonexistent/config.json"), ConfigError);
    const auto path = temp_file("broken.json");
    {
        std::ofstream out(path);
        out << "{ not json";
    }
    EXPECT_THROW(load_config(path.string()), ConfigError);
    std::filesystem::remove(path);
}

} // namespace
