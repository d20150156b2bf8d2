#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "trunctail/analysis.hpp"
#include "trunctail/errors.hpp"
#include "trunctail/ingest.hpp"
#include "trunctail/serialization.hpp"
#include "trunctail/tail_model.hpp"

#include <zlib.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

using namespace trunctail;

namespace {

std::string temp_path(const std::string& name)
{
    return (std::filesystem::temp_directory_path() / ("trunctail_" + name)).string();
}

std::vector<double> series(double alpha, double rho, std::size_t n, std::uint64_t seed)
{
    TailModelConfig cfg;
    cfg.heavy = {alpha, 1.0, SpectralMeasure::symmetric_line()};
    cfg.truncation = {1.0, rho};
    return generate_series(cfg, n, seed);
}

AnalysisConfig small_config()
{
    AnalysisConfig c;
    c.input = "memory";
    c.thetas = {0.5, 0.9};
    c.test_gammas = {0.3, 0.5};
    c.epsilons = {0.2};
    c.levels = {0.05};
    c.budget = {2000, 2000, 3, 0, 0.05, 100000};
    return c;
}

}  // namespace

TEST_CASE("parse_series")
{
    CHECK(parse_series("1\n2\n3\n", {}) == std::vector<double>{1, 2, 3});
    CHECK(parse_series("# comment\n\n 1.5 \r\n-2e3\n", {}) == std::vector<double>{1.5, -2000});
    CHECK(parse_series("id,size\n0,4\n1,5.5\n", {"size"}) == std::vector<double>{4, 5.5});
    CHECK(parse_series("\"id\",\"size\"\n0,4\n", {"size"}) == std::vector<double>{4});

    auto error_text = [](const std::string& text, IngestOptions opts = {}) {
        try {
            parse_series(text, opts, "f.txt");
        } catch (const DataError& e) {
            return std::string(e.what());
        }
        return std::string("no error");
    };
    CHECK(error_text("1\n2\nnan\n").find("f.txt:3") != std::string::npos);
    CHECK(error_text("1\ninf\n").find("f.txt:2") != std::string::npos);
    CHECK(error_text("1\nabc\n").find("f.txt:2") != std::string::npos);
    CHECK(error_text("") != "no error");
    CHECK(error_text("a,b\n1,2\n", {"c"}) != "no error");
    CHECK(error_text("a,b\n1,2,3\n", {"a"}).find("f.txt:2") != std::string::npos);
}

TEST_CASE("ingest plain and gzip files")
{
    const auto plain = temp_path("plain.txt");
    {
        std::ofstream f(plain);
        f << "1\n2\n3\n";
    }
    CHECK(ingest(plain) == std::vector<double>{1, 2, 3});

    const auto gz = temp_path("data.csv.gz");
    {
        gzFile f = gzopen(gz.c_str(), "wb");
        REQUIRE(f != nullptr);
        const std::string body = "t,size\n0,7\n1,8.5\n";
        gzwrite(f, body.data(), static_cast<unsigned>(body.size()));
        gzclose(f);
    }
    CHECK(ingest(gz, {"size"}) == std::vector<double>{7, 8.5});
    CHECK_THROWS_AS(ingest(temp_path("missing.txt")), DataError);
    std::remove(plain.c_str());
    std::remove(gz.c_str());
}

TEST_CASE("parse_segments and validation")
{
    CHECK(parse_segments("0:100,150:300") == std::vector<Segment>{{0, 100}, {150, 300}});
    CHECK_THROWS_AS(parse_segments("0-100"), ArgumentError);
    CHECK_THROWS_AS(parse_segments("a:3"), ArgumentError);
    CHECK_THROWS_AS(parse_segments("-1:3"), ArgumentError);
    CHECK_THROWS_AS(parse_segments(""), ArgumentError);

    auto c = small_config();
    c.segments = {{0, 100}, {50, 200}};
    CHECK_THROWS_AS(c.validate(), ArgumentError);
    c.segments = {{100, 50}};
    CHECK_THROWS_AS(c.validate(), ArgumentError);
    c.segments = {};
    c.levels = {1.5};
    CHECK_THROWS_AS(c.validate(), ArgumentError);
}

TEST_CASE("analyze_series split-half discipline and outcomes")
{
    const auto x = series(1.5, 1.0, 20001, 4);
    auto c = small_config();
    c.segments = {{1, 10001}, {10001, 20001}};
    CriticalValues cv({}, c.policy, c.budget);
    const auto r = analyze_series(x, c, cv);
    REQUIRE(r.segments.size() == 2);
    for (const auto& s : r.segments) {
        CHECK(s.errors.empty());
        CHECK(s.estimation.begin == s.segment.begin);
        CHECK(s.estimation.end == s.testing.begin);
        CHECK(s.testing.end == s.segment.end);
        CHECK(s.estimation.size() == s.segment.size() / 2);
        REQUIRE(s.alpha_bound.has_value());
        CHECK(s.alpha_bound->grid.size() == 25);
        CHECK(s.soft.size() == 2);
        CHECK(s.hard.size() == 2);
        CHECK(s.hard_strong.size() == 1);
        for (const auto& o : s.soft) {
            CHECK(o.n == s.testing.size());
            CHECK(o.reject == decision_rule(o));
            CHECK(*o.params.a1 == doctest::Approx(*o.params.a / *o.params.theta));
        }
        for (const auto& o : s.hard) {
            CHECK(o.reject == decision_rule(o));
        }
    }
    // the estimation half of segment 0 is x[1..5001); changing x[0] or the
    // testing half must not move the Hill bound
    auto y = x;
    y[0] = 1e9;
    for (std::size_t i = 5001; i < 10001; ++i) {
        y[i] *= 3;
    }
    const auto r2 = analyze_series(y, c, cv);
    CHECK(r2.segments[0].alpha_bound == r.segments[0].alpha_bound);
}

TEST_CASE("analyze_series isolates failing segments")
{
    auto x = series(1.5, 1.0, 4000, 5);
    x.insert(x.end(), 300, 2.0);
    auto c = small_config();
    c.segments = {{0, 4000}, {4000, 4300}};
    CriticalValues cv({}, c.policy, c.budget);
    const auto r = analyze_series(x, c, cv);
    CHECK(r.has_errors());
    CHECK(r.segments[0].errors.empty());
    CHECK_FALSE(r.segments[1].errors.empty());
    CHECK_FALSE(r.segments[1].alpha_bound.has_value());

    c.segments = {{0, 5000}};
    CHECK_THROWS_AS(analyze_series(x, c, cv), DataError);
    c.segments = {{0, 50}};
    CHECK_THROWS_AS(analyze_series(x, c, cv), DataError);
}

TEST_CASE("analyze from a file is deterministic and round-trips")
{
    const auto path = temp_path("series.txt");
    {
        std::ofstream f(path);
        f.precision(17);
        for (double v : series(1.2, 0.4, 6000, 8)) {
            f << v << '\n';
        }
    }
    auto c = small_config();
    c.input = path;
    c.shuffle_hard = true;
    const auto a = analyze(c);
    c.budget.workers = 3;
    const auto b = analyze(c);
    CHECK(a == b);
    CHECK(serialize_report(a) == serialize_report(b));

    const auto text = serialize_report(a);
    CHECK(parse_report(text) == a);
    CHECK(serialize_report(parse_report(text)) == text);
    const auto j = json::parse(text);
    CHECK(j.at("schema") == "trunctail.report/1");

    const auto csv = report_csv(a);
    CHECK(csv.rfind("segment,test,parameter,value,level,statistic,critical_value,p_value,reject,source\n", 0) == 0);
    CHECK(report_text(a).find("soft") != std::string::npos);
    std::remove(path.c_str());
}

TEST_CASE("report parsing errors")
{
    CHECK_THROWS_AS(parse_report("{"), DataError);
    CHECK_THROWS_AS(parse_report(R"({"schema": "other/9"})"), DataError);
    CHECK_THROWS_AS(parse_report(R"({"schema": "trunctail.report/1"})"), DataError);
}

TEST_CASE("outcome JSON round trip")
{
    TestOutcome o;
    o.test = TestKind::Hard;
    o.statistic = 3.5;
    o.critical_value = 7.68;
    o.p_value = 0.2;
    o.level = 0.05;
    o.n = 1000;
    o.params.a = 2.0;
    o.params.gamma = 0.5;
    o.critical_source = ChiSquareSource{3.84};
    CHECK(json(o).get<TestOutcome>() == o);
    o.critical_source = ZThetaQuantile{0.6, 0.05, 5.8, MonteCarloSource{10, 200, 3, 0.01}};
    CHECK(json(o).get<TestOutcome>() == o);
}
