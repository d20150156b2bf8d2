#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "trunctail/errors.hpp"
#include "trunctail/quantile_table.hpp"

#include <cstdio>
#include <filesystem>
#include <thread>

using namespace trunctail;

namespace {

const CriticalBudget kSmall{1000, 1000, 5, 1, 0.05, 100000};

}  // namespace

TEST_CASE("table ordering and lookup")
{
    QuantileTable t;
    t.add({0.9, 0.01, 100.0, MarkovSource{}});
    t.add({0.5, 0.025, 5.0, MonteCarloSource{10, 200, 1, 0.0}});
    t.add({0.5, 0.05, 4.0, MonteCarloSource{10, 200, 1, 0.0}});
    t.add({0.9, 0.05, 70.0, MarkovSource{}});
    REQUIRE(t.entries().size() == 4);
    CHECK(t.entries()[0].p == 0.05);
    CHECK(t.entries()[1].p == 0.025);
    CHECK(t.entries()[2].theta == 0.9);
    CHECK(t.entries()[2].p == 0.05);
    CHECK(t.find(0.5 + 1e-12, 0.025)->value == 5.0);
    CHECK_FALSE(t.find(0.6, 0.025).has_value());
    t.add({0.5, 0.05, 4.5, MarkovSource{}});
    CHECK(t.entries().size() == 4);
    CHECK(t.find(0.5, 0.05)->value == 4.5);
}

TEST_CASE("CSV round trip")
{
    const double thetas[] = {0.6, 0.95};
    const double ps[] = {0.05, 0.01};
    const auto t = generate_table(thetas, ps, CriticalPolicy::Auto, kSmall);
    REQUIRE(t.entries().size() == 4);
    const auto csv = t.to_csv();
    CHECK(csv.rfind("theta,p,value,source,n_terms,n_reps,seed,tail_mean,r,k_grid\n", 0) == 0);
    CHECK(QuantileTable::from_csv(csv) == t);

    const auto path = (std::filesystem::temp_directory_path() / "trunctail_table_test.csv").string();
    t.save(path);
    CHECK(QuantileTable::load(path) == t);
    std::remove(path.c_str());
}

TEST_CASE("malformed tables")
{
    CHECK_THROWS_AS(QuantileTable::from_csv(""), DataError);
    CHECK_THROWS_AS(QuantileTable::from_csv("a,b\n"), DataError);
    const std::string h = "theta,p,value,source,n_terms,n_reps,seed,tail_mean,r,k_grid\n";
    CHECK_THROWS_AS(QuantileTable::from_csv(h + "0.5,0.05,x,monte_carlo,1,1,1,0,,\n"), DataError);
    CHECK_THROWS_AS(QuantileTable::from_csv(h + "0.5,0.05,4\n"), DataError);
    CHECK_THROWS_AS(QuantileTable::from_csv(h + "0.5,0.05,4,oracle,1,1,1,0,,\n"), DataError);
    CHECK_THROWS_AS(QuantileTable::load("/nonexistent/table.csv"), DataError);
}

TEST_CASE("generate_table sources and determinism")
{
    const auto thetas = default_thetas();
    const auto ps = default_levels();
    const auto a = generate_table(thetas, ps, CriticalPolicy::Auto, kSmall);
    CHECK(a.entries().size() == 18);
    for (const auto& e : a.entries()) {
        CHECK(std::holds_alternative<MonteCarloSource>(e.source) == (e.theta <= 0.7));
        CHECK(e.value >= 1.0);
    }
    CHECK(a.find(0.95, 0.01)->value == doctest::Approx(markov_quantile(0.95, 0.01, 0.05, 100000).value));
    CriticalBudget threads = kSmall;
    threads.workers = 3;
    CHECK(generate_table(thetas, ps, CriticalPolicy::Auto, threads).to_csv() == a.to_csv());
    const double bad[] = {1.2};
    CHECK_THROWS_AS(generate_table(bad, ps, CriticalPolicy::Auto, kSmall), ArgumentError);
}

TEST_CASE("CriticalValues fills gaps on demand")
{
    QuantileTable seed;
    seed.add({0.5, 0.05, 4.3, MonteCarloSource{100000, 100000, 1, 0.0}});
    CriticalValues cv(seed, CriticalPolicy::Auto, kSmall);
    CHECK(cv.get(0.5, 0.05).value == 4.3);
    const auto m = cv.get(0.8, 0.05);
    CHECK(std::holds_alternative<MarkovSource>(m.source));
    const auto q = cv.get(0.6, 0.01);
    CHECK(std::holds_alternative<MonteCarloSource>(q.source));
    CHECK(cv.table().entries().size() == 3);
    CHECK(cv.get(0.6, 0.01) == q);

    // forcing the bound replaces a Monte Carlo entry
    CriticalValues forced(seed, CriticalPolicy::MarkovBound, kSmall);
    CHECK(std::holds_alternative<MarkovSource>(forced.get(0.5, 0.05).source));
}

TEST_CASE("CriticalValues is safe to share")
{
    CriticalValues cv({}, CriticalPolicy::Auto, kSmall);
    std::vector<std::thread> threads;
    std::vector<double> got(8);
    for (int i = 0; i < 8; ++i) {
        threads.emplace_back([&, i] { got[i] = cv.get(i % 2 ? 0.6 : 0.9, 0.05).value; });
    }
    for (auto& t : threads) {
        t.join();
    }
    for (int i = 2; i < 8; ++i) {
        CHECK(got[i] == got[i % 2]);
    }
}
