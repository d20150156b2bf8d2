#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "trunctail/errors.hpp"
#include "trunctail/numerics.hpp"
#include "trunctail/random.hpp"

#include <atomic>
#include <cmath>
#include <numbers>
#include <set>
#include <vector>

using namespace trunctail;

TEST_CASE("integrate smooth integrands")
{
    CHECK(integrate([](double x) { return std::sin(x); }, 0.0, std::numbers::pi).value ==
          doctest::Approx(2.0).epsilon(1e-12));
    CHECK(integrate([](double x) { return std::exp(-x * x); }, -6.0, 6.0).value ==
          doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-12));
    CHECK(integrate([](double) { return 0.0; }, 0.0, 1.0).value == 0.0);
}

TEST_CASE("bisect")
{
    const double root = bisect([](double x) { return x * x - 2.0; }, 0.0, 2.0, 1e-12);
    CHECK(root == doctest::Approx(std::sqrt(2.0)).epsilon(1e-11));
    CHECK_THROWS_AS(bisect([](double x) { return x * x + 1.0; }, -1.0, 1.0, 1e-6), ArgumentError);
}

TEST_CASE("compensated and pairwise sums")
{
    CompensatedSum s;
    s.add(1e16);
    for (int i = 0; i < 1000; ++i) {
        s.add(1.0);
    }
    s.add(-1e16);
    CHECK(s.value() == 1000.0);

    std::vector<double> v(100001, 0.1);
    CHECK(pairwise_sum(v) == doctest::Approx(10000.1).epsilon(1e-14));
    CHECK(pairwise_sum(std::vector<double>{}) == 0.0);
}

TEST_CASE("guarded floor and ceil")
{
    const double n = 3.0;
    CHECK(floor_guarded(n * (1.0 / n)) == 1);
    CHECK(floor_guarded(0.1 * 3 * 10) == 3);
    CHECK(floor_guarded(2.5) == 2);
    CHECK(ceil_guarded(0.95 * 100) == 95);
    CHECK(ceil_guarded(2.5) == 3);
    CHECK(ceil_guarded((1 - 0.05) * 100000) == 95000);
}

TEST_CASE("derive_seed separates streams and indices")
{
    std::set<std::uint64_t> seen;
    for (std::uint64_t s = 0; s < 4; ++s) {
        for (std::uint64_t i = 0; i < 1000; ++i) {
            seen.insert(derive_seed(7, s, i));
        }
    }
    CHECK(seen.size() == 4000);
    CHECK(derive_seed(7, 1, 2) == derive_seed(7, 1, 2));
}

TEST_CASE("Rng uniform stays in the open interval")
{
    Rng rng(1);
    double lo = 1;
    double hi = 0;
    double sum = 0;
    for (int i = 0; i < 100000; ++i) {
        const double u = rng.uniform();
        lo = std::min(lo, u);
        hi = std::max(hi, u);
        sum += u;
    }
    CHECK(lo > 0.0);
    CHECK(hi < 1.0);
    CHECK(sum / 100000 == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("parallel_for visits every index once")
{
    for (unsigned workers : {1u, 3u, 0u}) {
        std::vector<std::atomic<int>> hits(1000);
        parallel_for(hits.size(), [&](std::size_t i) { hits[i]++; }, workers);
        bool ok = true;
        for (auto& h : hits) {
            ok = ok && h.load() == 1;
        }
        CHECK(ok);
    }
}
