#include "circlelab/ergodic.hpp"
#include "circlelab/lift.hpp"
#include "circlelab/rng.hpp"

#include <doctest.h>

using namespace circlelab;
using grid::Domain;
using grid::GridFunction;
using poly::BigInt;
using poly::PolynomialMap;

TEST_SUITE("lift") {

TEST_CASE("moment curve blocks")
{
    const auto pm = PolynomialMap::parse("n,n^2");
    CHECK(lift::lift_curve(pm, 0, 3) == std::vector<BigInt>{3, 0, 0});
    CHECK(lift::lift_curve(pm, 1, 2) == std::vector<BigInt>{0, 2, 4});
    CHECK(lift::lift_curve(pm, 1, 0) == std::vector<BigInt>{0, 0, 0});
    CHECK_THROWS(lift::lift_curve(pm, 2, 1));
}

TEST_CASE("curve coordinates are exact powers")
{
    const auto pm = PolynomialMap::parse("n,n^2,n^4");
    Rng rng(5);
    for (int t = 0; t < 50; ++t) {
        const BigInt u = rng.integer(-1000, 1000);
        for (std::size_t i = 0; i < pm.k(); ++i) {
            const auto v = lift::lift_curve(pm, i, u);
            const auto off = lift::block_offset(pm, i);
            BigInt power = 1;
            for (int j = 0; j < pm.degree(i); ++j) {
                power *= u;
                CHECK(v[off + static_cast<std::size_t>(j)] == power);
            }
        }
    }
}

TEST_CASE("identity map lifts to itself")
{
    const auto pm = PolynomialMap::parse("n");
    GridFunction g(Domain::box({-2}, {2}));
    g.set({0}, 1);
    const auto f = lift::lift_function(g, pm, {0}, 3);
    CHECK(grid::lp_norm(f, 1) == doctest::Approx(1));
    CHECK(f.at({0}) == grid::cplx(1));
    CHECK(lift::lift_support_count(g, pm, {0}, 3) == 1);
}

TEST_CASE("support count of a lifted point mass")
{
    // k = 1, P = n^2, N = 2: f(x1, x2) = 1 iff x2 = 0 and |x1| <= 2.
    const auto pm = PolynomialMap::parse("n^2");
    GridFunction g(Domain::box({-20}, {20}));
    g.set({0}, 1);
    const auto f = lift::lift_function(g, pm, {0}, 2);
    std::size_t count = 0;
    for (const auto& v : f.values())
        count += v != grid::cplx(0);
    CHECK(count == 5);
    CHECK(lift::lift_support_count(g, pm, {0}, 2) == count);
}

TEST_CASE("nonzero constant terms are rejected")
{
    GridFunction g(Domain::box({0}, {3}));
    CHECK_THROWS(lift::lift_function(g, PolynomialMap::parse("n^2 + 1"), {0}, 2));
    CHECK_THROWS(lift::lift_function(g, PolynomialMap::parse("2n^2"), {2}, 2));
}

}
