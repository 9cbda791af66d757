#include "circlelab/arcs.hpp"
#include "circlelab/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <numeric>

using namespace circlelab;
using arcs::FareyFraction;
using grid::cplx;
using grid::Domain;
using grid::GridFunction;

namespace {

std::int64_t totient_sum(std::int64_t N)
{
    std::int64_t total = 0;
    for (std::int64_t q = 1; q <= N; ++q)
        for (std::int64_t a = 0; a < q; ++a)
            total += std::gcd(a, q) == 1;
    return total;
}

}  // namespace

TEST_SUITE("arcs") {

TEST_CASE("farey fractions")
{
    CHECK(arcs::farey_upto(1) == std::vector<FareyFraction>{{0, 1}});
    CHECK(arcs::farey_upto(3) == std::vector<FareyFraction>{{0, 1}, {1, 3}, {1, 2}, {2, 3}});
    CHECK(arcs::farey_upto(10).size() == 32);
    CHECK_THROWS(arcs::farey_upto(0));
    for (std::int64_t N : {1, 2, 7, 30, 64})
        CHECK(static_cast<std::int64_t>(arcs::farey_upto(N).size()) == totient_sum(N));
}

TEST_CASE("fractions are reduced and sorted")
{
    const auto f = arcs::farey_upto(40);
    for (std::size_t i = 0; i < f.size(); ++i) {
        CHECK(std::gcd(f[i].a, f[i].q) == 1);
        CHECK(f[i].a >= 0);
        CHECK(f[i].a < f[i].q);
        if (i > 0)
            CHECK(f[i - 1] < f[i]);
    }
    CHECK(FareyFraction(2, 4) == FareyFraction(1, 2));
    CHECK(FareyFraction(-1, 3) == FareyFraction(2, 3));
}

TEST_CASE("dyadic shells")
{
    CHECK(arcs::shell(0) == std::vector<FareyFraction>{{0, 1}});
    CHECK(arcs::shell(1) == std::vector<FareyFraction>{{1, 2}});
    const auto s2 = arcs::shell(2);
    CHECK(s2.size() == 4);
    for (const FareyFraction& f : {FareyFraction(1, 3), FareyFraction(2, 3), FareyFraction(1, 4), FareyFraction(3, 4)})
        CHECK(std::find(s2.begin(), s2.end(), f) != s2.end());
    for (int l = 0; l <= 8; ++l)
        CHECK(arcs::shells_upto(l).size() <= (std::size_t{1} << (2 * l)));
}

TEST_CASE("major arc membership")
{
    const arcs::ArcFamily zero{{{0, 1}}, -5};
    CHECK(arcs::in_major_arcs(0.0, zero));
    const arcs::ArcFamily half{{{1, 2}}, -6};
    CHECK_FALSE(arcs::in_major_arcs(0.5 + 2 * half.half_width(), half));
    CHECK(arcs::in_major_arcs(0.251, arcs::farey_upto(4), 0.002));
    CHECK(arcs::in_major_arcs(0.999, zero));
}

TEST_CASE("arcs are disjoint at the stated widths")
{
    for (int l = 0; l <= 5; ++l) {
        for (int m = -2 * l - 6; m <= -2 * l - 2; ++m) {
            const arcs::ArcFamily fam{arcs::shells_upto(l), m};
            CHECK(fam.pairwise_disjoint());
        }
    }
    // widths well beyond the threshold do overlap
    CHECK_FALSE(arcs::ArcFamily{arcs::shells_upto(3), -2}.pairwise_disjoint());
}

TEST_CASE("major arcs grow with l and m")
{
    Rng rng(1);
    for (int t = 0; t < 2000; ++t) {
        const double xi = rng.uniform();
        const int l = static_cast<int>(rng.integer(0, 4));
        const int m = static_cast<int>(rng.integer(-12, -3));
        if (arcs::in_major_arcs(xi, arcs::ArcFamily{arcs::shells_upto(l), m})) {
            CHECK(arcs::in_major_arcs(xi, arcs::ArcFamily{arcs::shells_upto(l + 1), m}));
            CHECK(arcs::in_major_arcs(xi, arcs::ArcFamily{arcs::shells_upto(l), m + 1}));
        }
    }
}

TEST_CASE("smooth bump")
{
    CHECK(arcs::eta(0) == 1);
    CHECK(arcs::eta(0.25) == 1);
    CHECK(arcs::eta(-0.2) == 1);
    CHECK(arcs::eta(0.6) == 0);
    CHECK(arcs::eta(0.5) == 0);
    CHECK(arcs::eta(0.375) == doctest::Approx(0.5).epsilon(1e-14));
    double prev = 1;
    for (double x = 0; x <= 0.6; x += 1e-4) {
        const double v = arcs::eta(x);
        CHECK(v >= 0);
        CHECK(v <= 1);
        CHECK(v <= prev + 1e-15);
        CHECK(arcs::eta(-x) == v);
        prev = v;
    }
    // no jumps: fourth differences stay small on a fine grid
    const double h = 1e-4;
    double worst = 0;
    for (double x = -0.6; x <= 0.6; x += h) {
        const double d4 = arcs::eta(x + 2 * h) - 4 * arcs::eta(x + h) + 6 * arcs::eta(x) - 4 * arcs::eta(x - h) +
                          arcs::eta(x - 2 * h);
        worst = std::max(worst, std::abs(d4));
    }
    CHECK(worst < 1e-8);
}

TEST_CASE("projection fixes its own centers and kills far frequencies")
{
    const auto centers = arcs::shells_upto(2);
    const std::int64_t M = 64 * arcs::lcm_upto(4);
    for (const auto& theta : centers) {
        GridFunction spec(Domain::periodic({M}));
        spec.set({theta.a * (M / theta.q)}, 1);
        const auto f = grid::idft(spec);
        CHECK(grid::max_abs_diff(arcs::iw_project(f, 0, centers, -8), f) < 1e-12);
    }
    // frequency 1/8 is far from every center of level <= 2 at width 2^-8
    GridFunction spec(Domain::periodic({M}));
    spec.set({M / 8}, 1);
    const auto f = grid::idft(spec);
    CHECK(grid::lp_norm(arcs::iw_project(f, 0, centers, -8), 2) < 1e-12 * grid::lp_norm(f, 2));
}

TEST_CASE("projection is an l2 contraction and idempotent on its range")
{
    const auto centers = arcs::shells_upto(2);
    const std::int64_t M = 1536;   // hosts the denominators 2, 3, 4
    Rng rng(9);
    for (int t = 0; t < 10; ++t) {
        GridFunction f(Domain::periodic({M}));
        for (auto& v : f.values())
            v = rng.complex_normal();
        const auto p = arcs::iw_project(f, 0, centers, -8);
        CHECK(grid::lp_norm(p, 2) <= grid::lp_norm(f, 2) * (1 + 1e-12));

        // spectrum inside the plateaus of width 2^{m-2}
        GridFunction spec(Domain::periodic({M}));
        for (const auto& theta : centers)
            for (std::int64_t b = -1; b <= 1; ++b)
                spec.set({(theta.a * (M / theta.q) + b + M) % M}, rng.complex_normal());
        const auto g = grid::idft(spec);
        const auto pg = arcs::iw_project(g, 0, centers, -8);
        CHECK(grid::max_abs_diff(pg, g) < 1e-12);
        CHECK(grid::max_abs_diff(arcs::iw_project(pg, 0, centers, -8), pg) < 1e-12);
    }
}

TEST_CASE("projection preconditions")
{
    GridFunction f(Domain::periodic({1024}));
    CHECK_THROWS(arcs::iw_project(f, 0, arcs::shells_upto(2), -8));   // 3 does not divide 1024
    GridFunction box(Domain::box({0}, {15}));
    CHECK_THROWS(arcs::iw_project(box, 0, arcs::shells_upto(0), -4));
}

TEST_CASE("operator norm probe")
{
    const auto single = arcs::iw_opnorm_probe({{0, 1}}, -4, 2, 5, 1);
    CHECK(single.estimate <= 1 + 1e-12);
    const auto legal = arcs::iw_opnorm_probe(arcs::shells_upto(2), -6, 2, 10, 2);
    CHECK(legal.estimate <= 1 + 1e-9);
    CHECK(legal.ncenters == arcs::shells_upto(2).size());
    for (std::size_t i = 1; i < legal.running_max.size(); ++i)
        CHECK(legal.running_max[i] >= legal.running_max[i - 1]);
}

TEST_CASE("lifted composites and divisor counts")
{
    CHECK(arcs::lifted_composite(1, 17) == 1);
    CHECK(arcs::lifted_composite(6, 10) == 72);
    CHECK(arcs::lifted_composite(4, 10) == 8);
    CHECK_THROWS(arcs::lifted_composite(11, 10));
    CHECK_THROWS(arcs::lifted_composite(0, 10));
    for (std::int64_t q = 1; q <= 30; ++q)
        CHECK(arcs::lifted_composite(q, 30) % q == 0);
    CHECK(arcs::divisor_count_upto(1, 5) == 1);
    CHECK(arcs::divisor_count_upto(12, 12) == 6);
    CHECK(arcs::divisor_count_upto(12, 5) == 4);
}

TEST_CASE("shell bumps telescope")
{
    CHECK(arcs::shell_bump(0, 0, 1000, 2) == 1);
    CHECK(arcs::shell_bump(0, 3, 1000, 2) == 0);
    Rng rng(10);
    for (int t = 0; t < 50; ++t) {
        const double N = rng.uniform(4, 5000);
        const int d = static_cast<int>(rng.integer(1, 3));
        const int L = arcs::log2_floor(N);
        const int l = static_cast<int>(rng.integer(0, L));
        const double xi = rng.uniform(-0.5, 0.5) * std::pow(2.0, -d * (L - l));
        double sum = 0;
        for (int s = 0; s <= l; ++s)
            sum += arcs::shell_bump(xi, s, N, d);
        CHECK(std::abs(sum - arcs::eta(std::ldexp(xi, d * (L - l)))) <= 1e-12);
    }
}

}
