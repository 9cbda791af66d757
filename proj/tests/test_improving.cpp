#include "circlelab/improving.hpp"
#include "circlelab/rng.hpp"

#include <doctest.h>

#include <map>

using namespace circlelab;
using grid::Domain;
using improving::BigInt;
using improving::IndicatorSet;
using improving::Rational;
using poly::PolynomialMap;

namespace {

// The 2s-fold loop over [N]^{2s}.
BigInt naive_count(int s, int d, std::int64_t N)
{
    std::int64_t total = 0;
    std::vector<std::int64_t> v(static_cast<std::size_t>(2 * s), 1);
    while (true) {
        bool match = true;
        for (int j = 1; j <= d && match; ++j) {
            std::int64_t diff = 0;
            for (int i = 0; i < 2 * s; ++i) {
                std::int64_t pw = 1;
                for (int e = 0; e < j; ++e)
                    pw *= v[static_cast<std::size_t>(i)];
                diff += i < s ? pw : -pw;
            }
            match = diff == 0;
        }
        total += match;
        std::size_t i = 0;
        while (i < v.size() && ++v[i] > N)
            v[i++] = 1;
        if (i == v.size())
            break;
    }
    return total;
}

IndicatorSet interval_set(std::int64_t lo, std::int64_t hi, std::int64_t box_lo, std::int64_t box_hi)
{
    IndicatorSet e(Domain::box({box_lo}, {box_hi}));
    for (std::int64_t x = lo; x <= hi; ++x)
        e.insert({x});
    return e;
}

IndicatorSet random_set(const Domain& box, double density, Rng& rng)
{
    IndicatorSet e(box);
    grid::GridFunction shape(box);
    for (std::size_t i = 0; i < shape.size(); ++i)
        if (rng.bernoulli(density))
            e.insert(shape.point_of(i));
    return e;
}

}  // namespace

TEST_SUITE("improving") {

TEST_CASE("small Vinogradov counts")
{
    for (std::int64_t N : {1, 2, 5, 17})
        CHECK(improving::vinogradov_count(1, 1, N) == N);
    CHECK(improving::vinogradov_count(2, 1, 2) == 6);
    CHECK(improving::vinogradov_count(2, 2, 2) == 6);
    CHECK_THROWS(improving::vinogradov_count(0, 1, 3));
}

TEST_CASE("histogram counts match the naive loop")
{
    for (int s = 1; s <= 2; ++s)
        for (int d = 1; d <= 3; ++d)
            for (std::int64_t N = 1; N <= 6; ++N)
                CHECK(improving::vinogradov_count(s, d, N) == naive_count(s, d, N));
}

TEST_CASE("inhomogeneous counts never exceed the homogeneous one")
{
    Rng rng(1);
    for (int t = 0; t < 40; ++t) {
        const int s = static_cast<int>(rng.integer(1, 3));
        const int d = static_cast<int>(rng.integer(1, 3));
        const std::int64_t N = rng.integer(1, 6);
        std::vector<std::int64_t> xi;
        for (int j = 1; j <= d; ++j)
            xi.push_back(rng.integer(-3, 3));
        CHECK(improving::vinogradov_count(s, d, N, xi) <= improving::vinogradov_count(s, d, N));
    }
    CHECK(improving::vinogradov_count(2, 2, 4, std::vector<std::int64_t>{0, 0}) ==
          improving::vinogradov_count(2, 2, 4));
}

TEST_CASE("mean value fits")
{
    const auto one = improving::vmvt_bound_check(1, 1, {1, 2, 4, 8, 16}, 0.1);
    // J = N against N^s + N^{2s-1} = 2N
    for (double r : one.ratio_free)
        CHECK(r == doctest::Approx(0.5));

    const auto fit = improving::vmvt_bound_check(4, 2, {4, 8, 12, 16, 20, 24}, 0.1);
    REQUIRE(fit.C_free.has_value());
    CHECK(*fit.C_free >= fit.C_eps);
    CHECK(fit.ok);
    const auto low = improving::vmvt_bound_check(2, 2, {4, 8}, 0.1);
    CHECK_FALSE(low.C_free.has_value());
}

TEST_CASE("indicator sets")
{
    IndicatorSet e(Domain::box({0, 0}, {3, 3}));
    e.insert({1, 2});
    e.insert({1, 2});
    e.insert({3, 0});
    CHECK(e.cardinality() == 2);
    CHECK(e.contains({1, 2}));
    CHECK_FALSE(e.contains({2, 1}));
    CHECK_FALSE(e.contains({9, 9}));
    e.erase({1, 2});
    CHECK(e.cardinality() == 1);
    CHECK(IndicatorSet::from_function(e.to_function()) == e);
    grid::GridFunction bad(Domain::box({0}, {2}));
    bad[1] = 0.5;
    CHECK_THROWS(IndicatorSet::from_function(bad));
}

TEST_CASE("corner form")
{
    const auto lin = PolynomialMap::parse("n");
    const auto E = interval_set(0, 3, 0, 3);
    const auto K = improving::corner_form(lin, 2, {E, E});
    CHECK(K.count == 5);
    CHECK(K.K == Rational(5, 2));

    const IndicatorSet empty(Domain::box({0}, {3}));
    CHECK(improving::corner_form(lin, 2, {E, empty}).count == 0);
    CHECK(improving::corner_form(lin, 2, {empty, E}).count == 0);

    // every orbit point lands in E_1
    const auto small = interval_set(10, 12, 0, 20);
    const auto full = interval_set(0, 20, 0, 20);
    CHECK(improving::corner_form(PolynomialMap::parse("n^2"), 3, {small, full}).K == 3);
}

TEST_CASE("corner form is monotone in each set")
{
    Rng rng(2);
    const auto pm = PolynomialMap::parse("n,n^2");
    const Domain box = Domain::box({0, 0}, {9, 9});
    for (int t = 0; t < 20; ++t) {
        std::vector<IndicatorSet> E{random_set(box, 0.5, rng), random_set(box, 0.5, rng), random_set(box, 0.5, rng)};
        const auto base = improving::corner_form(pm, 3, E);
        for (std::size_t i = 0; i < E.size(); ++i) {
            auto bigger = E;
            bigger[i] = IndicatorSet(box);
            for (const auto& p : E[i].points())
                bigger[i].insert(p);
            for (int extra = 0; extra < 10; ++extra)
                bigger[i].insert({rng.integer(0, 9), rng.integer(0, 9)});
            CHECK(improving::corner_form(pm, 3, bigger).count >= base.count);
        }
    }
}

TEST_CASE("restricted weak-type ratios")
{
    const auto lin = PolynomialMap::parse("n");
    const auto ex = improving::default_exponents(lin);
    const auto E = interval_set(0, 7, -8, 8);
    const IndicatorSet empty(Domain::box({-8}, {8}));
    CHECK(improving::rwt_check(lin, 4, {E, empty}, ex).ratio == 0);
    const auto full = improving::rwt_check(lin, 4, {E, E}, ex);
    CHECK(full.ratio > 0);
    CHECK(full.sizes == std::vector<std::size_t>{8, 8});

    improving::RwtExponents bad = ex;
    bad.s = {0};
    CHECK_THROWS(improving::rwt_check(lin, 4, {E, E}, bad));
}

TEST_CASE("sweeps reproduce exactly")
{
    const auto pm = PolynomialMap::parse("n,n^2");
    const auto a = improving::rwt_sweep(pm, 4, 6, 11, 1);
    const auto b = improving::rwt_sweep(pm, 4, 6, 11, 1);
    CHECK(a.families == 6);
    CHECK(a.max_ratio == b.max_ratio);
    CHECK(a.ratios == b.ratios);
    CHECK(a.certificates_hold);
}

TEST_CASE("refinements")
{
    const auto lin = PolynomialMap::parse("n");
    const auto full = interval_set(-20, 20, -20, 20);
    const auto r0 = improving::refine(lin, 4, {full, full}, 2);
    CHECK(r0.all_hold());
    CHECK(r0.all_nonempty());

    Rng rng(3);
    const Domain box = Domain::box({0}, {15});
    for (int t = 0; t < 30; ++t) {
        std::vector<IndicatorSet> E{random_set(box, 0.7, rng), random_set(box, 0.7, rng)};
        if (improving::lifted_corner_form(lin, 4, E).count == 0)
            continue;
        const auto r = improving::refine(lin, 4, E, 2);
        CHECK(r.all_hold());
        CHECK(r.all_nonempty());
        CHECK(r.levels.size() >= 2);
    }
    const IndicatorSet empty(Domain::box({0}, {15}));
    CHECK_THROWS(improving::refine(lin, 4, {empty, empty}, 1));
}

}
