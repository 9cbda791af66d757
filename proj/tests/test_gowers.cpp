#include "circlelab/gowers.hpp"
#include "circlelab/rng.hpp"

#include <doctest.h>

#include <cmath>

using namespace circlelab;
using gowers::BoxNormSpec;
using gowers::Interval;
using grid::cplx;
using grid::Domain;
using grid::GridFunction;
using grid::Point;

namespace {

GridFunction random_box(std::int64_t lo, std::int64_t hi, Rng& rng)
{
    GridFunction f(Domain::box({lo}, {hi}));
    for (auto& v : f.values())
        v = rng.unit_disc();
    return f;
}

// Plain double averages over H x H, no Fejer weights.
double oracle_s1(const GridFunction& f, Interval H, std::int64_t I_size)
{
    cplx acc{};
    for (std::int64_t x = -200; x <= 200; ++x)
        for (std::int64_t a = H.lo; a <= H.hi; ++a)
            for (std::int64_t b = H.lo; b <= H.hi; ++b)
                acc += f.at({x + a}) * std::conj(f.at({x + b}));
    return acc.real() / static_cast<double>(H.size() * H.size() * I_size);
}

double oracle_s2(const GridFunction& f, Interval H1, Interval H2, std::int64_t I_size)
{
    cplx acc{};
    for (std::int64_t x = -100; x <= 100; ++x)
        for (std::int64_t a1 = H1.lo; a1 <= H1.hi; ++a1)
            for (std::int64_t b1 = H1.lo; b1 <= H1.hi; ++b1)
                for (std::int64_t a2 = H2.lo; a2 <= H2.hi; ++a2)
                    for (std::int64_t b2 = H2.lo; b2 <= H2.hi; ++b2)
                        acc += f.at({x + a1 + a2}) * std::conj(f.at({x + b1 + a2})) *
                               std::conj(f.at({x + a1 + b2})) * f.at({x + b1 + b2});
    const double n = static_cast<double>(H1.size() * H1.size() * H2.size() * H2.size());
    return acc.real() / (n * static_cast<double>(I_size));
}

BoxNormSpec spec_1d(int s, std::vector<Interval> H, std::int64_t lo, std::int64_t hi)
{
    BoxNormSpec spec;
    spec.s = s;
    spec.H = std::move(H);
    spec.I_lo = {lo};
    spec.I_hi = {hi};
    return spec;
}

}  // namespace

TEST_SUITE("gowers") {

TEST_CASE("multiplicative derivatives")
{
    Rng rng(1);
    const auto f = random_box(-5, 5, rng);
    const auto d0 = gowers::mult_derivative(f, Point{0});
    for (std::size_t i = 0; i < f.size(); ++i)
        CHECK(std::abs(d0[i] - cplx(std::norm(f[i]))) < 1e-15);

    GridFunction chr(Domain::periodic({40}));
    for (std::int64_t x = 0; x < 40; ++x)
        chr.set({x}, grid::e_ratio(7 * x, 40));   // a character of Z/40
    const auto dc = gowers::mult_derivative(chr, Point{3});
    for (const auto& v : dc.values())
        CHECK(std::abs(v - grid::e_ratio(-21, 40)) < 1e-13);

    const auto a = gowers::mult_derivative(gowers::mult_derivative(f, Point{2}), Point{-3});
    const auto b = gowers::mult_derivative(gowers::mult_derivative(f, Point{-3}), Point{2});
    CHECK(grid::max_abs_diff(a, b) < 1e-15);
    CHECK(grid::max_abs_diff(gowers::mult_derivative(f, std::vector<Point>{{2}, {-3}}), a) < 1e-15);
}

TEST_CASE("the unit mass")
{
    GridFunction d0(Domain::box({-2}, {2}));
    d0.set({0}, 1);
    const auto spec = spec_1d(2, {{1, 2}, {1, 2}}, -2, 2);
    CHECK(gowers::box_norm_power(d0, spec) == doctest::Approx(1.0 / 20).epsilon(1e-14));
    CHECK(gowers::gowers_norm(d0, 2, {1, 2}, {-2}, {2}) == doctest::Approx(std::pow(20.0, -0.25)).epsilon(1e-14));
    GridFunction zero(Domain::box({-2}, {2}));
    CHECK(gowers::box_norm(zero, spec) == 0);
    CHECK(gowers::gowers_norm(zero, 3, {1, 3}, {-2}, {2}) == 0);
}

TEST_CASE("Fejer form agrees with plain double averages")
{
    Rng rng(2);
    for (int t = 0; t < 20; ++t) {
        const std::int64_t len = rng.integer(1, 12);
        const auto f = random_box(0, len - 1, rng);
        const Interval H{1, rng.integer(1, 5)};
        CHECK(gowers::box_norm_power(f, spec_1d(1, {H}, 0, len - 1)) ==
              doctest::Approx(oracle_s1(f, H, len)).epsilon(1e-10));
        const Interval H2{1, rng.integer(1, 4)};
        CHECK(gowers::box_norm_power(f, spec_1d(2, {H, H2}, 0, len - 1)) ==
              doctest::Approx(oracle_s2(f, H, H2, len)).epsilon(1e-10));
    }
}

TEST_CASE("homogeneity, conjugation and triangle inequality")
{
    Rng rng(3);
    for (int t = 0; t < 30; ++t) {
        const int s = static_cast<int>(rng.integer(1, 3));
        const std::int64_t len = rng.integer(2, 16);
        std::vector<Interval> H;
        for (int i = 0; i < s; ++i)
            H.push_back({1, rng.integer(1, 4)});
        const auto spec = spec_1d(s, H, 0, len - 1);
        const auto f = random_box(0, len - 1, rng);
        const auto g = random_box(0, len - 1, rng);
        const cplx c = rng.complex_normal();
        const double nf = gowers::box_norm(f, spec);
        CHECK(gowers::box_norm(grid::scale(f, c), spec) == doctest::Approx(std::abs(c) * nf).epsilon(1e-10));
        CHECK(gowers::box_norm(grid::conj(f), spec) == doctest::Approx(nf).epsilon(1e-12));
        CHECK(gowers::box_norm(grid::add(f, g), spec) <= nf + gowers::box_norm(g, spec) + 1e-9);
    }
}

TEST_CASE("box inner products")
{
    Rng rng(4);
    for (int s = 1; s <= 3; ++s) {
        std::vector<Interval> H(static_cast<std::size_t>(s), Interval{1, 3});
        const auto spec = spec_1d(s, H, 0, 9);
        const auto f = random_box(0, 9, rng);
        std::vector<GridFunction> same(std::size_t{1} << s, f);
        const cplx v = gowers::box_inner_product(same, spec);
        CHECK(std::abs(v - cplx(gowers::box_norm_power(f, spec))) < 1e-10);

        std::vector<GridFunction> fam;
        double prod = 1;
        for (std::size_t w = 0; w < (std::size_t{1} << s); ++w) {
            fam.push_back(random_box(0, 9, rng));
            prod *= gowers::box_norm(fam.back(), spec);
        }
        CHECK(std::abs(gowers::box_inner_product(fam, spec)) <= prod + 1e-9);
        fam[1] = GridFunction(Domain::box({0}, {9}));
        CHECK(std::abs(gowers::box_inner_product(fam, spec)) == 0);
    }
    CHECK_THROWS(gowers::box_inner_product({random_box(0, 9, rng)}, spec_1d(1, {{1, 2}}, 0, 9)));
}

TEST_CASE("specs are validated")
{
    GridFunction f(Domain::box({0}, {4}));
    CHECK_THROWS(gowers::box_norm(f, spec_1d(0, {}, 0, 4)));
    CHECK_THROWS(gowers::box_norm(f, spec_1d(1, {{2, 1}}, 0, 4)));
    GridFunction wide(Domain::box({0}, {8}));
    wide.set({8}, 1);
    CHECK_THROWS(gowers::box_norm(wide, spec_1d(1, {{1, 2}}, 0, 4)));
}

TEST_CASE("U2 inverse bound")
{
    GridFunction d0(Domain::box({-2}, {2}));
    d0.set({0}, 1);
    const auto u = gowers::u2_inverse_check(d0, {1, 2}, {-2, 2});
    CHECK(u.lhs == doctest::Approx(1.0 / 20));
    CHECK(u.rhs == doctest::Approx(0.25));
    CHECK(u.ok);
    CHECK(u.frequency_grid >= 8 * 5);

    const auto z = gowers::u2_inverse_check(GridFunction(Domain::box({-2}, {2})), {1, 2}, {-2, 2});
    CHECK(z.lhs == 0);
    CHECK(z.rhs == 0);
    CHECK(z.ok);

    Rng rng(5);
    for (int t = 0; t < 100; ++t) {
        const std::int64_t len = rng.integer(1, 24);
        const auto f = random_box(0, len - 1, rng);
        CHECK(gowers::u2_inverse_check(f, {1, rng.integer(1, 6)}, {0, len - 1}).ok);
    }
    GridFunction big(Domain::box({0}, {3}));
    big.set({1}, 2);
    CHECK_THROWS(gowers::u2_inverse_check(big, {1, 2}, {0, 3}));
}

}
