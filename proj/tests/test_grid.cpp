#include "circlelab/grid.hpp"
#include "circlelab/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>

using namespace circlelab;
using grid::cplx;
using grid::Domain;
using grid::GridFunction;

namespace {

GridFunction random_function(const Domain& d, Rng& rng)
{
    GridFunction f(d);
    for (auto& v : f.values())
        v = rng.complex_normal();
    return f;
}

const double inf = std::numeric_limits<double>::infinity();

}  // namespace

TEST_SUITE("grid") {

TEST_CASE("lp norms")
{
    GridFunction delta(Domain::box({-2, -2}, {2, 2}));
    delta.set({0, 0}, 1);
    for (double p : {0.5, 1.0, 2.0, 3.0, inf})
        CHECK(grid::lp_norm(delta, p) == doctest::Approx(1));

    GridFunction ones(Domain::box({0, 0}, {1, 2}));
    for (auto& v : ones.values())
        v = 1;
    CHECK(grid::lp_norm(ones, 2) == doctest::Approx(std::sqrt(6.0)));

    GridFunction pair(Domain::box({0}, {1}));
    pair.set({0}, 3);
    pair.set({1}, 4);
    CHECK(grid::lp_norm(pair, 2) == doctest::Approx(5));
}

TEST_CASE("lp norm ordering on counting measure")
{
    Rng rng(1);
    for (int t = 0; t < 50; ++t) {
        const auto f = random_function(Domain::box({0}, {rng.integer(0, 30)}), rng);
        const double q = rng.uniform(0.5, 4), p = q + rng.uniform(0, 4);
        CHECK(grid::lp_norm(f, inf) <= grid::lp_norm(f, p) * (1 + 1e-12));
        CHECK(grid::lp_norm(f, p) <= grid::lp_norm(f, q) * (1 + 1e-12));
    }
}

TEST_CASE("box and periodic functions do not mix")
{
    GridFunction a(Domain::box({0}, {7}));
    GridFunction b(Domain::periodic({8}));
    CHECK_THROWS(grid::add(a, b));
    CHECK_THROWS(grid::dft(a));
}

TEST_CASE("dft of simple functions")
{
    GridFunction delta(Domain::periodic({8}));
    delta.set({0}, 1);
    const auto d = grid::dft(delta);
    for (const auto& v : d.values())
        CHECK(std::abs(v - cplx(1)) < 1e-14);

    GridFunction ones(Domain::periodic({8}));
    for (auto& v : ones.values())
        v = 1;
    const auto o = grid::dft(ones);
    CHECK(std::abs(o[0] - cplx(8)) < 1e-12);
    for (std::size_t i = 1; i < 8; ++i)
        CHECK(std::abs(o[i]) < 1e-12);
}

TEST_CASE("dft uses the positive sign")
{
    // F f(a) = sum_x f(x) e(x a / M): a point mass at x = 1 gives e(a/M).
    GridFunction f(Domain::periodic({16}));
    f.set({1}, 1);
    const auto F = grid::dft(f);
    for (std::int64_t a = 0; a < 16; ++a)
        CHECK(std::abs(F.at({a}) - grid::e_ratio(a, 16)) < 1e-13);
}

TEST_CASE("parseval and inversion")
{
    Rng rng(2);
    for (const auto& period : std::vector<grid::Point>{{16}, {6, 10}, {3, 4, 5}}) {
        const auto f = random_function(Domain::periodic(period), rng);
        const auto F = grid::dft(f);
        const double n2 = std::pow(grid::lp_norm(f, 2), 2);
        CHECK(std::abs(std::pow(grid::lp_norm(F, 2), 2) - static_cast<double>(f.size()) * n2) <= 1e-10 * f.size() * n2);
        CHECK(grid::max_abs_diff(grid::idft(F), f) <= 1e-10 * grid::lp_norm(f, inf));
    }
}

TEST_CASE("fejer weights")
{
    const auto one = grid::fejer_line(1, grid::LineModel::Integer);
    REQUIRE(one.offsets.size() == 1);
    CHECK(one.offsets[0] == 0);
    CHECK(one.weights[0] == doctest::Approx(1));

    const auto two = grid::fejer_line(2, grid::LineModel::Integer);
    REQUIRE(two.offsets == std::vector<double>{-1, 0, 1});
    CHECK(two.weights[0] == doctest::Approx(0.25));
    CHECK(two.weights[1] == doctest::Approx(0.5));
    CHECK(two.weights[2] == doctest::Approx(0.25));

    CHECK(grid::fejer_density(0, 1) == doctest::Approx(1));
    CHECK_THROWS(grid::fejer_line(0, grid::LineModel::Integer));

    for (double H : {1.0, 3.0, 7.0, 12.5}) {
        for (auto model : {grid::LineModel::Integer, grid::LineModel::Real}) {
            const auto w = grid::fejer_line(H, model, 64);
            double total = 0;
            for (std::size_t i = 0; i < w.weights.size(); ++i) {
                CHECK(w.weights[i] >= 0);
                CHECK(w.offsets[i] == doctest::Approx(-w.offsets[w.offsets.size() - 1 - i]));
                CHECK(w.weights[i] == doctest::Approx(w.weights[w.weights.size() - 1 - i]));
                total += w.weights[i];
            }
            CHECK(std::abs(total - 1) <= 1e-12);
        }
    }
}

TEST_CASE("convolution along an axis")
{
    GridFunction delta(Domain::box({0}, {0}));
    delta.set({0}, 1);
    const auto tri = grid::convolve_axis(delta, grid::fejer_line(2, grid::LineModel::Integer), 0);
    CHECK(tri.at({-1}).real() == doctest::Approx(0.25));
    CHECK(tri.at({0}).real() == doctest::Approx(0.5));
    CHECK(tri.at({1}).real() == doctest::Approx(0.25));

    grid::WeightedLine id{{0}, {1}, true};
    Rng rng(4);
    const auto f = random_function(Domain::box({0, 0}, {4, 5}), rng);
    CHECK(grid::max_abs_diff(grid::convolve_axis(f, id, 1), f) == 0);

    GridFunction ones(Domain::periodic({9}));
    for (auto& v : ones.values())
        v = 1;
    const auto g = grid::convolve_axis(ones, grid::fejer_line(4, grid::LineModel::Integer), 0);
    CHECK(grid::max_abs_diff(g, ones) < 1e-14);

    CHECK_THROWS(grid::convolve_axis(f, id, 2));
}

TEST_CASE("convolutions on different axes commute")
{
    Rng rng(6);
    for (int t = 0; t < 10; ++t) {
        const auto f = random_function(Domain::box({0, 0}, {5, 6}), rng);
        const auto u = grid::fejer_line(static_cast<double>(rng.integer(1, 4)), grid::LineModel::Integer);
        const auto v = grid::fejer_line(static_cast<double>(rng.integer(1, 4)), grid::LineModel::Integer);
        const auto a = grid::convolve_axis(grid::convolve_axis(f, u, 0), v, 1);
        const auto b = grid::convolve_axis(grid::convolve_axis(f, v, 1), u, 0);
        CHECK(grid::max_abs_diff(a, b) <= 1e-10);
    }
}

TEST_CASE("modulation")
{
    Rng rng(7);
    const auto f = random_function(Domain::box({-3, -3}, {3, 3}), rng);
    CHECK(grid::max_abs_diff(grid::modulate(f, {{0, 1}, {0, 1}}), f) == 0);
    const auto g = grid::modulate(f, {{1, 3}, {2, 7}});
    for (std::size_t i = 0; i < f.size(); ++i)
        CHECK(std::abs(g[i]) == doctest::Approx(std::abs(f[i])));
    GridFunction delta(Domain::box({-1, -1}, {1, 1}));
    delta.set({0, 0}, 1);
    CHECK(grid::max_abs_diff(grid::modulate(delta, {{1, 3}, {2, 7}}), delta) < 1e-15);
}

TEST_CASE("json round trip")
{
    Rng rng(8);
    for (const auto& d : {Domain::box({-1, 2}, {3, 4}), Domain::periodic({5, 3})}) {
        const auto f = random_function(d, rng);
        const auto g = GridFunction::from_json(f.to_json());
        CHECK(g.domain() == f.domain());
        CHECK(grid::max_abs_diff(f, g) == 0);
    }
}

TEST_CASE("size guard")
{
    CHECK_THROWS_AS(GridFunction(Domain::periodic({1 << 14, 1 << 13})), std::length_error);
}

}
