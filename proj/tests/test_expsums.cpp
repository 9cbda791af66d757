#include "circlelab/expsums.hpp"
#include "circlelab/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace circlelab;
using expsums::Fraction;
using grid::cplx;
using grid::Domain;
using grid::GridFunction;
using poly::PolynomialMap;

namespace {

// direct double-precision sum, independent of the phase table code
cplx naive_weyl(long long lo, long long hi, double xi, int power)
{
    cplx acc{};
    for (long long n = lo; n <= hi; ++n) {
        long double ph = xi * std::pow(static_cast<long double>(n), power);
        ph -= std::floor(ph);
        acc += std::polar(1.0, 2 * std::numbers::pi * static_cast<double>(ph));
    }
    return acc / static_cast<double>(hi - lo + 1);
}

GridFunction random_periodic(const grid::Point& period, Rng& rng)
{
    GridFunction f(Domain::periodic(period));
    for (auto& v : f.values())
        v = rng.complex_normal();
    return f;
}

}  // namespace

TEST_SUITE("expsums") {

TEST_CASE("Weyl sums at simple frequencies")
{
    const auto lin = PolynomialMap::parse("n");
    const auto sq = PolynomialMap::parse("n^2");
    CHECK(std::abs(expsums::weyl_sum(sq, 100, {0.0}) - cplx(1)) < 1e-15);
    CHECK(std::abs(expsums::weyl_sum(lin, 4, {0.5})) < 1e-15);
    CHECK(std::abs(expsums::weyl_sum(sq, 8, {0.5})) < 1e-15);
    CHECK(std::abs(expsums::weyl_sum_exact(sq, 8, {Fraction(1, 2)})) < 1e-15);
    CHECK_THROWS(expsums::weyl_sum(lin, 0.5, {0.1}));
}

TEST_CASE("Weyl sums match a direct loop")
{
    Rng rng(3);
    for (int t = 0; t < 50; ++t) {
        const int power = static_cast<int>(rng.integer(1, 3));
        const auto pm = PolynomialMap::parse(power == 1 ? "n" : power == 2 ? "n^2" : "n^3");
        const long long N = rng.integer(2, 400);
        const double xi = rng.uniform();
        const cplx ours = expsums::weyl_sum(pm, static_cast<double>(N), {xi});
        CHECK(std::abs(ours - naive_weyl(N / 2 + 1, N, xi, power)) < 1e-9);
    }
}

TEST_CASE("Weyl sums are bounded and periodic")
{
    Rng rng(4);
    const auto pm = PolynomialMap::parse("n,n^2");
    for (int t = 0; t < 200; ++t) {
        const double N = rng.uniform(1, 500);
        const double a = rng.uniform(), b = rng.uniform();
        const cplx m = expsums::weyl_sum(pm, N, {a, b});
        CHECK(std::abs(m) <= 1 + 1e-12);
        const cplx shifted = expsums::weyl_sum(pm, N, {a + 3, b - 2});
        CHECK(std::abs(m - shifted) < 1e-10);
    }
}

TEST_CASE("oscillatory integral")
{
    const auto lin = PolynomialMap::parse("n");
    CHECK(std::abs(expsums::osc_integral(lin, 50, {0.0}) - cplx(1)) < 1e-12);
    const double N = 37;
    const cplx closed = cplx(0, -2.0 / std::numbers::pi);
    CHECK(std::abs(expsums::osc_integral(lin, N, {1 / N}) - closed) < 1e-9);

    Rng rng(5);
    const auto pm = PolynomialMap::parse("n^2,n^3");
    for (int t = 0; t < 30; ++t) {
        const double M = rng.uniform(1, 20);
        const std::vector<double> xi{rng.uniform(-0.05, 0.05), rng.uniform(-0.002, 0.002)};
        const cplx v = expsums::osc_integral(pm, M, xi);
        const cplx w = expsums::osc_integral(pm, M, {-xi[0], -xi[1]});
        CHECK(std::abs(v) <= 1 + 1e-9);
        CHECK(std::abs(v - std::conj(w)) < 1e-9);
    }
}

TEST_CASE("oscillatory integral of a linear phase has a closed form")
{
    Rng rng(6);
    const auto lin = PolynomialMap::parse("n");
    for (int t = 0; t < 30; ++t) {
        const double N = rng.uniform(1, 100);
        const double xi = rng.uniform(-0.5, 0.5);
        const double c = 2 * std::numbers::pi * xi * N;
        if (std::abs(c) < 1e-6)
            continue;
        const cplx closed = 2.0 * (std::polar(1.0, c) - std::polar(1.0, c / 2)) / cplx(0, c);
        CHECK(std::abs(expsums::osc_integral(lin, N, {xi}) - closed) < 1e-9);
    }
}

TEST_CASE("complete sums")
{
    const auto sq = PolynomialMap::parse("n^2");
    CHECK(std::abs(expsums::gauss_sum(sq, {Fraction(0, 1)}) - cplx(1)) < 1e-15);
    CHECK(std::abs(expsums::gauss_sum(sq, {Fraction(1, 2)})) < 1e-15);
    CHECK(std::abs(expsums::gauss_sum(sq, {Fraction(1, 4)}) - cplx(0.5, 0.5)) < 1e-15);

    const auto lin = PolynomialMap::parse("n");
    for (const auto& f : arcs::farey_upto(30)) {
        const cplx g = expsums::gauss_sum(lin, {f});
        CHECK(std::abs(g - cplx(f.q == 1 ? 1.0 : 0.0)) < 1e-12);
    }
    const auto pm = PolynomialMap::parse("n,n^2");
    for (const auto& a : arcs::farey_upto(6))
        for (const auto& b : arcs::farey_upto(6))
            CHECK(std::abs(expsums::gauss_sum(pm, {a, b})) <= 1 + 1e-12);
}

TEST_CASE("approximation error")
{
    const auto sq = PolynomialMap::parse("n^2");
    CHECK(expsums::approx_error(sq, 100, {0.0}, {Fraction(0, 1)}, {10.0}) < 1e-10);
    CHECK(expsums::approx_error(sq, 100, {0.5}, {Fraction(1, 2)}, {10.0}) < 1e-10);
    CHECK_THROWS(expsums::approx_error(sq, 100, {0.3}, {Fraction(0, 1)}, {10.0}));

    const auto lin = PolynomialMap::parse("n");
    double prev = 1;
    for (double N : {64.0, 256.0, 1024.0, 4096.0}) {
        const double err = expsums::approx_error(lin, N, {1 / (4 * N)}, {Fraction(0, 1)}, {4 * N});
        CHECK(err < prev);
        CHECK(err <= 2 / N);
        prev = err;
    }
}

TEST_CASE("rationality detection")
{
    const auto sq = PolynomialMap::parse("n^2");
    CHECK(expsums::weyl_rationality_detect(sq, 1000, {0.5}, 0.5, 2, 10) == 2);
    CHECK(expsums::weyl_rationality_detect(sq, 1000, {0.0}, 0.5, 2, 10) == 1);
    CHECK(expsums::weyl_rationality_detect(sq, 1000, {1.0 / 3 + 1e-9}, 0.5, 2, 10) == 3);
    CHECK_FALSE(expsums::weyl_rationality_detect(sq, 1000, {std::numbers::sqrt2 - 1}, 0.5, 2, 10).has_value());
}

TEST_CASE("minor arc scan")
{
    const auto lin = poly::IntPolynomial::parse("n");
    const auto r = expsums::minor_arc_scan(lin, 256, 0.5, 1, 1024, 7);
    CHECK(r.sup <= 1);
    CHECK(r.sup > 0);
    CHECK(r.minor_samples > 0);
    // linear sums are geometric: |m_N(xi)| <= 2/(|(N/2,N]| ||xi||)
    const double bound = 2.0 / (128 * std::min(r.argmax, 1 - r.argmax));
    CHECK(r.sup <= bound + 1e-9);
    CHECK_THROWS(expsums::minor_arc_scan(lin, 256, 0.5, 1, 512, 7));

    const auto again = expsums::minor_arc_scan(lin, 256, 0.5, 1, 1024, 7);
    CHECK(again.sup == r.sup);
    CHECK(again.argmax == r.argmax);
}

TEST_CASE("kernels")
{
    const std::int64_t M = 64;
    GridFunction ones(Domain::periodic({M}));
    for (auto& v : ones.values())
        v = 1;
    const auto K = expsums::kernel(ones);
    CHECK(std::abs(K[0] - cplx(1)) < 1e-14);
    for (std::size_t i = 1; i < K.size(); ++i)
        CHECK(std::abs(K[i]) < 1e-14);

    GridFunction dirac(Domain::periodic({M}));
    dirac.set({5}, 1);
    const auto D = expsums::kernel(dirac);
    for (const auto& v : D.values())
        CHECK(std::abs(std::abs(v) - 1.0 / M) < 1e-15);
}

TEST_CASE("model operator with a delta kernel")
{
    Rng rng(8);
    const expsums::BlockMultiplier one{[](const std::vector<double>&) { return cplx(1); }, {0.5, 0.5}};
    const std::vector<expsums::ModelTerm> zero{{{Fraction(0, 1), Fraction(0, 1)}, 1}};
    const auto f = random_periodic({8, 8}, rng);
    const auto g = random_periodic({8, 8}, rng);
    const auto out = expsums::model_operator(zero, one, {f, g});
    for (std::size_t i = 0; i < out.size(); ++i)
        CHECK(std::abs(out[i] - f[i] * g[i]) < 1e-12);

    const expsums::BlockMultiplier one1{[](const std::vector<double>&) { return cplx(1); }, {0.5}};
    const auto h = random_periodic({32}, rng);
    const auto out1 = expsums::model_operator({{{Fraction(0, 1)}, 1}}, one1, {h});
    CHECK(grid::max_abs_diff(out1, h) < 1e-12);
}

TEST_CASE("model operator on constants")
{
    const expsums::BlockMultiplier m{[](const std::vector<double>& off) { return cplx(arcs::eta(8 * off[0]), 0); },
                                     {0.0625}};
    std::vector<expsums::ModelTerm> terms;
    const auto sq = PolynomialMap::parse("n^2");
    for (const auto& theta : expsums::shell_product({0}))
        terms.push_back({theta, expsums::gauss_sum(sq, theta)});
    for (const auto& theta : expsums::shell_product({2}))
        terms.push_back({theta, expsums::gauss_sum(sq, theta)});
    GridFunction one(Domain::periodic({48}));
    for (auto& v : one.values())
        v = 1;
    const auto out = expsums::model_operator(terms, m, {one});
    // only the zero frequency of a constant survives, weighted by S(0) m(0)
    for (const auto& v : out.values())
        CHECK(std::abs(v - cplx(1)) < 1e-12);
}

TEST_CASE("model operator is linear")
{
    Rng rng(12);
    const expsums::BlockMultiplier m{
        [](const std::vector<double>& off) { return cplx(arcs::eta(4 * off[0]) * arcs::eta(4 * off[1]), 0.1); },
        {0.125, 0.125}};
    std::vector<expsums::ModelTerm> terms;
    for (const auto& theta : expsums::shell_product({1, 1}))
        terms.push_back({theta, rng.complex_normal()});
    const auto f = random_periodic({8, 8}, rng);
    const auto f2 = random_periodic({8, 8}, rng);
    const auto g = random_periodic({8, 8}, rng);
    const cplx c = rng.complex_normal();
    const auto lhs = expsums::model_operator(terms, m, {grid::add(f, grid::scale(f2, c)), g});
    const auto rhs = grid::add(expsums::model_operator(terms, m, {f, g}),
                               grid::scale(expsums::model_operator(terms, m, {f2, g}), c));
    CHECK(grid::max_abs_diff(lhs, rhs) < 1e-10);
}

TEST_CASE("shell products")
{
    CHECK(expsums::shell_product({0}).size() == 1);
    CHECK(expsums::shell_product({1, 2}).size() == 4);
    CHECK(expsums::shell_product({2, 2}).size() == 16);
}

}
