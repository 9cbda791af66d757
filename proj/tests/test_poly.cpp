#include "circlelab/poly.hpp"
#include "circlelab/rng.hpp"

#include <doctest.h>

using namespace circlelab;
using poly::BigInt;
using poly::IntPolynomial;
using poly::PolynomialMap;

TEST_SUITE("poly") {

TEST_CASE("evaluation of small polynomials")
{
    CHECK(poly::eval(IntPolynomial::parse("n^2"), 3) == 9);
    CHECK(poly::eval(IntPolynomial::parse("0"), 7) == 0);
    CHECK(poly::eval(IntPolynomial::parse("2n^3 - n"), 5) == 245);
    CHECK(poly::eval(IntPolynomial{0, -1, 0, 2}, 5) == 245);
}

TEST_CASE("evaluation agrees with a power-sum loop")
{
    Rng rng(11);
    for (int t = 0; t < 1000; ++t) {
        std::vector<BigInt> c;
        const int deg = static_cast<int>(rng.integer(0, 6));
        for (int i = 0; i <= deg; ++i)
            c.push_back(rng.integer(-1000, 1000));
        const IntPolynomial p(c);
        const BigInt n = rng.integer(-100000, 100000);
        BigInt naive = 0;
        for (int i = 0; i <= deg; ++i) {
            BigInt power = 1;
            for (int e = 0; e < i; ++e)
                power *= n;
            naive += c[static_cast<std::size_t>(i)] * power;
        }
        REQUIRE(poly::eval(p, n) == naive);
    }
}

TEST_CASE("exact arithmetic does not overflow")
{
    const auto p = IntPolynomial::parse("n^4");
    const BigInt n("1000000000000");
    CHECK(poly::eval(p, n) == BigInt("1000000000000000000000000000000000000000000000000"));
    CHECK_THROWS_AS(poly::eval_i128(poly::small_coeffs(IntPolynomial::parse("n^4")), 2000000000000LL),
                    std::overflow_error);
}

TEST_CASE("parsing and printing round trip")
{
    for (const char* text : {"n", "n^2", "2n^3 - n", "n^2 + n", "-3n^4 + 7"}) {
        const auto p = IntPolynomial::parse(text);
        CHECK(IntPolynomial::parse(p.str()) == p);
    }
    CHECK_THROWS_AS(IntPolynomial::parse("n^"), std::invalid_argument);
    CHECK_THROWS_AS(IntPolynomial::parse("n + m"), std::invalid_argument);
    CHECK(IntPolynomial::parse("t^2 + 1") == IntPolynomial::parse("n^2 + 1"));
}

TEST_CASE("admissibility")
{
    CHECK(poly::is_admissible(IntPolynomial::parse("n^2"), 2, 1, 10, 1));
    CHECK_FALSE(poly::is_admissible(IntPolynomial::parse("3n^2 + 100n"), 2, 1, 10, 1));
    CHECK_FALSE(poly::is_admissible(IntPolynomial::parse("n"), 2, 0.5, 100, 10));
    CHECK_THROWS_AS(poly::is_admissible(IntPolynomial::parse("n"), 0, 1, 10, 1), std::invalid_argument);
}

TEST_CASE("polynomial maps")
{
    const auto pm = PolynomialMap::parse("n,n^2");
    CHECK(pm.k() == 2);
    CHECK(pm.total_degree() == 3);
    CHECK(pm.lifted_degree() == 4);
    CHECK(pm.has_zero_constant_terms());
    CHECK_THROWS_AS(PolynomialMap::parse("n^2,n"), std::invalid_argument);
}

TEST_CASE("multivariate substitution")
{
    // (y + h1)^2 with h1 = 3 is y^2 + 6y + 9
    const auto y = poly::MultiPoly::variable(0);
    const auto h = poly::MultiPoly::variable(1);
    const auto sq = (y + h) * (y + h);
    const auto sub = sq.substitute({BigInt(3)});
    CHECK(sub.to_univariate() == IntPolynomial{9, 6, 1});
    CHECK(sq.degree_y() == 2);
    CHECK(sq.shift_y(h).coefficient_of_y(1).str() == "4*h1");
}

}
