#include "circlelab/pet.hpp"
#include "circlelab/rng.hpp"

#include <doctest.h>

using namespace circlelab;
using poly::PolynomialMap;
using poly::PolyVectorFamily;

namespace {

PolyVectorFamily family(const char* text)
{
    return PolyVectorFamily::from_map(PolynomialMap::parse(text));
}

}  // namespace

TEST_SUITE("pet") {

TEST_CASE("a single linear vector collapses")
{
    const auto out = poly::vdc_step(family("n"), 0, std::nullopt);
    CHECK(out.vectors.empty());
    CHECK(out.shift_vars == 1);
}

TEST_CASE("differencing a square leaves one linear vector")
{
    const auto out = poly::vdc_step(family("n^2"), 0, std::nullopt);
    REQUIRE(out.vectors.size() == 1);
    CHECK(out.strings()[0][0] == "2*y*h1 + h1^2");
    CHECK(out.vectors[0].conjugated);
    CHECK(out.is_linear());
}

TEST_CASE("two-vector family")
{
    // l0 = (n, 0): the own shift is constant and drops, leaving two vectors.
    const auto out = poly::vdc_step(family("n,n^2"), 0, std::nullopt);
    REQUIRE(out.vectors.size() == 2);
    CHECK(out.strings()[0] == std::vector<std::string>{"-y", "y^2"});
    CHECK(out.strings()[1] == std::vector<std::string>{"-y", "y^2 + 2*y*h1 + h1^2"});
    CHECK_FALSE(out.vectors[0].conjugated);
    CHECK(out.vectors[1].conjugated);
}

TEST_CASE("family size never exceeds 2L - 1")
{
    Rng rng(3);
    for (const char* m : {"n,n^2", "n,n^3", "n^2,n^3", "n,n^2,n^3"}) {
        auto fam = family(m);
        for (int step = 0; step < 4 && !fam.vectors.empty(); ++step) {
            const auto l0 = static_cast<std::size_t>(rng.integer(0, static_cast<std::int64_t>(fam.vectors.size()) - 1));
            const auto next = poly::vdc_step(fam, l0, std::nullopt);
            CHECK(next.vectors.size() <= 2 * fam.vectors.size() - 1);
            fam = next;
        }
    }
}

TEST_CASE("index checks")
{
    CHECK_THROWS_AS(poly::vdc_step(family("n"), 1, std::nullopt), std::out_of_range);
    PolyVectorFamily empty;
    CHECK_THROWS_AS(poly::vdc_step(empty, 0, std::nullopt), std::invalid_argument);
}

TEST_CASE("traces of small maps")
{
    CHECK(poly::pet_trace(family("n")).steps() == 0);
    const auto sq = poly::pet_trace(family("n^2"));
    CHECK(sq.steps() == 1);
    CHECK(sq.states.back().is_linear());
    const auto pair = poly::pet_trace(family("n,n^2"));
    CHECK(pair.states.back().is_linear());
    CHECK(pair.shift_vars() <= 16);
    CHECK(pair.steps() == 2);
    CHECK(poly::pet_trace(family("n^4")).steps() == 3);
}

TEST_CASE("traces are reproducible")
{
    const auto a = poly::pet_trace(family("n,n^3"));
    const auto b = poly::pet_trace(family("n,n^3"));
    CHECK(poly::trace_to_json(a) == poly::trace_to_json(b));
    CHECK(a.states.back().is_linear());
}

TEST_CASE("caps stop runaway traces")
{
    CHECK_THROWS_AS(poly::pet_trace(family("n,n^2"), 1), poly::PetCapExceeded);
    try {
        poly::pet_trace(family("n^2,n^3"), std::nullopt, 64);
        FAIL("expected the family cap to trigger");
    } catch (const poly::PetCapExceeded& e) {
        CHECK(e.family_size > 64);
    }
}

TEST_CASE("selection picks the lowest degree, first on ties")
{
    CHECK(poly::select_l0(family("n,n^2")) == 0);
    CHECK(poly::select_l0(family("n^2,n^3")) == 0);
}

TEST_CASE("json layout")
{
    const auto j = poly::trace_to_json(poly::pet_trace(family("n^2")));
    REQUIRE(j["steps"].size() == 1);
    CHECK(j["steps"][0]["l0"] == 0);
    CHECK(j["steps"][0]["shift_var"] == "h1");
    CHECK(j["steps"][0]["family"][0][0] == "2*y*h1 + h1^2");
}

}
