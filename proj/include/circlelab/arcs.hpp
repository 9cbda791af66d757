// Canonical fractions, dyadic shells, major arcs, the smooth cutoff and
// Ionescu-Wainger type projections on periodic models.
#pragma once

#include "circlelab/grid.hpp"

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace circlelab::arcs {

struct FareyFraction {
    std::int64_t a = 0;
    std::int64_t q = 1;

    FareyFraction() = default;
    // Reduces and moves the representative into [0, q).
    FareyFraction(std::int64_t a, std::int64_t q);

    double value() const { return static_cast<double>(a) / static_cast<double>(q); }
    bool operator==(const FareyFraction& o) const { return a == o.a && q == o.q; }
    std::strong_ordering operator<=>(const FareyFraction& o) const;
};

std::vector<FareyFraction> farey_upto(std::int64_t N);
// Sigma_l, and the union Sigma_{<= l} = farey_upto(2^l).
std::vector<FareyFraction> shell(int l);
std::vector<FareyFraction> shells_upto(int l);

struct ArcFamily {
    std::vector<FareyFraction> centers;
    int width_log2 = 0;          // half width 2^m

    double half_width() const;
    // Exact comparison of rational endpoints on the torus.
    bool pairwise_disjoint() const;
};

double torus_distance(double a, double b);
bool in_major_arcs(double xi, const ArcFamily& arcs);
bool in_major_arcs(double xi, const std::vector<FareyFraction>& centers, double half_width);

// Even bump: 1 on [-1/4,1/4], 0 off (-1/2,1/2), exp(-1/t) transition.
double eta(double x);

std::int64_t lcm_upto(std::int64_t n);
std::int64_t lcm_of_denominators(const std::vector<FareyFraction>& centers);

// sum over centers of eta(2^-m (xi - theta)) at the frequencies a/M,
// nonzero entries only, sorted by index.
struct SparseMultiplier {
    std::int64_t period = 0;
    std::vector<std::pair<std::int64_t, double>> entries;

    std::vector<grid::cplx> dense() const;
    double max_value() const;
};

SparseMultiplier iw_multiplier(std::int64_t M, const std::vector<FareyFraction>& centers, int m);

grid::GridFunction iw_project(const grid::GridFunction& f, std::size_t axis,
                              const std::vector<FareyFraction>& centers, int m);

// Model 2^a * lcm(denominators) with 2^a chosen so each arc spans at least
// four lattice frequencies.
std::int64_t iw_model_size(const std::vector<FareyFraction>& centers, int m);

struct ProbeResult {
    std::int64_t model = 0;
    std::size_t ncenters = 0;
    double estimate = 0;
    std::vector<double> running_max;
};

ProbeResult iw_opnorm_probe(const std::vector<FareyFraction>& centers, int m, double p, int trials,
                            std::uint64_t seed, std::optional<std::int64_t> model = std::nullopt);

std::int64_t lifted_composite(std::int64_t q, std::int64_t N);
std::int64_t divisor_count_upto(std::int64_t q, std::int64_t N);

// floor(log2 N) for N >= 1.
int log2_floor(double N);

// eta_N^{s} for degree d; s = 0 is the nonoscillatory bump.
double shell_bump(double xi, int s, double N, int d);
std::function<double(double)> shell_bump_fn(int s, double N, int d);

}  // namespace circlelab::arcs
