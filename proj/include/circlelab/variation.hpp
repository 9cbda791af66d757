// r-variation seminorms and norms, the Rademacher-Menshov inequality,
// lacunary scale sets and a norm-based chaining construction.
#pragma once

#include "circlelab/grid.hpp"

#include <complex>
#include <limits>
#include <vector>

namespace circlelab::variation {

using grid::cplx;

inline constexpr double infinity = std::numeric_limits<double>::infinity();

// Values indexed by a strictly increasing list of reals.
struct IndexedSequence {
    std::vector<double> indices;
    std::vector<cplx> values;

    static IndexedSequence from_values(std::vector<cplx> values);
    static IndexedSequence from_values(const std::vector<double>& values);
    std::size_t size() const { return values.size(); }
    void validate() const;
};

// V^r(a_t : t in I). Exact for every r >= 1 and r = infinity.
double variation_seminorm(const std::vector<cplx>& a, double r);
double variation_seminorm(const IndexedSequence& seq, double r);
// sup |a_t| + V^r.
double variation_norm(const std::vector<cplx>& a, double r);
double variation_norm(const IndexedSequence& seq, double r);

struct VariationBounds {
    double lower = 0;   // local-search lower bound
    double value = 0;   // exact
    double upper = 0;   // V^1, valid for every r >= 1
};
VariationBounds variation_bounds(const std::vector<cplx>& a, double r);

struct RmCheck {
    double lhs = 0;
    double rhs = 0;
    bool ok = false;
};

// a holds a_0, ..., a_{2^m}; requires n0 < 2^m.
RmCheck rm_check(const std::vector<cplx>& a, std::int64_t n0, int m);

// start * lambda^n rounded up, bumped where needed so consecutive ratios
// stay at least lambda.
std::vector<std::int64_t> lacunary(double lambda, double start, std::size_t count);

// Pointwise V^r-norm of a family of functions on a common domain.
std::vector<double> pointwise_variation_norm(const std::vector<grid::GridFunction>& fs, double r);

struct ChainLevel {
    int m = 1;
    std::vector<std::size_t> members;   // J_m, positions in the input family
    std::vector<std::size_t> parent;    // pi_m on J_{m+1}, aligned with the next level's members
};

struct Chain {
    double p = 1;
    double vnorm = 0;                   // || V^p(F_n) ||_p
    double card_constant = 2;           // #J_m <= card_constant 2^{pm}
    double step_constant = 1;           // ||F_n - F_pi(n)|| <= step_constant 2^-m vnorm
    std::vector<ChainLevel> levels;     // m = 1, 2, ... until J_m stabilizes
    std::vector<std::vector<std::size_t>> paths;   // per n: n_1, n_2, ..., n_M
    double telescoping_residual = 0;    // max_n || F_n - telescoped sum ||_p
};

// Greedy farthest-point nets; properties (i)-(iii) are verified before the
// chain is returned and a std::logic_error is thrown on failure.
Chain entropy_chain(const std::vector<grid::GridFunction>& fs, double p);
// Returns the telescoping residual.
double verify_chain(const Chain& c, const std::vector<grid::GridFunction>& fs);

}  // namespace circlelab::variation
