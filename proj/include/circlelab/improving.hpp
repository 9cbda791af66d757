// Vinogradov counts, the restricted weak-type inequality for lifted
// averages and Christ-style refinements with exact certificates.
#pragma once

#include "circlelab/grid.hpp"
#include "circlelab/poly.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>
#include <vector>

namespace circlelab::improving {

using poly::BigInt;
using poly::PolynomialMap;
using Rational = boost::multiprecision::cpp_rational;

// J_{s,d}(N), or the inhomogeneous count with right-hand side xi.
BigInt vinogradov_count(int s, int d, std::int64_t N, const std::optional<std::vector<std::int64_t>>& xi = {});

struct VmvtFit {
    std::vector<std::int64_t> N;
    std::vector<double> ratio_eps;       // J / (N^eps (N^s + N^{2s - d(d+1)/2}))
    std::vector<double> ratio_free;      // same without N^eps
    double C_eps = 0;
    std::optional<double> C_free;        // only for s > d(d+1)/2
    double tail_slope = 0;               // log-log slope of the last ratios
    bool ok = false;                     // tail_slope below 1/2: no power growth
};

VmvtFit vmvt_bound_check(int s, int d, const std::vector<std::int64_t>& N_list, double epsilon);

// A finite subset of Z^n stored as a 0/1 mask over a box.
class IndicatorSet {
public:
    IndicatorSet() = default;
    explicit IndicatorSet(grid::Domain box);
    static IndicatorSet from_function(const grid::GridFunction& f);   // values must be exactly 0 or 1

    const grid::Domain& box() const { return box_; }
    std::size_t dims() const { return box_.dims(); }
    std::size_t cardinality() const { return count_; }
    bool contains(const grid::Point& x) const;
    void insert(const grid::Point& x);
    void erase(const grid::Point& x);
    std::vector<grid::Point> points() const;
    grid::GridFunction to_function() const;
    bool operator==(const IndicatorSet& o) const { return box_ == o.box_ && bits_ == o.bits_; }

private:
    std::size_t index(const grid::Point& x) const;
    grid::Domain box_;
    std::vector<std::uint8_t> bits_;
    std::size_t count_ = 0;
};

// sum_{u in [N]} prod_slot 1_{sets[slot]}(x + offsets[u][slot]).
std::int64_t orbit_count(const std::vector<const IndicatorSet*>& sets,
                         const std::vector<std::vector<grid::Point>>& offsets, const grid::Point& x);

// offsets[u-1][i] = -P_i(u) e_i, u in [N].
std::vector<std::vector<grid::Point>> shift_offsets(const PolynomialMap& pm, std::int64_t N);
// offsets[u-1][i] = -Gamma_i(u).
std::vector<std::vector<grid::Point>> lifted_offsets(const PolynomialMap& pm, std::int64_t N);
// Offsets of the i-th adjoint (0-based i): slot i' != i gets Gamma_i - Gamma_i', slot i gets Gamma_i.
std::vector<std::vector<grid::Point>> lifted_adjoint_offsets(const PolynomialMap& pm, std::int64_t N, std::size_t i);

struct CornerForm {
    BigInt count;     // sum_{x in E_0} #{n in [N] : x - P_i(n) e_i in E_i for all i}
    Rational K;       // count / N
    double value() const { return K.convert_to<double>(); }
};

// <1_{E_0}, A_N(1_{E_1}, ..., 1_{E_k})> on Z^k.
CornerForm corner_form(const PolynomialMap& pm, std::int64_t N, const std::vector<IndicatorSet>& E);
// Same for the lifted average on Z^D.
CornerForm lifted_corner_form(const PolynomialMap& pm, std::int64_t N, const std::vector<IndicatorSet>& E);

struct RwtExponents {
    std::vector<int> s;       // s_1..s_k
    std::size_t j = 0;        // 0-based
    std::size_t jp = 1;       // j', ignored when k = 1
    bool integer_relaxation = false;

    // Exponents e_0..e_k of |E_0|, ..., |E_k| and the power of N.
    std::vector<int> set_exponents(std::size_t k) const;
    int total() const;        // S
};

// s_i = D*, j = 0, j' = 1.
RwtExponents default_exponents(const PolynomialMap& pm);

struct RwtResult {
    CornerForm K;
    std::vector<std::size_t> sizes;     // |E_0|, ..., |E_k|
    int N_exponent = 0;                 // rhs carries N^{N_exponent}
    Rational ratio;                     // K^{2S} / rhs, 0 when some set is empty
    double ratio_value() const { return ratio.convert_to<double>(); }
};

// Sets live on Z^D and the operator is the lifted one.
RwtResult rwt_check(const PolynomialMap& pm, std::int64_t N, const std::vector<IndicatorSet>& E,
                    const RwtExponents& ex);

struct Certificate {
    int r = 0;
    std::size_t i = 0;      // 0 for no-loss-1, i >= 1 for no-loss-2
    int c_log2 = 0;         // c_{r,i} = 2^{-c_log2}
    BigInt lhs_count;       // N times the left-hand side
    BigInt K_count;         // N times K
    bool holds = false;
};

struct Refinement {
    CornerForm K;
    std::vector<std::vector<IndicatorSet>> levels;   // levels[r][i] = E_i^r
    std::vector<Certificate> certificates;
    bool all_hold() const;
    bool all_nonempty() const;
};

// Refinements of E_0..E_k on Z^D for the lifted average, r = 1..levels.
Refinement refine(const PolynomialMap& pm, std::int64_t N, const std::vector<IndicatorSet>& E, int levels);

struct SweepResult {
    std::size_t families = 0;
    Rational max_ratio;
    std::size_t argmax_seed = 0;
    std::size_t certificates = 0;
    bool certificates_hold = true;
    std::vector<double> ratios;
};

// Seeded random set families on boxes adapted to the lifted scales, N cycling
// through 2..N_max.
SweepResult rwt_sweep(const PolynomialMap& pm, std::int64_t N_max, std::size_t families, std::uint64_t seed,
                      int refine_levels = 2);

}  // namespace circlelab::improving
