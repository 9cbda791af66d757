// Weyl sums, oscillatory integrals, complete sums and the circle-method
// model operator.
#pragma once

#include "circlelab/arcs.hpp"
#include "circlelab/grid.hpp"
#include "circlelab/poly.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace circlelab::expsums {

using grid::cplx;
using poly::PolynomialMap;
using Fraction = arcs::FareyFraction;

// frac(x * P) computed without losing the integer part of P.
double frac_product(double x, __int128 P);

// Phase table for a polynomial map over n in (lo, hi]: values P_i(n).
struct Orbit {
    std::int64_t lo = 0, hi = 0;          // n ranges over (lo, hi]
    std::vector<std::vector<__int128>> values;   // [i][n - lo - 1]
    std::size_t count() const { return static_cast<std::size_t>(hi - lo); }
};
Orbit orbit(const PolynomialMap& pm, std::int64_t lo, std::int64_t hi);

// m_N(xi), average over n in (N/2, N].
cplx weyl_sum(const PolynomialMap& pm, double N, const std::vector<double>& xi);
cplx weyl_sum(const Orbit& orb, const std::vector<double>& xi);
// Same with rational frequencies, phases reduced exactly.
cplx weyl_sum_exact(const PolynomialMap& pm, double N, const std::vector<Fraction>& theta);

struct QuadratureOptions {
    double abs_tol = 1e-10;
    int max_depth = 40;
};

// 2 * integral over [1/2, 1] of e(xi . P(N t)).
cplx osc_integral(const PolynomialMap& pm, double N, const std::vector<double>& xi,
                  const QuadratureOptions& opt = {});

// G(a/q) with q the common denominator of theta.
cplx gauss_sum(const PolynomialMap& pm, const std::vector<Fraction>& theta);

// |m_N(xi) - G(theta) m_N^cont(xi - theta)|; throws if |xi_i - theta_i| > 1/M_i.
double approx_error(const PolynomialMap& pm, double N, const std::vector<double>& xi,
                    const std::vector<Fraction>& theta, const std::vector<double>& M);

// C 2^{kl} (max_i M_i^{-1} N^{d_i-1} + N^{-1}) without the constant.
double approx_shape(const PolynomialMap& pm, double N, int l, const std::vector<double>& M);

struct ScanResult {
    double sup = 0;              // sampled lower bound for the minor-arc supremum
    double argmax = 0;
    std::int64_t resolution = 0; // frequencies b/R sampled, b + jitter
    double jitter = 0;
    std::uint64_t samples = 0;
    std::uint64_t minor_samples = 0;
    std::int64_t q_max = 0;      // arc centers q <= q_max
    double arc_half_width = 0;
};

// Samples xi = (b + u)/R on [0, 1/2] (the other half follows by conjugate
// symmetry) outside the arcs of radius N^{-d} delta^{-C} around a/q,
// q <= delta^{-C}. R is rounded up to a power of two and must be at least
// 4 N^d.
ScanResult minor_arc_scan(const poly::IntPolynomial& P, std::int64_t N, double delta, double C,
                          std::int64_t grid_resolution, std::uint64_t seed);

// Least q <= min(q_max, C eps^{-C}) with ||q xi_i|| <= C eps^{-C} N^{-d_i}.
std::optional<std::int64_t> weyl_rationality_detect(const PolynomialMap& pm, double N,
                                                    const std::vector<double>& xi, double epsilon,
                                                    double C, std::int64_t q_max);

// K_m as the inverse DFT of multiplier samples on the periodic frequency lattice.
grid::GridFunction kernel(const grid::GridFunction& multiplier);

// A multiplier vanishing outside the block prod [-r_i, r_i].
struct BlockMultiplier {
    std::function<cplx(const std::vector<double>&)> value;
    std::vector<double> radius;
};

struct ModelTerm {
    std::vector<Fraction> theta;
    cplx weight;                 // S(theta)
};

// All theta in Sigma_{l_1} x ... x Sigma_{l_k}.
std::vector<std::vector<Fraction>> shell_product(const std::vector<int>& levels);

// sum_theta S(theta) sum_y K_{tau_theta m}(y) prod_i f_i(x - y_i e_i) on a
// periodic model; one-dimensional input runs through the FFT.
grid::GridFunction model_operator(const std::vector<ModelTerm>& terms, const BlockMultiplier& m,
                                  const std::vector<grid::GridFunction>& fs);

}  // namespace circlelab::expsums
