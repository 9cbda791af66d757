// Lifting polynomial averages on Z^k to averages along moment curves on Z^D.
#pragma once

#include "circlelab/grid.hpp"
#include "circlelab/poly.hpp"

#include <vector>

namespace circlelab::lift {

using poly::BigInt;
using poly::PolynomialMap;

// Gamma_i(u): block i holds u, u^2, ..., u^{d_i}, all other blocks zero.
// i is 0-based.
std::vector<BigInt> lift_curve(const PolynomialMap& pm, std::size_t i, const BigInt& u);

// First coordinate of block i in Z^D.
std::size_t block_offset(const PolynomialMap& pm, std::size_t i);

// Q_i(x_(i)) = sum_j a^i_j x_{(i),j}.
std::int64_t block_form(const PolynomialMap& pm, std::size_t i, const grid::Point& x);

// f(x) = g(Q_1(x_(1)) + r_1, ..., Q_k(x_(k)) + r_k) prod_i 1_{E_i}(x'_(i)),
// E_i = [-N, N] x ... x [-N^{d_i-1}, N^{d_i-1}]. g must live on a box; the
// result is returned on the smallest box containing its support.
grid::GridFunction lift_function(const grid::GridFunction& g, const PolynomialMap& pm,
                                 const std::vector<std::int64_t>& r, std::int64_t N);

// Number of x with f(x) != 0, computed from g alone.
std::size_t lift_support_count(const grid::GridFunction& g, const PolynomialMap& pm,
                               const std::vector<std::int64_t>& r, std::int64_t N);

}  // namespace circlelab::lift
