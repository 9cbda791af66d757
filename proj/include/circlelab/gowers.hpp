// Multiplicative derivatives, localized Gowers box and uniformity norms along
// a coordinate direction, box inner products and the U^2 inverse bound.
#pragma once

#include "circlelab/grid.hpp"

#include <vector>

namespace circlelab::gowers {

using grid::cplx;
using grid::GridFunction;
using grid::Point;

// Integer interval {lo, ..., hi}.
struct Interval {
    std::int64_t lo = 1;
    std::int64_t hi = 1;
    std::int64_t size() const { return hi - lo + 1; }
};

struct BoxNormSpec {
    int s = 1;
    std::size_t axis = 0;               // translates live in Z e_axis
    std::vector<Interval> H;            // H_1..H_s
    Point I_lo, I_hi;                   // ambient box I

    std::int64_t I_size() const;
    void validate() const;
};

// Delta_h f(x) = f(x) conj f(x + h), on the domain of f.
GridFunction mult_derivative(const GridFunction& f, const Point& h);
// Delta_{h_1} ... Delta_{h_s} f.
GridFunction mult_derivative(const GridFunction& f, const std::vector<Point>& hs);

// The quantity under the 2^s-th root, with Fejér weights on each H_i.
// Throws if it comes out negative beyond -1e-10.
double box_norm_power(const GridFunction& f, const BoxNormSpec& spec);
double box_norm(const GridFunction& f, const BoxNormSpec& spec);

BoxNormSpec uniformity_spec(int s, Interval J, const Point& I_lo, const Point& I_hi, std::size_t axis);
double gowers_norm(const GridFunction& f, int s, Interval J, const Point& I_lo, const Point& I_hi,
                   std::size_t axis = 0);

// fs[omega] with omega read as a bit mask (bit i-1 is omega_i).
cplx box_inner_product(const std::vector<GridFunction>& fs, const BoxNormSpec& spec);

struct U2Check {
    double lhs = 0;                     // ||f||^4 in U^2_H(I)
    double rhs = 0;                     // |H|^-2 max |F f|^2 on the frequency grid
    std::size_t frequency_grid = 0;
    bool ok = false;
};

// f on a one-dimensional box; grid_factor times |I| frequencies, at least 8.
U2Check u2_inverse_check(const GridFunction& f, Interval H, Interval I, int grid_factor = 64);

}  // namespace circlelab::gowers
