// Complex-valued functions on integer boxes and on periodic lattices.
#pragma once

#include <json.hpp>

#include <complex>
#include <cstdint>
#include <functional>
#include <mutex>
#include <vector>

namespace circlelab::grid {

using cplx = std::complex<double>;
using Point = std::vector<std::int64_t>;

inline constexpr std::size_t max_cells = std::size_t{1} << 26;

enum class DomainKind { Box, Periodic };

struct Domain {
    DomainKind kind = DomainKind::Box;
    Point lo, hi;      // Box: inclusive bounds; hi < lo on some axis means empty
    Point period;      // Periodic

    static Domain box(Point lo, Point hi);
    static Domain periodic(Point period);

    std::size_t dims() const;
    Point extent() const;
    std::size_t size() const;
    bool contains(const Point& x) const;
    bool operator==(const Domain& o) const = default;
};

class GridFunction {
public:
    GridFunction() = default;
    explicit GridFunction(Domain d);
    GridFunction(Domain d, std::vector<cplx> values);

    const Domain& domain() const { return dom_; }
    std::size_t dims() const { return dom_.dims(); }
    std::size_t size() const { return vals_.size(); }
    bool is_periodic() const { return dom_.kind == DomainKind::Periodic; }

    std::vector<cplx>& values() { return vals_; }
    const std::vector<cplx>& values() const { return vals_; }
    cplx& operator[](std::size_t i) { return vals_[i]; }
    const cplx& operator[](std::size_t i) const { return vals_[i]; }

    // Box: zero outside the box. Periodic: coordinates reduced mod M.
    cplx at(const Point& x) const;
    void set(const Point& x, cplx v);

    std::size_t index_of(const Point& x) const;   // x must lie in the domain
    Point point_of(std::size_t index) const;
    const std::vector<std::size_t>& strides() const { return strides_; }

    nlohmann::json to_json() const;
    static GridFunction from_json(const nlohmann::json& j);

private:
    void init_strides();
    Domain dom_;
    std::vector<cplx> vals_;
    std::vector<std::size_t> strides_;
};

// Binary operations refuse to mix Box and Periodic functions.
void require_same_kind(const GridFunction& a, const GridFunction& b);

GridFunction add(const GridFunction& a, const GridFunction& b);
GridFunction subtract(const GridFunction& a, const GridFunction& b);
GridFunction scale(const GridFunction& f, cplx c);
GridFunction conj(const GridFunction& f);
GridFunction map_values(const GridFunction& f, const std::function<cplx(cplx)>& g);

double lp_norm(const GridFunction& f, double p);
// sum f * conj(g) with counting measure.
cplx inner(const GridFunction& f, const GridFunction& g);
double max_abs_diff(const GridFunction& a, const GridFunction& b);

// Box to Periodic by reduction mod period (the box must fit), and back.
GridFunction to_periodic(const GridFunction& f, const Point& period);
GridFunction restrict_to_box(const GridFunction& f, const Point& lo, const Point& hi);

// F f(a) = sum_x f(x) e(x . a/M); idft inverts it.
// FFTW planning is not thread safe; every planner call takes this lock.
std::mutex& planner_lock();

GridFunction dft(const GridFunction& f);
GridFunction idft(const GridFunction& f);

// Fourier multiplier along one axis: multiplier(a) is applied at frequency a/M_axis.
void apply_axis_multiplier(GridFunction& f, std::size_t axis, const std::function<cplx(std::int64_t)>& multiplier);
void apply_axis_multiplier(GridFunction& f, std::size_t axis, const std::vector<cplx>& multiplier);

struct WeightedLine {
    std::vector<double> offsets;
    std::vector<double> weights;
    bool integer = true;
};

enum class LineModel { Integer, Real };

// Fejér measure of an interval: integer model on [H0] = {1..H0}, real model
// by midpoint quadrature of the triangular density on [-N, N].
WeightedLine fejer_line(double length, LineModel model, int samples_per_unit = 4096);
double fejer_density(double x, double N);

GridFunction convolve_axis(const GridFunction& f, const WeightedLine& w, std::size_t axis);

struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;
};

GridFunction modulate(const GridFunction& f, const std::vector<Rational>& theta);

// e(t) = exp(2 pi i t)
cplx e(double t);
// e(num/den) with exact reduction of num mod den.
cplx e_ratio(std::int64_t num, std::int64_t den);
cplx e_ratio128(__int128 num, __int128 den);

}  // namespace circlelab::grid
