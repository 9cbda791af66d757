#include "circlelab/gowers.hpp"

#include <cmath>
#include <stdexcept>

namespace circlelab::gowers {

std::int64_t BoxNormSpec::I_size() const
{
    std::int64_t n = 1;
    for (std::size_t i = 0; i < I_lo.size(); ++i)
        n *= I_hi[i] - I_lo[i] + 1;
    return n;
}

void BoxNormSpec::validate() const
{
    if (s < 1)
        throw std::invalid_argument("box norm: s must be positive");
    if (H.size() != static_cast<std::size_t>(s))
        throw std::invalid_argument("box norm: need exactly s translate sets");
    for (const auto& h : H)
        if (h.size() < 1)
            throw std::invalid_argument("box norm: translate sets must be nonempty");
    if (I_lo.empty() || I_lo.size() != I_hi.size())
        throw std::invalid_argument("box norm: malformed ambient box");
    for (std::size_t i = 0; i < I_lo.size(); ++i)
        if (I_hi[i] < I_lo[i])
            throw std::invalid_argument("box norm: ambient box is empty");
    if (axis >= I_lo.size())
        throw std::invalid_argument("box norm: direction axis out of range");
}

namespace {

void require_box(const GridFunction& f)
{
    if (f.is_periodic())
        throw std::invalid_argument("gowers: functions must live on a box");
}

// g(x) conj g(x + h e_axis) in place of out, same box.
void derivative_along(const GridFunction& g, std::size_t axis, std::int64_t h, GridFunction& out)
{
    const auto& dom = g.domain();
    const std::int64_t len = dom.hi[axis] - dom.lo[axis] + 1;
    const std::size_t stride = g.strides()[axis];
    const std::size_t n = g.size();
    out = GridFunction(dom);
    if (h >= len || -h >= len)
        return;
    for (std::size_t idx = 0; idx < n; ++idx) {
        const auto c = static_cast<std::int64_t>((idx / stride) % static_cast<std::size_t>(len));
        const std::int64_t t = c + h;
        if (t < 0 || t >= len)
            continue;
        const auto j = static_cast<std::size_t>(static_cast<std::int64_t>(idx) + h * static_cast<std::int64_t>(stride));
        out[idx] = g[idx] * std::conj(g[j]);
    }
}

void check_support(const GridFunction& f, const Point& lo, const Point& hi)
{
    if (lo.size() != f.dims())
        throw std::invalid_argument("gowers: ambient box dimension mismatch");
    for (std::size_t idx = 0; idx < f.size(); ++idx) {
        if (f[idx] == cplx{})
            continue;
        const Point x = f.point_of(idx);
        for (std::size_t i = 0; i < x.size(); ++i)
            if (x[i] < lo[i] || x[i] > hi[i])
                throw std::invalid_argument("gowers: function not supported on the ambient box");
    }
}

cplx sum_values(const GridFunction& g)
{
    cplx s{};
    for (const auto& v : g.values())
        s += v;
    return s;
}

cplx nested(const GridFunction& g, const BoxNormSpec& spec, int level)
{
    if (level == 0)
        return sum_values(g);
    const auto w = grid::fejer_line(static_cast<double>(spec.H[static_cast<std::size_t>(level - 1)].size()),
                                    grid::LineModel::Integer);
    cplx acc{};
    GridFunction d;
    for (std::size_t t = 0; t < w.offsets.size(); ++t) {
        const auto h = static_cast<std::int64_t>(std::llround(w.offsets[t]));
        derivative_along(g, spec.axis, h, d);
        acc += w.weights[t] * nested(d, spec, level - 1);
    }
    return acc;
}

// Support bounding box of f, as extents.
std::vector<std::int64_t> support_extent(const GridFunction& f)
{
    std::vector<std::int64_t> lo(f.dims(), INT64_MAX), hi(f.dims(), INT64_MIN);
    bool any = false;
    for (std::size_t idx = 0; idx < f.size(); ++idx) {
        if (f[idx] == cplx{})
            continue;
        any = true;
        const Point x = f.point_of(idx);
        for (std::size_t i = 0; i < x.size(); ++i) {
            lo[i] = std::min(lo[i], x[i]);
            hi[i] = std::max(hi[i], x[i]);
        }
    }
    std::vector<std::int64_t> ext(f.dims(), 0);
    if (any)
        for (std::size_t i = 0; i < ext.size(); ++i)
            ext[i] = hi[i] - lo[i] + 1;
    return ext;
}

}  // namespace

GridFunction mult_derivative(const GridFunction& f, const Point& h)
{
    if (h.size() != f.dims())
        throw std::invalid_argument("mult_derivative: shift dimension mismatch");
    GridFunction out(f.domain());
    for (std::size_t idx = 0; idx < f.size(); ++idx) {
        if (f[idx] == cplx{})
            continue;
        Point y = f.point_of(idx);
        for (std::size_t i = 0; i < y.size(); ++i)
            y[i] += h[i];
        out[idx] = f[idx] * std::conj(f.at(y));
    }
    return out;
}

GridFunction mult_derivative(const GridFunction& f, const std::vector<Point>& hs)
{
    GridFunction g = f;
    for (auto it = hs.rbegin(); it != hs.rend(); ++it)
        g = mult_derivative(g, *it);
    return g;
}

double box_norm_power(const GridFunction& f, const BoxNormSpec& spec)
{
    spec.validate();
    require_box(f);
    check_support(f, spec.I_lo, spec.I_hi);
    const cplx v = nested(f, spec, spec.s) / static_cast<double>(spec.I_size());
    const double scale = std::max(1.0, std::abs(v));
    if (v.real() < -1e-10 * scale || std::fabs(v.imag()) > 1e-9 * scale)
        throw std::logic_error("box_norm: inner quantity is not a nonnegative real");
    return std::max(0.0, v.real());
}

double box_norm(const GridFunction& f, const BoxNormSpec& spec)
{
    return std::pow(box_norm_power(f, spec), std::ldexp(1.0, -spec.s));
}

BoxNormSpec uniformity_spec(int s, Interval J, const Point& I_lo, const Point& I_hi, std::size_t axis)
{
    BoxNormSpec spec;
    spec.s = s;
    spec.axis = axis;
    spec.H.assign(static_cast<std::size_t>(std::max(s, 0)), J);
    spec.I_lo = I_lo;
    spec.I_hi = I_hi;
    return spec;
}

double gowers_norm(const GridFunction& f, int s, Interval J, const Point& I_lo, const Point& I_hi, std::size_t axis)
{
    return box_norm(f, uniformity_spec(s, J, I_lo, I_hi, axis));
}

cplx box_inner_product(const std::vector<GridFunction>& fs, const BoxNormSpec& spec)
{
    spec.validate();
    const std::size_t corners = std::size_t{1} << spec.s;
    if (fs.size() != corners)
        throw std::invalid_argument("box_inner_product: need 2^s functions");
    for (const auto& f : fs) {
        require_box(f);
        if (f.dims() != spec.I_lo.size())
            throw std::invalid_argument("box_inner_product: dimension mismatch");
        const auto ext = support_extent(f);
        for (std::size_t i = 0; i < ext.size(); ++i)
            if (ext[i] > spec.I_hi[i] - spec.I_lo[i] + 1)
                throw std::invalid_argument("box_inner_product: a support does not fit a translate of I");
    }
    std::vector<grid::WeightedLine> lines;
    for (const auto& H : spec.H)
        lines.push_back(grid::fejer_line(static_cast<double>(H.size()), grid::LineModel::Integer));

    const GridFunction& base = fs[0];
    cplx total{};
    std::vector<std::size_t> pos(static_cast<std::size_t>(spec.s), 0);
    while (true) {
        double weight = 1;
        std::vector<std::int64_t> h(static_cast<std::size_t>(spec.s));
        for (std::size_t i = 0; i < h.size(); ++i) {
            weight *= lines[i].weights[pos[i]];
            h[i] = static_cast<std::int64_t>(std::llround(lines[i].offsets[pos[i]]));
        }
        cplx acc{};
        for (std::size_t idx = 0; idx < base.size(); ++idx) {
            if (base[idx] == cplx{})
                continue;
            const Point x = base.point_of(idx);
            cplx prod = base[idx];
            for (std::size_t w = 1; w < corners && prod != cplx{}; ++w) {
                Point y = x;
                int bits = 0;
                for (std::size_t i = 0; i < h.size(); ++i)
                    if (w >> i & 1u) {
                        y[spec.axis] += h[i];
                        ++bits;
                    }
                const cplx v = fs[w].at(y);
                prod *= (bits % 2 == 1) ? std::conj(v) : v;
            }
            acc += prod;
        }
        total += weight * acc;
        std::size_t i = 0;
        while (i < pos.size() && ++pos[i] == lines[i].offsets.size())
            pos[i++] = 0;
        if (i == pos.size())
            break;
    }
    return total / static_cast<double>(spec.I_size());
}

U2Check u2_inverse_check(const GridFunction& f, Interval H, Interval I, int grid_factor)
{
    require_box(f);
    if (f.dims() != 1)
        throw std::invalid_argument("u2_inverse_check: f must be one-dimensional");
    if (grid_factor < 8)
        throw std::invalid_argument("u2_inverse_check: frequency grid must have at least 8|I| points");
    for (const auto& v : f.values())
        if (std::abs(v) > 1 + 1e-12)
            throw std::invalid_argument("u2_inverse_check: f is not 1-bounded");
    U2Check out;
    out.lhs = box_norm_power(f, uniformity_spec(2, H, {I.lo}, {I.hi}, 0));
    std::size_t G = 1;
    while (G < static_cast<std::size_t>(grid_factor) * static_cast<std::size_t>(I.size()))
        G <<= 1;
    out.frequency_grid = G;
    // sum_x f(x) e(x b / G), x = I.lo + t; the phase of I.lo drops out under | |.
    GridFunction padded(grid::Domain::periodic({static_cast<std::int64_t>(G)}));
    for (std::int64_t x = I.lo; x <= I.hi; ++x)
        padded[static_cast<std::size_t>(x - I.lo)] = f.at({x});
    const GridFunction F = grid::dft(padded);
    double peak = 0;
    for (const auto& v : F.values())
        peak = std::max(peak, std::abs(v));
    const auto h = static_cast<double>(H.size());
    out.rhs = peak * peak / (h * h);
    out.ok = out.lhs <= out.rhs + 1e-12;
    return out;
}

}  // namespace circlelab::gowers
