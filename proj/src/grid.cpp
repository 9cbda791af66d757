#include "circlelab/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace circlelab::grid {

std::mutex& planner_lock()
{
    static std::mutex m;
    return m;
}

namespace {

std::int64_t floor_mod(std::int64_t a, std::int64_t m)
{
    const std::int64_t r = a % m;
    return r < 0 ? r + m : r;
}

}  // namespace

cplx e(double t)
{
    const double f = t - std::round(t);
    return {std::cos(2.0 * std::numbers::pi * f), std::sin(2.0 * std::numbers::pi * f)};
}

cplx e_ratio(std::int64_t num, std::int64_t den)
{
    return e(static_cast<double>(floor_mod(num, den)) / static_cast<double>(den));
}

cplx e_ratio128(__int128 num, __int128 den)
{
    __int128 r = num % den;
    if (r < 0)
        r += den;
    return e(static_cast<double>(r) / static_cast<double>(den));
}

// ------------------------------------------------------------------ Domain

Domain Domain::box(Point lo, Point hi)
{
    if (lo.size() != hi.size() || lo.empty())
        throw std::invalid_argument("box bounds must have equal positive length");
    Domain d;
    d.kind = DomainKind::Box;
    d.lo = std::move(lo);
    d.hi = std::move(hi);
    return d;
}

Domain Domain::periodic(Point period)
{
    if (period.empty())
        throw std::invalid_argument("periodic domain needs at least one axis");
    for (auto m : period)
        if (m < 1)
            throw std::invalid_argument("period must be positive");
    Domain d;
    d.kind = DomainKind::Periodic;
    d.period = std::move(period);
    return d;
}

std::size_t Domain::dims() const
{
    return kind == DomainKind::Box ? lo.size() : period.size();
}

Point Domain::extent() const
{
    if (kind == DomainKind::Periodic)
        return period;
    Point e(lo.size());
    for (std::size_t i = 0; i < lo.size(); ++i)
        e[i] = std::max<std::int64_t>(0, hi[i] - lo[i] + 1);
    return e;
}

std::size_t Domain::size() const
{
    std::size_t n = 1;
    for (auto e : extent()) {
        if (e == 0)
            return 0;
        if (n > max_cells / static_cast<std::size_t>(e) + 1)
            return max_cells + 1;
        n *= static_cast<std::size_t>(e);
    }
    return n;
}

bool Domain::contains(const Point& x) const
{
    if (kind == DomainKind::Periodic)
        return true;
    for (std::size_t i = 0; i < lo.size(); ++i)
        if (x[i] < lo[i] || x[i] > hi[i])
            return false;
    return true;
}

// ------------------------------------------------------------ GridFunction

GridFunction::GridFunction(Domain d) : dom_(std::move(d))
{
    const std::size_t n = dom_.size();
    if (n > max_cells)
        throw std::length_error("grid exceeds 2^26 cells");
    vals_.assign(n, cplx{});
    init_strides();
}

GridFunction::GridFunction(Domain d, std::vector<cplx> values) : dom_(std::move(d)), vals_(std::move(values))
{
    const std::size_t n = dom_.size();
    if (n > max_cells)
        throw std::length_error("grid exceeds 2^26 cells");
    if (vals_.size() != n)
        throw std::invalid_argument("value count does not match domain");
    init_strides();
}

void GridFunction::init_strides()
{
    const Point ext = dom_.extent();
    strides_.assign(ext.size(), 1);
    for (std::size_t i = ext.size(); i-- > 1;)
        strides_[i - 1] = strides_[i] * static_cast<std::size_t>(std::max<std::int64_t>(ext[i], 1));
}

std::size_t GridFunction::index_of(const Point& x) const
{
    std::size_t idx = 0;
    for (std::size_t i = 0; i < strides_.size(); ++i) {
        const std::int64_t c = dom_.kind == DomainKind::Box ? x[i] - dom_.lo[i] : floor_mod(x[i], dom_.period[i]);
        idx += static_cast<std::size_t>(c) * strides_[i];
    }
    return idx;
}

Point GridFunction::point_of(std::size_t index) const
{
    Point x(strides_.size());
    for (std::size_t i = 0; i < strides_.size(); ++i) {
        const auto c = static_cast<std::int64_t>(index / strides_[i]);
        index %= strides_[i];
        x[i] = dom_.kind == DomainKind::Box ? c + dom_.lo[i] : c;
    }
    return x;
}

cplx GridFunction::at(const Point& x) const
{
    if (!dom_.contains(x))
        return {};
    return vals_[index_of(x)];
}

void GridFunction::set(const Point& x, cplx v)
{
    if (!dom_.contains(x))
        throw std::out_of_range("set: point outside box");
    vals_[index_of(x)] = v;
}

nlohmann::json GridFunction::to_json() const
{
    nlohmann::json dom;
    if (is_periodic()) {
        dom = {{"kind", "periodic"}, {"period", dom_.period}};
    } else {
        dom = {{"kind", "box"}, {"lo", dom_.lo}, {"hi", dom_.hi}};
    }
    std::vector<double> re, im;
    re.reserve(vals_.size());
    im.reserve(vals_.size());
    for (const auto& v : vals_) {
        re.push_back(v.real());
        im.push_back(v.imag());
    }
    return {{"dims", dims()}, {"domain", dom}, {"re", re}, {"im", im}};
}

GridFunction GridFunction::from_json(const nlohmann::json& j)
{
    const auto& dom = j.at("domain");
    const std::string kind = dom.at("kind").get<std::string>();
    Domain d;
    if (kind == "periodic")
        d = Domain::periodic(dom.at("period").get<Point>());
    else if (kind == "box")
        d = Domain::box(dom.at("lo").get<Point>(), dom.at("hi").get<Point>());
    else
        throw std::invalid_argument("unknown domain kind '" + kind + "'");
    if (j.contains("dims") && j.at("dims").get<std::size_t>() != d.dims())
        throw std::invalid_argument("dims does not match domain");
    const auto re = j.at("re").get<std::vector<double>>();
    std::vector<double> im(re.size(), 0.0);
    if (j.contains("im"))
        im = j.at("im").get<std::vector<double>>();
    if (im.size() != re.size())
        throw std::invalid_argument("re/im length mismatch");
    std::vector<cplx> v(re.size());
    for (std::size_t i = 0; i < re.size(); ++i)
        v[i] = {re[i], im[i]};
    return GridFunction(std::move(d), std::move(v));
}

// -------------------------------------------------------------- arithmetic

void require_same_kind(const GridFunction& a, const GridFunction& b)
{
    if (a.domain().kind != b.domain().kind)
        throw std::invalid_argument("cannot mix Box and Periodic functions");
    if (a.dims() != b.dims())
        throw std::invalid_argument("dimension mismatch");
    if (a.is_periodic() && a.domain().period != b.domain().period)
        throw std::invalid_argument("period mismatch");
}

namespace {

Domain union_domain(const GridFunction& a, const GridFunction& b)
{
    if (a.is_periodic())
        return a.domain();
    if (a.size() == 0)
        return b.domain();
    if (b.size() == 0)
        return a.domain();
    Point lo(a.dims()), hi(a.dims());
    for (std::size_t i = 0; i < a.dims(); ++i) {
        lo[i] = std::min(a.domain().lo[i], b.domain().lo[i]);
        hi[i] = std::max(a.domain().hi[i], b.domain().hi[i]);
    }
    return Domain::box(lo, hi);
}

GridFunction combine(const GridFunction& a, const GridFunction& b, cplx sb)
{
    require_same_kind(a, b);
    if (a.domain() == b.domain()) {
        GridFunction r = a;
        for (std::size_t i = 0; i < r.size(); ++i)
            r[i] += sb * b[i];
        return r;
    }
    GridFunction r(union_domain(a, b));
    for (std::size_t i = 0; i < r.size(); ++i) {
        const Point x = r.point_of(i);
        r[i] = a.at(x) + sb * b.at(x);
    }
    return r;
}

}  // namespace

GridFunction add(const GridFunction& a, const GridFunction& b)
{
    return combine(a, b, 1.0);
}

GridFunction subtract(const GridFunction& a, const GridFunction& b)
{
    return combine(a, b, -1.0);
}

GridFunction scale(const GridFunction& f, cplx c)
{
    GridFunction r = f;
    for (auto& v : r.values())
        v *= c;
    return r;
}

GridFunction conj(const GridFunction& f)
{
    GridFunction r = f;
    for (auto& v : r.values())
        v = std::conj(v);
    return r;
}

GridFunction map_values(const GridFunction& f, const std::function<cplx(cplx)>& g)
{
    GridFunction r = f;
    for (auto& v : r.values())
        v = g(v);
    return r;
}

double lp_norm(const GridFunction& f, double p)
{
    if (!(p > 0))
        throw std::invalid_argument("lp_norm: p must be positive");
    if (std::isinf(p)) {
        double m = 0;
        for (const auto& v : f.values())
            m = std::max(m, std::abs(v));
        return m;
    }
    double s = 0;
    for (const auto& v : f.values())
        s += std::pow(std::abs(v), p);
    return std::pow(s, 1.0 / p);
}

cplx inner(const GridFunction& f, const GridFunction& g)
{
    require_same_kind(f, g);
    cplx s{};
    if (f.domain() == g.domain()) {
        for (std::size_t i = 0; i < f.size(); ++i)
            s += f[i] * std::conj(g[i]);
        return s;
    }
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (f[i] == cplx{})
            continue;
        s += f[i] * std::conj(g.at(f.point_of(i)));
    }
    return s;
}

double max_abs_diff(const GridFunction& a, const GridFunction& b)
{
    require_same_kind(a, b);
    double m = 0;
    if (a.domain() == b.domain()) {
        for (std::size_t i = 0; i < a.size(); ++i)
            m = std::max(m, std::abs(a[i] - b[i]));
        return m;
    }
    const GridFunction d = subtract(a, b);
    return lp_norm(d, INFINITY);
}

GridFunction to_periodic(const GridFunction& f, const Point& period)
{
    if (f.is_periodic())
        throw std::invalid_argument("to_periodic: input is already periodic");
    if (period.size() != f.dims())
        throw std::invalid_argument("to_periodic: dimension mismatch");
    const Point ext = f.domain().extent();
    for (std::size_t i = 0; i < ext.size(); ++i)
        if (ext[i] > period[i])
            throw std::invalid_argument("to_periodic: box wider than period would alias");
    GridFunction r(Domain::periodic(period));
    for (std::size_t i = 0; i < f.size(); ++i)
        r.values()[r.index_of(f.point_of(i))] += f[i];
    return r;
}

GridFunction restrict_to_box(const GridFunction& f, const Point& lo, const Point& hi)
{
    GridFunction r(Domain::box(lo, hi));
    for (std::size_t i = 0; i < r.size(); ++i)
        r[i] = f.at(r.point_of(i));
    return r;
}

// --------------------------------------------------------------------- DFT

namespace {

void run_full_dft(GridFunction& f, int sign)
{
    std::vector<int> n;
    for (auto m : f.domain().period)
        n.push_back(static_cast<int>(m));
    auto* data = reinterpret_cast<fftw_complex*>(f.values().data());
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> g(planner_lock());
        plan = fftw_plan_dft(static_cast<int>(n.size()), n.data(), data, data, sign, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    std::lock_guard<std::mutex> g(planner_lock());
    fftw_destroy_plan(plan);
}

void run_axis_dft(GridFunction& f, std::size_t axis, int sign)
{
    const Point& M = f.domain().period;
    std::size_t outer = 1, inner = 1;
    for (std::size_t i = 0; i < axis; ++i)
        outer *= static_cast<std::size_t>(M[i]);
    for (std::size_t i = axis + 1; i < M.size(); ++i)
        inner *= static_cast<std::size_t>(M[i]);
    const int len = static_cast<int>(M[axis]);
    fftw_iodim dim{len, static_cast<int>(inner), static_cast<int>(inner)};
    fftw_iodim loops[2] = {{static_cast<int>(outer), static_cast<int>(len * inner), static_cast<int>(len * inner)},
                           {static_cast<int>(inner), 1, 1}};
    auto* data = reinterpret_cast<fftw_complex*>(f.values().data());
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> g(planner_lock());
        plan = fftw_plan_guru_dft(1, &dim, 2, loops, data, data, sign, FFTW_ESTIMATE);
    }
    if (!plan)
        throw std::runtime_error("FFTW could not plan the axis transform");
    fftw_execute(plan);
    std::lock_guard<std::mutex> g(planner_lock());
    fftw_destroy_plan(plan);
}

}  // namespace

GridFunction dft(const GridFunction& f)
{
    if (!f.is_periodic())
        throw std::invalid_argument("dft needs a periodic domain");
    GridFunction r = f;
    // FFTW_BACKWARD carries the positive exponent, matching e(x.xi).
    run_full_dft(r, FFTW_BACKWARD);
    return r;
}

GridFunction idft(const GridFunction& f)
{
    if (!f.is_periodic())
        throw std::invalid_argument("idft needs a periodic domain");
    GridFunction r = f;
    run_full_dft(r, FFTW_FORWARD);
    const double scale_by = 1.0 / static_cast<double>(r.size());
    for (auto& v : r.values())
        v *= scale_by;
    return r;
}

void apply_axis_multiplier(GridFunction& f, std::size_t axis, const std::function<cplx(std::int64_t)>& multiplier)
{
    if (!f.is_periodic())
        throw std::invalid_argument("axis multiplier needs a periodic domain");
    if (axis >= f.dims())
        throw std::out_of_range("axis out of range");
    const std::int64_t M = f.domain().period[axis];
    std::vector<cplx> m(static_cast<std::size_t>(M));
    for (std::int64_t a = 0; a < M; ++a)
        m[static_cast<std::size_t>(a)] = multiplier(a);
    apply_axis_multiplier(f, axis, m);
}

void apply_axis_multiplier(GridFunction& f, std::size_t axis, const std::vector<cplx>& m)
{
    if (!f.is_periodic())
        throw std::invalid_argument("axis multiplier needs a periodic domain");
    if (axis >= f.dims())
        throw std::out_of_range("axis out of range");
    const std::int64_t M = f.domain().period[axis];
    if (static_cast<std::int64_t>(m.size()) != M)
        throw std::invalid_argument("multiplier length does not match period");
    run_axis_dft(f, axis, FFTW_BACKWARD);
    const std::size_t stride = f.strides()[axis];
    const double norm = 1.0 / static_cast<double>(M);
    auto& v = f.values();
    for (std::size_t i = 0; i < v.size(); ++i) {
        const std::size_t a = (i / stride) % static_cast<std::size_t>(M);
        v[i] *= m[a] * norm;
    }
    run_axis_dft(f, axis, FFTW_FORWARD);
}

// ------------------------------------------------------------------- Fejér

WeightedLine fejer_line(double length, LineModel model, int samples_per_unit)
{
    if (!(length >= 1))
        throw std::invalid_argument("fejer_line: length must be at least 1");
    WeightedLine w;
    if (model == LineModel::Integer) {
        const auto H = static_cast<std::int64_t>(std::floor(length));
        const double denom = static_cast<double>(H) * static_cast<double>(H);
        for (std::int64_t h = -(H - 1); h <= H - 1; ++h) {
            w.offsets.push_back(static_cast<double>(h));
            w.weights.push_back(static_cast<double>(H - std::llabs(h)) / denom);
        }
        w.integer = true;
        return w;
    }
    if (samples_per_unit < 1)
        throw std::invalid_argument("fejer_line: sample count must be positive");
    const double step = 1.0 / samples_per_unit;
    const auto count = static_cast<std::int64_t>(std::ceil(2.0 * length * samples_per_unit));
    const double used = static_cast<double>(count) * step;
    for (std::int64_t j = 0; j < count; ++j) {
        const double x = -used / 2 + (static_cast<double>(j) + 0.5) * step;
        w.offsets.push_back(x);
        w.weights.push_back(fejer_density(x, length) * step);
    }
    w.integer = false;
    return w;
}

double fejer_density(double x, double N)
{
    const double t = 1.0 - std::fabs(x) / N;
    return t > 0 ? t / N : 0.0;
}

GridFunction convolve_axis(const GridFunction& f, const WeightedLine& w, std::size_t axis)
{
    if (axis >= f.dims())
        throw std::out_of_range("convolve_axis: axis out of range");
    if (!w.integer)
        throw std::invalid_argument("convolve_axis: lattice functions need integer offsets");
    std::vector<std::int64_t> off;
    for (double o : w.offsets)
        off.push_back(static_cast<std::int64_t>(std::llround(o)));
    Domain out_dom = f.domain();
    if (!f.is_periodic() && f.size() > 0 && !off.empty()) {
        out_dom.lo[axis] += *std::min_element(off.begin(), off.end());
        out_dom.hi[axis] += *std::max_element(off.begin(), off.end());
    }
    GridFunction r(out_dom);
    if (f.size() == 0)
        return r;
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (f[i] == cplx{})
            continue;
        Point x = f.point_of(i);
        const std::int64_t base = x[axis];
        for (std::size_t t = 0; t < off.size(); ++t) {
            x[axis] = base + off[t];
            r.values()[r.index_of(x)] += f[i] * w.weights[t];
        }
    }
    return r;
}

GridFunction modulate(const GridFunction& f, const std::vector<Rational>& theta)
{
    if (theta.size() != f.dims())
        throw std::invalid_argument("modulate: one frequency per axis");
    GridFunction r = f;
    for (std::size_t i = 0; i < r.size(); ++i) {
        const Point x = r.point_of(i);
        // the phase sum is kept exact over a common denominator
        __int128 num = 0, den = 1;
        for (std::size_t a = 0; a < x.size(); ++a) {
            num = num * theta[a].den + static_cast<__int128>(theta[a].num) * x[a] * den;
            den *= theta[a].den;
            num %= den;
        }
        r[i] *= e_ratio128(num, den);
    }
    return r;
}

}  // namespace circlelab::grid
