#include "circlelab/ergodic.hpp"
#include "circlelab/expsums.hpp"
#include "circlelab/parallel.hpp"
#include "circlelab/rng.hpp"
#include "circlelab/variation.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace circlelab::ergodic {

System System::integer_shift(std::size_t k)
{
    if (k == 0)
        throw std::invalid_argument("integer_shift: k must be positive");
    System s;
    s.kind = SystemKind::IntegerShift;
    s.k = k;
    return s;
}

System System::cyclic(Point period, std::vector<std::int64_t> steps)
{
    if (period.empty())
        throw std::invalid_argument("cyclic: empty period");
    for (auto m : period)
        if (m < 1)
            throw std::invalid_argument("cyclic: periods must be positive");
    if (steps.empty())
        steps.assign(period.size(), 1);
    if (steps.size() != period.size())
        throw std::invalid_argument("cyclic: one step per axis");
    for (std::size_t i = 0; i < steps.size(); ++i)
        if (std::gcd(steps[i], period[i]) != 1)
            throw std::invalid_argument("cyclic: steps must be invertible modulo the period");
    System s;
    s.kind = SystemKind::CyclicShift;
    s.k = period.size();
    s.period = std::move(period);
    s.steps = std::move(steps);
    return s;
}

System System::torus(std::vector<std::vector<double>> angles)
{
    if (angles.empty())
        throw std::invalid_argument("torus: need one angle vector per map");
    for (const auto& a : angles)
        if (a.size() != angles[0].size() || a.empty())
            throw std::invalid_argument("torus: angle vectors must share a positive dimension");
    System s;
    s.kind = SystemKind::TorusRotation;
    s.k = angles.size();
    s.angles = std::move(angles);
    return s;
}

std::string System::name() const
{
    switch (kind) {
    case SystemKind::IntegerShift:
        return "integer_shift";
    case SystemKind::CyclicShift:
        return "cyclic_shift";
    case SystemKind::TorusRotation:
        return "torus_rotation";
    }
    return "unknown";
}

// -------------------------------------------------------------- engine

namespace {

constexpr std::int64_t outside = -1;

std::int64_t floor_mod(std::int64_t a, std::int64_t m)
{
    const std::int64_t r = a % m;
    return r < 0 ? r + m : r;
}

Domain output_box(const OrbitSpec& spec, const std::vector<const GridFunction*>& fs)
{
    const std::size_t dims = fs[0]->dims();
    Point lo(dims, INT64_MAX), hi(dims, INT64_MIN);
    bool any = false;
    for (const auto& per : spec.offsets) {
        Point a(dims, INT64_MIN), b(dims, INT64_MAX);
        for (std::size_t s = 0; s < fs.size(); ++s)
            for (std::size_t t = 0; t < dims; ++t) {
                a[t] = std::max(a[t], fs[s]->domain().lo[t] - per[s][t]);
                b[t] = std::min(b[t], fs[s]->domain().hi[t] - per[s][t]);
            }
        bool empty = false;
        for (std::size_t t = 0; t < dims; ++t)
            empty = empty || a[t] > b[t];
        if (empty)
            continue;
        any = true;
        for (std::size_t t = 0; t < dims; ++t) {
            lo[t] = std::min(lo[t], a[t]);
            hi[t] = std::max(hi[t], b[t]);
        }
    }
    if (!any)
        return fs[0]->domain();
    return Domain::box(lo, hi);
}

}  // namespace

GridFunction evaluate_orbit(const OrbitSpec& spec, const std::vector<const GridFunction*>& fs,
                            const std::optional<Domain>& out_dom)
{
    if (fs.empty())
        throw std::invalid_argument("evaluate_orbit: no functions");
    if (spec.offsets.empty())
        throw std::invalid_argument("evaluate_orbit: empty summation range");
    if (spec.conj.size() != fs.size())
        throw std::invalid_argument("evaluate_orbit: one conjugation flag per slot");
    if (!spec.weights.empty() && spec.weights.size() != spec.offsets.size())
        throw std::invalid_argument("evaluate_orbit: one weight per time");
    const bool periodic = fs[0]->is_periodic();
    const std::size_t dims = fs[0]->dims();
    for (const auto* f : fs) {
        if (f->is_periodic() != periodic || f->dims() != dims)
            throw std::invalid_argument("evaluate_orbit: functions must share the phase space");
        if (periodic && f->domain() != fs[0]->domain())
            throw std::invalid_argument("evaluate_orbit: periodic functions on different models");
    }
    for (const auto& per : spec.offsets) {
        if (per.size() != fs.size())
            throw std::invalid_argument("evaluate_orbit: one offset per slot");
        for (const auto& o : per)
            if (o.size() != dims)
                throw std::invalid_argument("evaluate_orbit: offset dimension mismatch");
    }
    const Domain dom = out_dom ? *out_dom : (periodic ? fs[0]->domain() : output_box(spec, fs));
    if (dom.kind != fs[0]->domain().kind)
        throw std::invalid_argument("evaluate_orbit: output domain kind differs from the inputs");
    GridFunction out(dom);
    const std::size_t cells = out.size();
    const Point ext = dom.extent();
    const Point start = periodic ? Point(dims, 0) : dom.lo;
    const std::size_t slots = fs.size();
    const double norm = 1.0 / static_cast<double>(spec.offsets.size());

    if (periodic && dims == 1 && slots == 1) {
        // one cyclic axis: each time step adds a rotated copy of f
        const std::int64_t M = dom.period[0];
        const auto& src = fs[0]->values();
        std::vector<cplx> acc(cells);
        for (std::size_t n = 0; n < spec.offsets.size(); ++n) {
            const auto shift = static_cast<std::size_t>(floor_mod(spec.offsets[n][0][0], M));
            auto add = [&](std::size_t c0, std::size_t c1, std::size_t y0) {
                if (spec.weights.empty() && !spec.conj[0]) {
                    for (std::size_t c = c0, y = y0; c < c1; ++c, ++y)
                        acc[c] += src[y];
                    return;
                }
                const cplx wn = spec.weights.empty() ? cplx{1, 0} : spec.weights[n];
                for (std::size_t c = c0, y = y0; c < c1; ++c, ++y)
                    acc[c] += wn * (spec.conj[0] ? std::conj(src[y]) : src[y]);
            };
            add(0, cells - shift, shift);
            add(cells - shift, cells, 0);
        }
        for (std::size_t c = 0; c < cells; ++c)
            out[c] = acc[c] * norm;
        return out;
    }

    const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(static_cast<std::size_t>(worker_count()),
                                                                               cells / 4096 + 1));
    const std::size_t chunk = (cells + workers - 1) / workers;
    parallel_for(workers, [&](std::size_t w) {
        const std::size_t c0 = w * chunk;
        const std::size_t c1 = std::min(cells, c0 + chunk);
        if (c0 >= c1)
            return;
        // tables[slot][axis][c] = flat contribution, or outside
        std::vector<std::vector<std::vector<std::int64_t>>> tables(slots, std::vector<std::vector<std::int64_t>>(dims));
        std::vector<cplx> acc(c1 - c0);
        for (std::size_t n = 0; n < spec.offsets.size(); ++n) {
            for (std::size_t s = 0; s < slots; ++s) {
                const GridFunction& f = *fs[s];
                for (std::size_t a = 0; a < dims; ++a) {
                    auto& tab = tables[s][a];
                    tab.resize(static_cast<std::size_t>(ext[a]));
                    const auto stride = static_cast<std::int64_t>(f.strides()[a]);
                    for (std::int64_t c = 0; c < ext[a]; ++c) {
                        const std::int64_t y = start[a] + c + spec.offsets[n][s][a];
                        std::int64_t v;
                        if (periodic) {
                            v = floor_mod(y, f.domain().period[a]) * stride;
                        } else {
                            const std::int64_t local = y - f.domain().lo[a];
                            v = (local < 0 || local > f.domain().hi[a] - f.domain().lo[a]) ? outside : local * stride;
                        }
                        tab[static_cast<std::size_t>(c)] = v;
                    }
                }
            }
            const cplx wn = spec.weights.empty() ? cplx{1, 0} : spec.weights[n];
            Point c = out.point_of(c0);
            for (std::size_t a = 0; a < dims; ++a)
                c[a] -= start[a];
            for (std::size_t idx = c0; idx < c1; ++idx) {
                cplx prod = wn;
                for (std::size_t s = 0; s < slots && prod != cplx{}; ++s) {
                    std::int64_t flat = 0;
                    for (std::size_t a = 0; a < dims; ++a) {
                        const std::int64_t v = tables[s][a][static_cast<std::size_t>(c[a])];
                        if (v == outside) {
                            flat = outside;
                            break;
                        }
                        flat += v;
                    }
                    if (flat == outside) {
                        prod = 0;
                        break;
                    }
                    const cplx val = (*fs[s])[static_cast<std::size_t>(flat)];
                    prod *= spec.conj[s] ? std::conj(val) : val;
                }
                acc[idx - c0] += prod;
                for (std::size_t a = dims; a-- > 0;) {
                    if (++c[a] < ext[a])
                        break;
                    c[a] = 0;
                }
            }
        }
        for (std::size_t idx = c0; idx < c1; ++idx)
            out[idx] = acc[idx - c0] * norm;
    });
    return out;
}

std::vector<std::int64_t> time_range(double N, bool truncated)
{
    if (!(N >= 1))
        throw std::invalid_argument("average: N must be at least 1");
    const auto hi = static_cast<std::int64_t>(std::floor(N));
    const std::int64_t lo = truncated ? static_cast<std::int64_t>(std::floor(N / 2)) : 0;
    std::vector<std::int64_t> t;
    for (std::int64_t n = lo + 1; n <= hi; ++n)
        t.push_back(n);
    return t;
}

namespace {

void check_lattice_inputs(const System& sys, const std::vector<GridFunction>& fs, std::size_t expected)
{
    if (sys.kind == SystemKind::TorusRotation)
        throw std::invalid_argument("rotation systems take trigonometric polynomials; use torus_average");
    if (fs.size() != expected)
        throw std::invalid_argument("average: wrong number of functions");
    for (const auto& f : fs) {
        if (f.dims() != sys.k)
            throw std::invalid_argument("average: functions must live on a k-dimensional lattice");
        if (sys.kind == SystemKind::IntegerShift && f.is_periodic())
            throw std::invalid_argument("integer shifts act on box-supported functions");
        if (sys.kind == SystemKind::CyclicShift && (!f.is_periodic() || f.domain().period != sys.period))
            throw std::invalid_argument("cyclic shifts need functions on the system's model");
    }
}

// Displacement of T_i^{P_i(n)} along axis i as a lattice offset.
std::int64_t displacement(const System& sys, std::size_t i, __int128 value)
{
    if (sys.kind == SystemKind::CyclicShift) {
        const __int128 M = sys.period[i];
        __int128 v = (value % M) * (sys.steps[i] % M) % M;
        if (v < 0)
            v += M;
        return -static_cast<std::int64_t>(v);
    }
    if (value > INT64_MAX / 2 || value < -INT64_MAX / 2)
        throw std::overflow_error("average: orbit leaves the 64-bit lattice");
    return -static_cast<std::int64_t>(value);
}

std::vector<std::vector<__int128>> orbit_values(const PolynomialMap& pm, const std::vector<std::int64_t>& times)
{
    std::vector<std::vector<__int128>> v(pm.k());
    for (std::size_t i = 0; i < pm.k(); ++i) {
        const auto c = poly::small_coeffs(pm[i]);
        for (auto n : times)
            v[i].push_back(poly::eval_i128(c, n));
    }
    return v;
}

std::vector<const GridFunction*> pointers(const std::vector<GridFunction>& fs)
{
    std::vector<const GridFunction*> out;
    for (const auto& f : fs)
        out.push_back(&f);
    return out;
}

GridFunction forward_average(const PolynomialMap& pm, double N, const std::vector<GridFunction>& fs,
                             const System& sys, bool truncated)
{
    if (pm.k() != sys.k)
        throw std::invalid_argument("average: polynomial map and system disagree on k");
    check_lattice_inputs(sys, fs, pm.k());
    const auto times = time_range(N, truncated);
    const auto vals = orbit_values(pm, times);
    OrbitSpec spec;
    spec.conj.assign(pm.k(), false);
    for (std::size_t t = 0; t < times.size(); ++t) {
        std::vector<Point> per(pm.k(), Point(pm.k(), 0));
        for (std::size_t i = 0; i < pm.k(); ++i)
            per[i][i] = displacement(sys, i, vals[i][t]);
        spec.offsets.push_back(std::move(per));
    }
    return evaluate_orbit(spec, pointers(fs));
}

}  // namespace

GridFunction average(const PolynomialMap& pm, double N, const std::vector<GridFunction>& fs, const System& sys)
{
    return forward_average(pm, N, fs, sys, false);
}

GridFunction truncated_average(const PolynomialMap& pm, double N, const std::vector<GridFunction>& fs,
                               const System& sys)
{
    return forward_average(pm, N, fs, sys, true);
}

GridFunction adjoint_average(const PolynomialMap& pm, double N, std::size_t j, const std::vector<GridFunction>& gs,
                             const System& sys, bool truncated)
{
    if (j >= pm.k())
        throw std::out_of_range("adjoint_average: index out of range");
    if (pm.k() != sys.k)
        throw std::invalid_argument("adjoint_average: polynomial map and system disagree on k");
    check_lattice_inputs(sys, gs, pm.k());
    const auto times = time_range(N, truncated);
    const auto vals = orbit_values(pm, times);
    OrbitSpec spec;
    for (std::size_t i = 0; i < pm.k(); ++i)
        spec.conj.push_back(i != j);
    for (std::size_t t = 0; t < times.size(); ++t) {
        std::vector<Point> per(pm.k(), Point(pm.k(), 0));
        const std::int64_t dj = displacement(sys, j, vals[j][t]);
        for (std::size_t i = 0; i < pm.k(); ++i) {
            if (i != j)
                per[i][i] = displacement(sys, i, vals[i][t]);
            per[i][j] -= dj;
        }
        spec.offsets.push_back(std::move(per));
    }
    return evaluate_orbit(spec, pointers(gs));
}

GridFunction modulated_average(const PolynomialMap& pm, std::size_t l, const std::vector<double>& xi, double N,
                               const std::vector<GridFunction>& fs, const System& sys, bool truncated)
{
    if (l < 1 || l > pm.k())
        throw std::out_of_range("modulated_average: l must lie in [1, k]");
    if (xi.size() != pm.k() - l)
        throw std::invalid_argument("modulated_average: xi needs k - l entries");
    if (pm.k() != sys.k)
        throw std::invalid_argument("modulated_average: polynomial map and system disagree on k");
    check_lattice_inputs(sys, fs, l);
    const auto times = time_range(N, truncated);
    const auto vals = orbit_values(pm, times);
    OrbitSpec spec;
    spec.conj.assign(l, false);
    for (std::size_t t = 0; t < times.size(); ++t) {
        std::vector<Point> per(l, Point(pm.k(), 0));
        for (std::size_t i = 0; i < l; ++i)
            per[i][i] = displacement(sys, i, vals[i][t]);
        spec.offsets.push_back(std::move(per));
        double phase = 0;
        for (std::size_t i = l; i < pm.k(); ++i)
            phase += expsums::frac_product(xi[i - l], vals[i][t]);
        spec.weights.push_back(grid::e(phase));
    }
    return evaluate_orbit(spec, pointers(fs));
}

// ---------------------------------------------------------------- torus

TrigPolynomial TrigPolynomial::character(std::vector<std::int64_t> m)
{
    TrigPolynomial p;
    p.terms.emplace_back(std::move(m), cplx{1, 0});
    return p;
}

TrigPolynomial TrigPolynomial::constant(cplx c)
{
    TrigPolynomial p;
    p.terms.emplace_back(std::vector<std::int64_t>{}, c);
    return p;
}

cplx TrigPolynomial::operator()(const std::vector<double>& x) const
{
    cplx s{};
    for (const auto& [m, c] : terms) {
        double phase = 0;
        for (std::size_t a = 0; a < m.size(); ++a)
            phase += expsums::frac_product(x.at(a), m[a]);
        s += c * grid::e(phase);
    }
    return s;
}

cplx TrigPolynomial::mean() const
{
    cplx s{};
    for (const auto& [m, c] : terms)
        if (std::all_of(m.begin(), m.end(), [](std::int64_t v) { return v == 0; }))
            s += c;
    return s;
}

std::vector<cplx> torus_average(const PolynomialMap& pm, double N, const std::vector<TrigPolynomial>& fs,
                                const System& sys, const std::vector<std::vector<double>>& points, bool truncated)
{
    if (sys.kind != SystemKind::TorusRotation)
        throw std::invalid_argument("torus_average needs a rotation system");
    if (fs.size() != pm.k() || sys.k != pm.k())
        throw std::invalid_argument("torus_average: one observable per map");
    const std::size_t t_dim = sys.angles[0].size();
    const auto times = time_range(N, truncated);
    const auto vals = orbit_values(pm, times);
    std::vector<cplx> out;
    for (const auto& x : points) {
        if (x.size() != t_dim)
            throw std::invalid_argument("torus_average: point dimension mismatch");
        cplx sum{}, comp{};
        for (std::size_t t = 0; t < times.size(); ++t) {
            cplx prod{1, 0};
            for (std::size_t i = 0; i < pm.k(); ++i) {
                cplx fi{};
                for (const auto& [m, c] : fs[i].terms) {
                    double phase = 0;
                    for (std::size_t a = 0; a < m.size(); ++a) {
                        phase += expsums::frac_product(x[a], m[a]);
                        phase += expsums::frac_product(sys.angles[i][a], static_cast<__int128>(m[a]) * vals[i][t]);
                    }
                    fi += c * grid::e(phase);
                }
                prod *= fi;
            }
            // compensated summation
            const cplx y = prod - comp;
            const cplx s = sum + y;
            comp = (s - sum) - y;
            sum = s;
        }
        out.push_back(sum / static_cast<double>(times.size()));
    }
    return out;
}

// ---------------------------------------------------------- statistics

SweepStats sweep_stats(const PolynomialMap& pm, const std::vector<double>& Ns, const std::vector<GridFunction>& fs,
                       const System& sys, double p, double r, bool truncated)
{
    if (Ns.empty())
        throw std::invalid_argument("sweep_stats: empty scale set");
    for (std::size_t i = 1; i < Ns.size(); ++i)
        if (!(Ns[i] > Ns[i - 1]))
            throw std::invalid_argument("sweep_stats: scales must be strictly increasing");
    std::vector<GridFunction> As;
    for (double N : Ns)
        As.push_back(forward_average(pm, N, fs, sys, truncated));
    SweepStats st;
    for (const auto& a : As)
        st.single.push_back(grid::lp_norm(a, p));
    // common domain
    Domain dom = As[0].domain();
    if (!As[0].is_periodic()) {
        for (const auto& a : As)
            for (std::size_t t = 0; t < dom.dims(); ++t) {
                dom.lo[t] = std::min(dom.lo[t], a.domain().lo[t]);
                dom.hi[t] = std::max(dom.hi[t], a.domain().hi[t]);
            }
        for (auto& a : As) {
            GridFunction e(dom);
            for (std::size_t idx = 0; idx < e.size(); ++idx)
                e[idx] = a.at(e.point_of(idx));
            a = std::move(e);
        }
    }
    GridFunction sup(dom), var(dom);
    const auto v = variation::pointwise_variation_norm(As, r);
    for (std::size_t idx = 0; idx < sup.size(); ++idx) {
        double m = 0;
        for (const auto& a : As)
            m = std::max(m, std::abs(a[idx]));
        sup[idx] = m;
        var[idx] = v[idx];
    }
    st.maximal = grid::lp_norm(sup, p);
    st.variation = grid::lp_norm(var, p);
    return st;
}

double maximal_stat(const PolynomialMap& pm, const std::vector<double>& Ns, const std::vector<GridFunction>& fs,
                    const System& sys, double p, bool truncated)
{
    return sweep_stats(pm, Ns, fs, sys, p, 2.0, truncated).maximal;
}

double variation_stat(const PolynomialMap& pm, const std::vector<double>& Ns, const std::vector<GridFunction>& fs,
                      const System& sys, double p, double r, bool truncated)
{
    return sweep_stats(pm, Ns, fs, sys, p, r, truncated).variation;
}

// ----------------------------------------------------------- experiments

std::vector<ConvergenceRow> convergence_experiment(const PolynomialMap& pm, const std::vector<double>& angles,
                                                   const std::vector<std::int64_t>& freqs,
                                                   const std::vector<std::int64_t>& checkpoints)
{
    if (angles.size() != pm.k() || freqs.size() != pm.k())
        throw std::invalid_argument("convergence_experiment: one angle and frequency per map");
    if (checkpoints.empty())
        throw std::invalid_argument("convergence_experiment: no checkpoints");
    for (std::size_t i = 1; i < checkpoints.size(); ++i)
        if (checkpoints[i] <= checkpoints[i - 1])
            throw std::invalid_argument("convergence_experiment: checkpoints must increase");
    if (checkpoints[0] < 1)
        throw std::invalid_argument("convergence_experiment: checkpoints must be positive");
    const std::int64_t N_max = checkpoints.back();
    // limit of the average: product of the means
    double limit = 1;
    for (auto m : freqs)
        if (m != 0)
            limit = 0;
    std::vector<std::vector<std::int64_t>> coeffs;
    for (std::size_t i = 0; i < pm.k(); ++i)
        coeffs.push_back(poly::small_coeffs(pm[i]));

    std::vector<double> err(static_cast<std::size_t>(N_max) + 1, 0.0);
    cplx sum{}, comp{};
    for (std::int64_t n = 1; n <= N_max; ++n) {
        double phase = 0;
        for (std::size_t i = 0; i < pm.k(); ++i)
            if (freqs[i] != 0)
                phase += expsums::frac_product(angles[i], static_cast<__int128>(freqs[i]) * poly::eval_i128(coeffs[i], n));
        const cplx y = grid::e(phase) - comp;
        const cplx s = sum + y;
        comp = (s - sum) - y;
        sum = s;
        err[static_cast<std::size_t>(n)] = std::abs(sum / static_cast<double>(n) - limit);
    }
    std::vector<double> xi(pm.k());
    for (std::size_t i = 0; i < pm.k(); ++i)
        xi[i] = expsums::frac_product(angles[i], freqs[i]);
    std::vector<ConvergenceRow> rows;
    for (std::size_t c = 0; c < checkpoints.size(); ++c) {
        ConvergenceRow row;
        row.N = checkpoints[c];
        row.error = err[static_cast<std::size_t>(row.N)];
        const std::int64_t end = c + 1 < checkpoints.size() ? checkpoints[c + 1] : row.N + 1;
        for (std::int64_t n = row.N; n < end; ++n)
            row.envelope = std::max(row.envelope, err[static_cast<std::size_t>(n)]);
        row.weyl_crosscheck = std::abs(expsums::weyl_sum(expsums::orbit(pm, 0, row.N), xi) - limit);
        rows.push_back(row);
    }
    return rows;
}

namespace {

GridFunction random_function(const Domain& dom, Rng& rng)
{
    GridFunction f(dom);
    for (auto& v : f.values())
        v = rng.unit_disc();
    return f;
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y)
{
    const auto n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double den = n * sxx - sx * sx;
    return den > 0 ? (n * sxy - sx * sy) / den : 0.0;
}

}  // namespace

DecayTable minor_arc_decay_experiment(const PolynomialMap& pm, const std::vector<std::int64_t>& Ns,
                                      const DecayOptions& opt)
{
    if (opt.period.size() != pm.k())
        throw std::invalid_argument("minor_arc_decay_experiment: model must have k axes");
    if (opt.j >= pm.k())
        throw std::out_of_range("minor_arc_decay_experiment: j out of range");
    if (opt.p_i.size() != pm.k())
        throw std::invalid_argument("minor_arc_decay_experiment: one exponent per function");
    if (opt.trials < 1 || Ns.empty())
        throw std::invalid_argument("minor_arc_decay_experiment: nothing to run");
    const auto centers = arcs::shells_upto(opt.l);
    if (opt.period[opt.j] % arcs::lcm_of_denominators(centers) != 0)
        throw std::invalid_argument("minor_arc_decay_experiment: model too small to host the major arcs");
    const System sys = System::cyclic(opt.period);
    const Domain dom = Domain::periodic(opt.period);

    DecayTable table;
    table.annihilated_centers = static_cast<std::int64_t>(centers.size());
    std::vector<double> sums(Ns.size(), 0.0);
    for (int t = 0; t < opt.trials; ++t) {
        Rng rng(opt.seed, static_cast<std::uint64_t>(t));
        std::vector<GridFunction> fs;
        for (std::size_t i = 0; i < pm.k(); ++i)
            fs.push_back(random_function(dom, rng));
        fs[opt.j] = grid::subtract(fs[opt.j], arcs::iw_project(fs[opt.j], opt.j, centers, opt.m));
        double denom = 1;
        for (std::size_t i = 0; i < pm.k(); ++i)
            denom *= grid::lp_norm(fs[i], opt.p_i[i]);
        for (std::size_t c = 0; c < Ns.size(); ++c) {
            const double num = denom == 0 ? 0 : grid::lp_norm(truncated_average(pm, static_cast<double>(Ns[c]), fs, sys), opt.p);
            sums[c] += denom == 0 ? 0 : num / denom;
        }
    }
    std::vector<double> xs, ys;
    for (std::size_t c = 0; c < Ns.size(); ++c) {
        DecayRow row{Ns[c], sums[c] / opt.trials};
        table.rows.push_back(row);
        if (row.ratio > 0) {
            xs.push_back(static_cast<double>(row.N));
            ys.push_back(row.ratio);
        }
    }
    table.slope = xs.size() >= 2 ? fit_slope(xs, ys) : 0.0;
    table.strictly_decreasing = true;
    for (std::size_t c = 1; c < table.rows.size(); ++c)
        table.strictly_decreasing = table.strictly_decreasing && table.rows[c].ratio < table.rows[c - 1].ratio;
    return table;
}

InverseReport inverse_correlation_experiment(const PolynomialMap& pm, std::int64_t N, double delta,
                                             const std::vector<GridFunction>& fs, std::size_t j,
                                             const std::vector<std::int64_t>& q_grid, const std::vector<int>& m_grid,
                                             std::int64_t C0, double C)
{
    const std::size_t k = pm.k();
    if (fs.size() != k + 1)
        throw std::invalid_argument("inverse_correlation_experiment: need f_0, ..., f_k");
    if (j >= k)
        throw std::out_of_range("inverse_correlation_experiment: j out of range");
    if (!(delta > 0 && delta <= 1))
        throw std::invalid_argument("inverse_correlation_experiment: delta must lie in (0, 1]");
    for (const auto& f : fs)
        if (!f.is_periodic() || f.domain() != fs[0].domain() || f.dims() != k)
            throw std::invalid_argument("inverse_correlation_experiment: inputs must share a periodic model of Z^k");
    const Point& M = fs[0].domain().period;
    // The model must hold the box and every orbit step without wrapping.
    Point half(k);
    for (std::size_t i = 0; i < k; ++i) {
        const double reach = std::pow(static_cast<double>(N), pm.degree(i));
        half[i] = C0 * static_cast<std::int64_t>(reach);
        double orbit_max = 0;
        for (std::int64_t n = 1; n <= N; ++n)
            orbit_max = std::max(orbit_max, std::fabs(poly::eval(pm[i], n).convert_to<double>()));
        if (static_cast<double>(M[i]) < 2.0 * static_cast<double>(half[i]) + 1 + orbit_max)
            throw std::invalid_argument("inverse_correlation_experiment: model too small for the box");
    }
    auto in_box = [&](const Point& x) {
        for (std::size_t i = 0; i < k; ++i) {
            const std::int64_t c = x[i] > M[i] / 2 ? x[i] - M[i] : x[i];
            if (c < -half[i] || c > half[i])
                return false;
        }
        return true;
    };
    for (const auto& f : fs)
        for (std::size_t idx = 0; idx < f.size(); ++idx) {
            if (std::abs(f[idx]) > 1 + 1e-12)
                throw std::invalid_argument("inverse_correlation_experiment: inputs must be 1-bounded");
            if (f[idx] != cplx{} && !in_box(f.point_of(idx)))
                throw std::invalid_argument("inverse_correlation_experiment: input not supported on the box");
        }
    const double ND = std::pow(static_cast<double>(N), pm.total_degree());
    InverseReport rep;
    const System sys = System::cyclic(M);
    const std::vector<GridFunction> args(fs.begin() + 1, fs.end());
    rep.hypothesis = std::abs(grid::inner(truncated_average(pm, static_cast<double>(N), args, sys), fs[0])) / ND;
    rep.hypothesis_met = rep.hypothesis >= delta;
    rep.threshold = std::pow(delta, C);
    for (auto q : q_grid) {
        const auto centers = arcs::farey_upto(q);
        if (M[j] % arcs::lcm_of_denominators(centers) != 0)
            throw std::invalid_argument("inverse_correlation_experiment: model does not host q <= " + std::to_string(q));
        for (int m : m_grid) {
            const GridFunction P = arcs::iw_project(fs[j + 1], j, centers, m);
            double corr = 0;
            for (std::size_t idx = 0; idx < P.size(); ++idx)
                if (in_box(P.point_of(idx)))
                    corr += std::abs(P[idx]);
            corr /= ND;
            rep.grid.push_back({q, m, corr});
            rep.best = std::max(rep.best, corr);
        }
    }
    rep.reached = rep.best >= rep.threshold;
    return rep;
}

}  // namespace circlelab::ergodic
