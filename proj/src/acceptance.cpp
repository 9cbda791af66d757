#include "circlelab/acceptance.hpp"
#include "circlelab/arcs.hpp"
#include "circlelab/ergodic.hpp"
#include "circlelab/expsums.hpp"
#include "circlelab/fixtures.hpp"
#include "circlelab/gowers.hpp"
#include "circlelab/grid.hpp"
#include "circlelab/improving.hpp"
#include "circlelab/pet.hpp"
#include "circlelab/poly.hpp"
#include "circlelab/rng.hpp"
#include "circlelab/variation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace circlelab::acceptance {

namespace {

using grid::cplx;
using grid::Domain;
using grid::GridFunction;
using grid::Point;
using poly::PolynomialMap;

std::string fmt(const char* f, double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

std::string num(double v)
{
    return fmt("%.6g", v);
}

double slope_loglog(const std::vector<double>& x, const std::vector<double>& y)
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
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

bool close_to_fixture(double measured, double fixture)
{
    return fixture != 0 && std::abs(measured - fixture) <= 1e-9 * std::abs(fixture);
}

GridFunction random_box(const Point& lo, const Point& hi, Rng& rng)
{
    GridFunction f(Domain::box(lo, hi));
    for (auto& v : f.values())
        v = rng.unit_disc();
    return f;
}

GridFunction random_periodic(const Point& period, Rng& rng)
{
    GridFunction f(Domain::periodic(period));
    for (auto& v : f.values())
        v = rng.complex_normal();
    return f;
}

// ------------------------------------------------------------ 1. Farey

std::vector<std::int64_t> totient_sieve(std::int64_t n)
{
    std::vector<std::int64_t> phi(static_cast<std::size_t>(n) + 1);
    std::iota(phi.begin(), phi.end(), 0);
    for (std::int64_t p = 2; p <= n; ++p)
        if (phi[static_cast<std::size_t>(p)] == p)
            for (std::int64_t m = p; m <= n; m += p)
                phi[static_cast<std::size_t>(m)] -= phi[static_cast<std::size_t>(m)] / p;
    return phi;
}

Outcome farey_exactness()
{
    const auto phi = totient_sieve(4096);
    std::vector<std::int64_t> cum(phi.size(), 0);
    for (std::size_t q = 1; q < phi.size(); ++q)
        cum[q] = cum[q - 1] + phi[q];
    // cum[1] = 1 counts the class 0/1

    // every N <= 1000 from one enumeration, by denominator, plus direct calls
    const auto all = arcs::farey_upto(1000);
    std::vector<std::int64_t> by_q(1001, 0);
    for (const auto& f : all)
        ++by_q[static_cast<std::size_t>(f.q)];
    std::int64_t running = 0;
    int mismatches = 0;
    for (std::int64_t N = 1; N <= 1000; ++N) {
        running += by_q[static_cast<std::size_t>(N)];
        if (running != cum[static_cast<std::size_t>(N)])
            ++mismatches;
    }
    for (std::int64_t N = 1; N <= 1000; N += (N < 100 ? 1 : 37))
        if (static_cast<std::int64_t>(arcs::farey_upto(N).size()) != cum[static_cast<std::size_t>(N)])
            ++mismatches;
    if (static_cast<std::int64_t>(all.size()) != cum[1000])
        ++mismatches;

    int shell_failures = 0;
    std::size_t top = 0;
    for (int l = 0; l <= 12; ++l) {
        const std::size_t n = arcs::shells_upto(l).size();
        if (n > (std::size_t{1} << (2 * l)) || static_cast<std::int64_t>(n) != cum[std::size_t{1} << l])
            ++shell_failures;
        top = n;
    }
    Outcome o;
    o.pass = mismatches == 0 && shell_failures == 0;
    o.detail = "count mismatches " + std::to_string(mismatches) + " (N <= 1000); shell bound failures " +
               std::to_string(shell_failures) + " (l <= 12, #Sigma_{<=12} = " + std::to_string(top) + " <= 2^24)";
    return o;
}

// ----------------------------------------------------- 2. IW projection

Outcome iw_contraction()
{
    double worst_ratio = 0, worst_repro = 0;
    for (int l = 0; l <= 4; ++l) {
        const int m = -2 * l - 4;
        const auto centers = arcs::shells_upto(l);
        const std::int64_t M = 64 * arcs::lcm_upto(std::int64_t{1} << l);
        const double plateau = std::ldexp(1.0, m - 2);
        const auto plateau_range = [&](const arcs::FareyFraction& c) {
            const double lo = (c.value() - plateau) * static_cast<double>(M);
            const double hi = (c.value() + plateau) * static_cast<double>(M);
            return std::pair<std::int64_t, std::int64_t>{static_cast<std::int64_t>(std::ceil(lo - 1e-9)),
                                                         static_cast<std::int64_t>(std::floor(hi + 1e-9))};
        };
        if (l <= 3) {
            for (std::uint64_t seed = 0; seed < 100; ++seed) {
                Rng rng(seed, static_cast<std::uint64_t>(l));
                GridFunction f = random_periodic({M}, rng);
                const GridFunction pf = arcs::iw_project(f, 0, centers, m);
                worst_ratio = std::max(worst_ratio, grid::lp_norm(pf, 2) / grid::lp_norm(f, 2));
                // range: spectrum inside the plateaus is reproduced
                GridFunction spec(Domain::periodic({M}));
                for (const auto& c : centers) {
                    const auto [a, b] = plateau_range(c);
                    for (std::int64_t i = a; i <= b; ++i)
                        spec.values()[static_cast<std::size_t>(((i % M) + M) % M)] = rng.complex_normal();
                }
                const GridFunction g = grid::idft(spec);
                const GridFunction pg = arcs::iw_project(g, 0, centers, m);
                worst_repro = std::max(worst_repro, grid::max_abs_diff(pg, g) / grid::lp_norm(g, std::numeric_limits<double>::infinity()));
            }
        } else {
            // The l = 4 model has 46 million points; evaluate on the frequency side.
            const auto mult = arcs::iw_multiplier(M, centers, m);
            std::map<std::int64_t, double> value(mult.entries.begin(), mult.entries.end());
            for (const auto& c : centers) {
                const auto [a, b] = plateau_range(c);
                for (std::int64_t i = a; i <= b; ++i) {
                    const auto it = value.find(((i % M) + M) % M);
                    worst_repro = std::max(worst_repro, std::abs((it == value.end() ? 0.0 : it->second) - 1.0));
                }
            }
            for (std::uint64_t seed = 0; seed < 100; ++seed) {
                Rng rng(seed, 4);
                double in = 0, out = 0;
                for (const auto& [idx, v] : mult.entries) {
                    const double c2 = std::norm(rng.complex_normal());
                    in += c2;
                    out += v * v * c2;
                }
                worst_ratio = std::max(worst_ratio, std::sqrt(out / in));
            }
        }
    }
    Outcome o;
    o.pass = worst_ratio <= 1 + 1e-9 && worst_repro <= 1e-10;
    o.detail = "max ||Pi f||/||f|| = " + fmt("%.12f", worst_ratio) + " (<= 1 + 1e-9); range error " +
               num(worst_repro) + " (<= 1e-10)";
    return o;
}

// ------------------------------------------------ 3. Weyl sum approximation

Outcome weyl_approximation()
{
    const auto pm = PolynomialMap::parse("n,n^2");
    double C = 0;
    std::size_t samples = 0;
    Rng rng(3);
    for (int e = 6; e <= 10; ++e) {
        const double N = std::ldexp(1.0, e);
        const std::vector<double> M{N / 8, N * N / 8};
        for (int l1 = 0; l1 <= 3; ++l1)
            for (int l2 = 0; l2 <= 3; ++l2) {
                const int l = std::max(l1, l2);
                const double shape = expsums::approx_shape(pm, N, l, M);
                for (const auto& t1 : arcs::shell(l1))
                    for (const auto& t2 : arcs::shell(l2)) {
                        const std::vector<arcs::FareyFraction> theta{t1, t2};
                        for (int s = 0; s < 3; ++s) {
                            std::vector<double> xi{t1.value(), t2.value()};
                            if (s > 0)
                                for (std::size_t i = 0; i < 2; ++i)
                                    xi[i] += rng.uniform(-1, 1) / M[i];
                            const double err = expsums::approx_error(pm, N, xi, theta, M);
                            C = std::max(C, err / shape);
                            ++samples;
                        }
                    }
            }
    }
    Outcome o;
    o.pass = C <= 100;
    o.detail = "fitted C = " + num(C) + " over " + std::to_string(samples) + " samples (<= 100)";
    return o;
}

// ---------------------------------------------------- 4. model operator

Outcome model_operator_approximation()
{
    const auto pm = PolynomialMap::parse("n^2");
    const std::vector<std::int64_t> Ns{64, 128, 256};
    const std::vector<std::pair<int, int>> ls{{0, 0}, {0, 1}, {1, 0}, {1, 1}};
    const std::int64_t M = std::int64_t{1} << 20;
    const auto sys = ergodic::System::cyclic({M});
    std::map<std::int64_t, double> worst;   // per N: max ||E f|| N^{9/10} / ||f||
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto [l, s] = ls[seed % ls.size()];
        Rng rng(seed, 4);
        const GridFunction f = random_periodic({M}, rng);
        const auto centers = arcs::shell(l);
        for (auto N : Ns) {
            const double Nd = static_cast<double>(N);
            // Pi~_{l,s} f
            GridFunction pf = f;
            grid::apply_axis_multiplier(pf, 0, [&](std::int64_t a) {
                double v = 0;
                for (const auto& c : centers) {
                    double d = static_cast<double>(a) / static_cast<double>(M) - c.value();
                    d -= std::nearbyint(d);
                    v += arcs::shell_bump(d, s, Nd, 2);
                }
                return cplx{v, 0};
            });
            const GridFunction lhs = ergodic::truncated_average(pm, Nd, {pf}, sys);
            std::vector<expsums::ModelTerm> terms;
            for (const auto& c : centers)
                terms.push_back({{c}, expsums::gauss_sum(pm, {c})});
            expsums::BlockMultiplier mult;
            mult.radius = {std::ldexp(0.5, -2 * (arcs::log2_floor(Nd) - s))};
            mult.value = [&](const std::vector<double>& x) {
                const double w = arcs::shell_bump(x[0], s, Nd, 2);
                return w == 0 ? cplx{} : w * expsums::osc_integral(pm, Nd, x);
            };
            const GridFunction rhs = expsums::model_operator(terms, mult, {f});
            const double r = grid::lp_norm(grid::subtract(lhs, rhs), 2) / grid::lp_norm(f, 2);
            worst[N] = std::max(worst[N], r * std::pow(Nd, 0.9));
        }
    }
    const double C_small = std::max(worst[64], worst[128]);
    const double C = std::max(C_small, worst[256]);
    Outcome o;
    o.pass = std::isfinite(C) && worst[256] <= C_small;
    o.detail = "fitted C = " + num(C) + " (N=64: " + num(worst[64]) + ", 128: " + num(worst[128]) +
               ", 256: " + num(worst[256]) + "); constant from N <= 128 covers N = 256";
    return o;
}

// -------------------------------------------------- 5. minor-arc decay

constexpr double scan_cexp = 4;

Outcome weyl_minor_arc_decay()
{
    const auto P = poly::IntPolynomial::parse("n^2");
    std::vector<double> xs, ys;
    bool decreasing = true;
    std::string trail;
    for (int e = 8; e <= 14; ++e) {
        const std::int64_t N = std::int64_t{1} << e;
        const double delta = std::pow(static_cast<double>(N), -1.0 / 8);
        const auto res = expsums::minor_arc_scan(P, N, delta, scan_cexp, 4 * N * N, 5);
        if (!ys.empty() && !(res.sup < ys.back()))
            decreasing = false;
        xs.push_back(static_cast<double>(N));
        ys.push_back(res.sup);
        trail += (trail.empty() ? "" : ", ") + fmt("%.4f", res.sup);
    }
    const double slope = slope_loglog(xs, ys);
    Outcome o;
    o.pass = decreasing && slope <= -0.2 && close_to_fixture(slope, fixtures::scan_slope);
    o.detail = "sup |m_N| = (" + trail + "), strictly decreasing " + (decreasing ? "yes" : "no") + ", slope " +
               fmt("%.12g", slope) + " (<= -0.2; archived " + fmt("%.12g", fixtures::scan_slope) + ")";
    return o;
}

// -------------------------------------------------------- 6. Vinogradov

poly::BigInt naive_vinogradov(int s, int d, std::int64_t N)
{
    // enumerate all 2s-tuples in [N]
    const int w = 2 * s;
    std::vector<std::int64_t> t(static_cast<std::size_t>(w), 1);
    poly::BigInt count = 0;
    while (true) {
        bool ok = true;
        for (int j = 1; j <= d && ok; ++j) {
            std::int64_t sum = 0;
            for (int a = 0; a < s; ++a) {
                std::int64_t p1 = 1, p2 = 1;
                for (int e = 0; e < j; ++e) {
                    p1 *= t[static_cast<std::size_t>(a)];
                    p2 *= t[static_cast<std::size_t>(a + s)];
                }
                sum += p1 - p2;
            }
            ok = sum == 0;
        }
        if (ok)
            ++count;
        int i = 0;
        while (i < w && ++t[static_cast<std::size_t>(i)] > N)
            t[static_cast<std::size_t>(i++)] = 1;
        if (i == w)
            break;
    }
    return count;
}

std::vector<std::int64_t> vmvt_range()
{
    std::vector<std::int64_t> Ns;
    for (std::int64_t N = 2; N <= 24; ++N)
        Ns.push_back(N);
    return Ns;
}

Outcome vinogradov(bool small)
{
    const bool j22 = improving::vinogradov_count(2, 2, 2) == 6;
    int mismatches = 0;
    for (int s = 1; s <= 2; ++s)
        for (int d = 1; d <= 3; ++d)
            for (std::int64_t N = 1; N <= 6; ++N)
                if (improving::vinogradov_count(s, d, N) != naive_vinogradov(s, d, N))
                    ++mismatches;
    Outcome o;
    o.detail = "J_{2,2}(2) = 6 " + std::string(j22 ? "yes" : "no") + "; oracle mismatches " + std::to_string(mismatches);
    o.pass = j22 && mismatches == 0;
    if (small)
        return o;
    const auto fit = improving::vmvt_bound_check(4, 2, vmvt_range(), 0.0);
    const double C = fit.C_free.value_or(std::numeric_limits<double>::infinity());
    o.pass = o.pass && fit.ok && close_to_fixture(C, fixtures::vmvt_free_constant);
    o.detail += "; (4,2) eps-free C = " + fmt("%.12g", C) + " (archived " + fmt("%.12g", fixtures::vmvt_free_constant) +
                "), tail slope " + fmt("%.4f", fit.tail_slope) + " (< 0.5)";
    return o;
}

// ------------------------------------------------------------ 7. Gowers

// Double-average form: |I|^-1 sum_x E_{h,h' in H} prod_w C^{|w|} f(x + [h,h']_w).
double box_power_double_average(const GridFunction& f, const gowers::BoxNormSpec& spec)
{
    const int s = spec.s;
    const auto& dom = f.domain();
    std::int64_t reach = 0;
    for (const auto& H : spec.H)
        reach += std::max(std::abs(H.lo), std::abs(H.hi));
    std::vector<std::int64_t> h(static_cast<std::size_t>(2 * s));
    double total = 0;
    double count = 0;
    for (int i = 0; i < s; ++i) {
        h[static_cast<std::size_t>(i)] = spec.H[static_cast<std::size_t>(i)].lo;
        h[static_cast<std::size_t>(i + s)] = spec.H[static_cast<std::size_t>(i)].lo;
    }
    Point lo = dom.lo, hi = dom.hi;
    lo[spec.axis] -= reach;
    hi[spec.axis] += reach;
    const Domain xs = Domain::box(lo, hi);
    while (true) {
        cplx sum{};
        GridFunction probe(xs);
        for (std::size_t xi = 0; xi < probe.size(); ++xi) {
            const Point x = probe.point_of(xi);
            cplx prod{1, 0};
            for (unsigned w = 0; w < (1u << s) && prod != cplx{}; ++w) {
                Point y = x;
                int bits = 0;
                for (int i = 0; i < s; ++i) {
                    const bool on = (w >> i) & 1u;
                    bits += on;
                    y[spec.axis] += on ? h[static_cast<std::size_t>(i)] : h[static_cast<std::size_t>(i + s)];
                }
                const cplx v = f.at(y);
                prod *= (bits % 2) ? std::conj(v) : v;
            }
            sum += prod;
        }
        total += sum.real();
        count += 1;
        int i = 0;
        while (i < 2 * s) {
            const auto& H = spec.H[static_cast<std::size_t>(i % s)];
            if (++h[static_cast<std::size_t>(i)] <= H.hi)
                break;
            h[static_cast<std::size_t>(i)] = H.lo;
            ++i;
        }
        if (i == 2 * s)
            break;
    }
    return total / count / static_cast<double>(spec.I_size());
}

struct GowersInstance {
    gowers::BoxNormSpec spec;
    Point lo, hi;
};

GowersInstance gowers_instance(Rng& rng, int s)
{
    GowersInstance g;
    const std::int64_t len = rng.integer(2, 12);
    g.lo = {-len / 2};
    g.hi = {g.lo[0] + len - 1};
    g.spec.s = s;
    g.spec.axis = 0;
    for (int i = 0; i < s; ++i)
        g.spec.H.push_back({1, rng.integer(1, s == 3 ? 3 : 4)});
    g.spec.I_lo = g.lo;
    g.spec.I_hi = g.hi;
    return g;
}

Outcome gowers_suite()
{
    int fails_nonneg = 0, fails_triangle = 0, fails_gcs = 0, fails_eq = 0, fails_induction = 0, fails_u2 = 0;
    double max_eq = 0, max_ind = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        Rng rng(seed, 7);
        const int s = 1 + static_cast<int>(seed % 3);
        const auto g = gowers_instance(rng, s);
        const GridFunction f = random_box(g.lo, g.hi, rng);
        const GridFunction h = random_box(g.lo, g.hi, rng);
        double pf = 0;
        try {
            pf = gowers::box_norm_power(f, g.spec);
        } catch (const std::logic_error&) {
            ++fails_nonneg;
            continue;
        }
        if (pf < -1e-10)
            ++fails_nonneg;
        // triangle inequality
        const double nf = gowers::box_norm(f, g.spec), nh = gowers::box_norm(h, g.spec);
        if (gowers::box_norm(grid::add(f, h), g.spec) > nf + nh + 1e-9)
            ++fails_triangle;
        // Gowers-Cauchy-Schwarz
        std::vector<GridFunction> fam;
        double prod = 1;
        for (unsigned w = 0; w < (1u << s); ++w) {
            fam.push_back(random_box(g.lo, g.hi, rng));
            prod *= gowers::box_norm(fam.back(), g.spec);
        }
        if (std::abs(gowers::box_inner_product(fam, g.spec)) > prod + 1e-9)
            ++fails_gcs;
        // equivalence with the double-average form
        const double d = std::abs(box_power_double_average(f, g.spec) - pf);
        max_eq = std::max(max_eq, d);
        if (d > 1e-9)
            ++fails_eq;
        // induction identity with m = s - 1
        if (s >= 2) {
            gowers::BoxNormSpec inner = g.spec;
            inner.s = s - 1;
            inner.H.pop_back();
            const auto line = grid::fejer_line(static_cast<double>(g.spec.H.back().size()), grid::LineModel::Integer);
            double acc = 0;
            for (std::size_t t = 0; t < line.offsets.size(); ++t) {
                const auto hs = static_cast<std::int64_t>(line.offsets[t]);
                acc += line.weights[t] * gowers::box_norm_power(gowers::mult_derivative(f, Point{hs}), inner);
            }
            const double di = std::abs(acc - pf);
            max_ind = std::max(max_ind, di);
            if (di > 1e-9)
                ++fails_induction;
        }
        // U^2 inverse bound
        const auto u = gowers::u2_inverse_check(f, g.spec.H[0], {g.lo[0], g.hi[0]});
        if (!u.ok)
            ++fails_u2;
    }
    // delta_0 closed form
    GridFunction d0(Domain::box({-2}, {2}));
    d0.set({0}, 1);
    const double gn = gowers::gowers_norm(d0, 2, {1, 2}, {-2}, {2});
    const double derr = std::abs(gn - std::pow(20.0, -0.25));
    Outcome o;
    o.pass = fails_nonneg + fails_triangle + fails_gcs + fails_eq + fails_induction + fails_u2 == 0 && derr <= 1e-12;
    o.detail = "failures: nonneg " + std::to_string(fails_nonneg) + ", triangle " + std::to_string(fails_triangle) +
               ", GCS " + std::to_string(fails_gcs) + ", forms " + std::to_string(fails_eq) + " (max diff " +
               num(max_eq) + "), induction " + std::to_string(fails_induction) + " (max diff " + num(max_ind) +
               "), U2 " + std::to_string(fails_u2) + " over 200; |delta_0 - 20^-1/4| = " + num(derr);
    return o;
}

// --------------------------------------------------------- 8. variation

double sup_abs(const std::vector<cplx>& a)
{
    double m = 0;
    for (auto v : a)
        m = std::max(m, std::abs(v));
    return m;
}

Outcome variation_suite()
{
    int fails_rm = 0, fails_alg = 0, fails_mono = 0;
    for (std::uint64_t seed = 0; seed < 500; ++seed) {
        Rng rng(seed, 8);
        const int m = 1 + static_cast<int>(seed % 6);
        std::vector<cplx> a((std::size_t{1} << m) + 1);
        for (auto& v : a)
            v = rng.complex_normal();
        const std::int64_t n0 = rng.integer(0, (std::int64_t{1} << m) - 1);
        if (!variation::rm_check(a, n0, m).ok)
            ++fails_rm;

        const std::size_t len = static_cast<std::size_t>(rng.integer(2, 12));
        std::vector<cplx> x(len), y(len), xy(len);
        for (std::size_t i = 0; i < len; ++i) {
            x[i] = rng.complex_normal();
            y[i] = rng.complex_normal();
            xy[i] = x[i] * y[i];
        }
        const double r = 1 + 3 * rng.uniform();
        const double lhs = variation::variation_seminorm(xy, r);
        const double rhs = sup_abs(x) * variation::variation_seminorm(y, r) +
                           sup_abs(y) * variation::variation_seminorm(x, r);
        if (lhs > rhs + 1e-9)
            ++fails_alg;
        if (variation::variation_norm(xy, r) >
            2 * variation::variation_norm(x, r) * variation::variation_norm(y, r) + 1e-9)
            ++fails_alg;
        double prev = variation::variation_norm(x, 1);
        for (double rr : {1.5, 2.0, 3.0, 4.0, variation::infinity}) {
            const double v = variation::variation_norm(x, rr);
            if (v > prev + 1e-9)
                ++fails_mono;
            prev = v;
        }
    }
    const double v2 =
        variation::variation_seminorm(variation::IndexedSequence::from_values(std::vector<double>{0, 1, 0, 1, 0}), 2);
    Outcome o;
    o.pass = fails_rm == 0 && fails_alg == 0 && fails_mono == 0 && v2 == 2.0;
    o.detail = "failures: Rademacher-Menshov " + std::to_string(fails_rm) + "/500, algebra " +
               std::to_string(fails_alg) + ", monotonicity " + std::to_string(fails_mono) +
               "; V^2(0,1,0,1,0) = " + fmt("%.17g", v2);
    return o;
}

// ------------------------------------------------------------- 9. chain

Outcome chain_suite()
{
    int failures = 0;
    double worst = 0;
    std::size_t levels = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        Rng rng(seed, 9);
        const double p = seed % 2 ? 2.0 : 1.0;
        const auto count = static_cast<std::size_t>(rng.integer(1, 32));
        const Domain dom = Domain::box({0, 0}, {rng.integer(0, 3), rng.integer(0, 3)});
        std::vector<GridFunction> fs;
        GridFunction cur(dom);
        for (auto& v : cur.values())
            v = rng.complex_normal();
        for (std::size_t n = 0; n < count; ++n) {
            // a mix of repeats, small steps and jumps
            if (n > 0 && !rng.bernoulli(0.2)) {
                const double scale = rng.bernoulli(0.2) ? 1.0 : 0.05;
                for (auto& v : cur.values())
                    v += scale * rng.complex_normal();
            }
            fs.push_back(cur);
        }
        try {
            const auto c = variation::entropy_chain(fs, p);
            const double res = variation::verify_chain(c, fs);
            worst = std::max(worst, res);
            if (res > 1e-10)
                ++failures;
            levels = std::max(levels, c.levels.size());
        } catch (const std::logic_error&) {
            ++failures;
        }
    }
    Outcome o;
    o.pass = failures == 0;
    o.detail = "failures " + std::to_string(failures) + "/50; max telescoping residual " + num(worst) +
               " (<= 1e-10); deepest chain " + std::to_string(levels) + " levels";
    return o;
}

// ------------------------------------------------------ 10. duality

Outcome duality_suite()
{
    const std::vector<std::string> maps{"n", "n^2", "n,n^2", "2n,n^2+n", "n,n^2,n^3"};
    double worst = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        Rng rng(seed, 10);
        const auto pm = PolynomialMap::parse(maps[seed % maps.size()]);
        const std::size_t k = pm.k();
        const auto N = static_cast<double>(rng.integer(1, k == 3 ? 4 : 8));
        const auto sys = ergodic::System::integer_shift(k);
        const std::int64_t side = k == 3 ? 3 : 5;
        std::vector<GridFunction> fs;
        for (std::size_t i = 0; i < k; ++i)
            fs.push_back(random_box(Point(k, -side), Point(k, side), rng));
        const GridFunction f0 = random_box(Point(k, -side - 20), Point(k, side), rng);
        const cplx lhs = grid::inner(ergodic::average(pm, N, fs, sys), f0);
        for (std::size_t j = 0; j < k; ++j) {
            std::vector<GridFunction> gs = fs;
            gs[j] = f0;
            const cplx rhs = grid::inner(fs[j], ergodic::adjoint_average(pm, N, j, gs, sys));
            worst = std::max(worst, std::abs(lhs - rhs));
        }
    }
    // Fourier diagonalization for k = 1
    double diag = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Rng rng(seed, 11);
        const auto pm = PolynomialMap::parse(seed % 2 ? "n^2" : "n^3+2n");
        const std::int64_t M = 97 + static_cast<std::int64_t>(seed);
        const auto N = static_cast<double>(rng.integer(1, 60));
        const GridFunction f = random_periodic({M}, rng);
        const auto sys = ergodic::System::cyclic({M});
        const GridFunction lhs = grid::dft(ergodic::average(pm, N, {f}, sys));
        const GridFunction lhs_t = grid::dft(ergodic::truncated_average(pm, N, {f}, sys));
        const GridFunction ff = grid::dft(f);
        const auto orb = expsums::orbit(pm, 0, static_cast<std::int64_t>(N));
        for (std::int64_t a = 0; a < M; ++a) {
            const double xi = static_cast<double>(a) / static_cast<double>(M);
            const cplx m = expsums::weyl_sum(orb, {xi});
            const cplx mt = expsums::weyl_sum(pm, N, {xi});
            const auto i = static_cast<std::size_t>(a);
            diag = std::max(diag, std::abs(lhs[i] - m * ff[i]) / (1 + std::abs(ff[i])));
            diag = std::max(diag, std::abs(lhs_t[i] - mt * ff[i]) / (1 + std::abs(ff[i])));
        }
    }
    Outcome o;
    o.pass = worst <= 1e-10 && diag <= 1e-10;
    o.detail = "max duality residual " + num(worst) + ", diagonalization residual " + num(diag) + " (<= 1e-10)";
    return o;
}

// --------------------------------------------------- 11. rwt sweep

constexpr std::uint64_t rwt_seed = 2024;

Outcome rwt_sweep()
{
    const auto pm = PolynomialMap::parse("n,n^2");
    const auto a = improving::rwt_sweep(pm, 8, 200, rwt_seed);
    const auto b = improving::rwt_sweep(pm, 8, 200, rwt_seed);
    const std::string ra = a.max_ratio.str(), rb = b.max_ratio.str();
    const bool repro = ra == rb && a.ratios == b.ratios;
    Outcome o;
    o.pass = repro && a.certificates_hold && b.certificates_hold && ra == fixtures::rwt_max_ratio;
    o.detail = "max ratio " + ra + " ~ " + num(a.max_ratio.convert_to<double>()) + " (family " +
               std::to_string(a.argmax_seed) + "); archived " + (ra == fixtures::rwt_max_ratio ? "match" : "MISMATCH") +
               "; rerun bit-exact " + (repro ? "yes" : "no") + "; certificates " + std::to_string(a.certificates) +
               " all hold " + (a.certificates_hold ? "yes" : "no");
    return o;
}

// ---------------------------------------------------- 12. convergence

Outcome convergence()
{
    const auto pm = PolynomialMap::parse("n,n^2");
    const std::vector<double> angles{(std::sqrt(5.0) - 1) / 2, std::sqrt(2.0) - 1};
    const auto rows = ergodic::convergence_experiment(pm, angles, {1, 1}, {1000, 10000, 100000});
    bool decreasing = true;
    std::string trail;
    double cross = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (i > 0 && !(rows[i].envelope < rows[i - 1].envelope))
            decreasing = false;
        trail += (i ? ", " : "") + num(rows[i].envelope);
        cross = std::max(cross, std::abs(rows[i].error - rows[i].weyl_crosscheck));
    }
    const double final_error = rows.back().error;
    Outcome o;
    o.pass = final_error <= 0.05 && decreasing && cross <= 1e-9;
    o.detail = "|A_N| at N = 1e5: " + num(final_error) + " (<= 0.05); envelopes (" + trail + ") decreasing " +
               (decreasing ? "yes" : "no") + "; Weyl cross-check diff " + num(cross);
    return o;
}

// ------------------------------------------------- 13. multilinear decay

Outcome multilinear_decay()
{
    const auto pm = PolynomialMap::parse("n,n^2");
    ergodic::DecayOptions opt;
    opt.period = {512, 3072};
    opt.j = 1;
    opt.l = 2;
    opt.m = -6;
    opt.p = 1;
    opt.p_i = {2, 2};
    opt.seed = 13;
    opt.trials = 2;
    const auto table = ergodic::minor_arc_decay_experiment(pm, {64, 128, 256, 512, 1024}, opt);
    std::string trail;
    for (const auto& r : table.rows)
        trail += (trail.empty() ? "" : ", ") + fmt("%.5f", r.ratio);
    Outcome o;
    o.pass = table.strictly_decreasing && close_to_fixture(table.slope, fixtures::decay_slope);
    o.detail = "ratios (" + trail + ") strictly decreasing " + (table.strictly_decreasing ? "yes" : "no") + "; slope " +
               fmt("%.12g", table.slope) + " (archived " + fmt("%.12g", fixtures::decay_slope) + ")";
    return o;
}

// ------------------------------------------------------------ 14. PET

std::vector<std::string> pet_matrix()
{
    std::vector<std::string> out;
    for (unsigned mask = 1; mask < 16; ++mask) {
        if (__builtin_popcount(mask) > 3)
            continue;
        std::string s;
        for (int d = 1; d <= 4; ++d)
            if (mask & (1u << (d - 1)))
                s += (s.empty() ? "" : ",") + std::string(d == 1 ? "n" : "n^" + std::to_string(d));
        out.push_back(s);
    }
    return out;
}

bool same_family(const poly::PolyVectorFamily& a, const poly::PolyVectorFamily& b)
{
    return a.vectors == b.vectors;
}

poly::PolyVectorFamily substitute(const poly::PolyVectorFamily& fam, const std::vector<poly::BigInt>& h)
{
    poly::PolyVectorFamily out = fam;
    for (auto& v : out.vectors)
        for (auto& c : v.comps)
            c = c.substitute(h);
    return out;
}

Outcome pet_termination()
{
    const auto maps = pet_matrix();
    std::vector<int> steps;
    std::string trail, capped;
    bool linear = true;
    std::vector<poly::PetTrace> traces;
    for (const auto& m : maps) {
        try {
            auto trace = poly::pet_trace(poly::PolyVectorFamily::from_map(PolynomialMap::parse(m)));
            linear = linear && trace.states.back().is_linear();
            steps.push_back(static_cast<int>(trace.steps()));
            trail += (trail.empty() ? "" : " ") + std::to_string(trace.steps());
            if (trace.steps() > 0)
                traces.push_back(std::move(trace));
        } catch (const poly::PetCapExceeded& e) {
            linear = false;
            steps.push_back(-1);
            trail += (trail.empty() ? "" : " ") + std::string("-");
            capped += (capped.empty() ? "" : ", ") + std::string("(") + m + ") " + std::to_string(e.family_size) +
                      " vectors after " + std::to_string(e.steps) + " steps";
        }
    }
    const bool archived = std::equal(steps.begin(), steps.end(), fixtures::pet_steps.begin(), fixtures::pet_steps.end());

    // symbolic/concrete commutation
    int mismatches = 0, resampled = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        Rng rng(seed, 14);
        const auto& trace = traces[seed % traces.size()];
        const auto upto = static_cast<std::size_t>(rng.integer(1, static_cast<std::int64_t>(trace.steps())));
        // A substitution that makes some vector constant drops it on the
        // concrete side and shifts later indices; draw again in that case.
        for (int attempt = 0; attempt < 50; ++attempt) {
            std::vector<poly::BigInt> h;
            for (int v = 0; v < trace.states[upto].shift_vars; ++v)
                h.push_back(rng.integer(-9, 9));
            poly::PolyVectorFamily concrete = trace.states[0];
            bool degenerate = false;
            for (std::size_t t = 0; t < upto && !degenerate; ++t) {
                const auto& step = trace.states[upto].history[t];
                const auto var = static_cast<std::size_t>(std::stoi(step.shift_var.substr(1)));
                concrete = poly::vdc_step(concrete, step.l0, h[var - 1]);
                degenerate = concrete.vectors.size() != trace.states[t + 1].vectors.size();
            }
            if (degenerate) {
                ++resampled;
                continue;
            }
            if (!same_family(substitute(trace.states[upto], h), concrete))
                ++mismatches;
            break;
        }
    }
    Outcome o;
    o.pass = linear && archived && mismatches == 0;
    o.detail = std::to_string(maps.size()) + " maps terminate linear " + (linear ? "yes" : "no") +
               (capped.empty() ? "" : " (size cap hit: " + capped + ")") + ", steps [" + trail +
               "] archived " + (archived ? "match" : "MISMATCH") + "; commutation mismatches " +
               std::to_string(mismatches) + "/100 (" + std::to_string(resampled) + " degenerate draws resampled)";
    return o;
}

}  // namespace

std::vector<Criterion> acceptance_criteria()
{
    return {
        {1, "farey-exactness", 5, farey_exactness},
        {2, "iw-contraction", 30, iw_contraction},
        {3, "weyl-approximation", 120, weyl_approximation},
        {4, "model-operator", 120, model_operator_approximation},
        {5, "weyl-minor-arc-decay", 300, weyl_minor_arc_decay},
        {6, "vinogradov", 180, [] { return vinogradov(false); }},
        {7, "gowers-suite", 180, gowers_suite},
        {8, "variation-suite", 60, variation_suite},
        {9, "entropy-chain", 120, chain_suite},
        {10, "duality-diagonalization", 60, duality_suite},
        {11, "restricted-weak-type-sweep", 600, rwt_sweep},
        {12, "character-convergence", 120, convergence},
        {13, "multilinear-weyl-decay", 300, multilinear_decay},
        {14, "pet-termination", 60, pet_termination},
    };
}

std::vector<Criterion> smoke_criteria()
{
    return {
        {1, "farey-exactness", 5, farey_exactness},
        {6, "vinogradov-small", 10, [] { return vinogradov(true); }},
        {8, "variation-suite", 60, variation_suite},
        {10, "duality-diagonalization", 60, duality_suite},
    };
}

std::vector<Criterion> suite(const std::string& name)
{
    if (name == "acceptance")
        return acceptance_criteria();
    if (name == "smoke")
        return smoke_criteria();
    throw std::invalid_argument("unknown suite '" + name + "' (expected acceptance or smoke)");
}

std::string format(const Report& r)
{
    char head[160];
    std::snprintf(head, sizeof head, "[%s] %2d %-28s %8.2f s / %4.0f s%s: ", r.pass ? "PASS" : "FAIL", r.id,
                  r.name.c_str(), r.seconds, r.budget_seconds, r.within_budget ? "" : " OVER BUDGET");
    return head + r.detail;
}

std::vector<Report> run(const std::vector<Criterion>& criteria, std::ostream& out, const std::vector<int>& only)
{
    std::vector<Report> reports;
    for (const auto& c : criteria) {
        if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end())
            continue;
        Report r;
        r.id = c.id;
        r.name = c.name;
        r.budget_seconds = c.budget_seconds;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            const Outcome o = c.run();
            r.pass = o.pass;
            r.detail = o.detail;
        } catch (const std::exception& e) {
            r.pass = false;
            r.detail = std::string("error: ") + e.what();
        }
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        r.within_budget = r.seconds <= r.budget_seconds;
        r.pass = r.pass && r.within_budget;
        out << format(r) << std::endl;
        reports.push_back(std::move(r));
    }
    return reports;
}

bool all_passed(const std::vector<Report>& reports)
{
    return std::all_of(reports.begin(), reports.end(), [](const Report& r) { return r.pass; });
}

}  // namespace circlelab::acceptance
