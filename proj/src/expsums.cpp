#include "circlelab/expsums.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace circlelab::expsums {

double frac_product(double x, __int128 P)
{
    const bool neg = P < 0;
    unsigned __int128 u = neg ? static_cast<unsigned __int128>(-P) : static_cast<unsigned __int128>(P);
    double xs = x - std::floor(x);
    double acc = 0;
    while (u != 0) {
        const auto chunk = static_cast<double>(static_cast<std::uint64_t>(u & 0xFFFFFFu));
        u >>= 24;
        if (chunk != 0) {
            const double prod = xs * chunk;
            const double err = std::fma(xs, chunk, -prod);
            acc += (prod - std::floor(prod)) + err;
            acc -= std::floor(acc);
        }
        xs = std::ldexp(xs, 24);
        xs -= std::floor(xs);
    }
    if (neg)
        acc = -acc;
    return acc - std::floor(acc);
}

Orbit orbit(const PolynomialMap& pm, std::int64_t lo, std::int64_t hi)
{
    Orbit o;
    o.lo = lo;
    o.hi = std::max(lo, hi);
    o.values.resize(pm.k());
    for (std::size_t i = 0; i < pm.k(); ++i) {
        const auto c = poly::small_coeffs(pm[i]);
        o.values[i].reserve(o.count());
        for (std::int64_t n = lo + 1; n <= o.hi; ++n)
            o.values[i].push_back(poly::eval_i128(c, n));
    }
    return o;
}

namespace {

std::int64_t half_floor(double N)
{
    return static_cast<std::int64_t>(std::floor(N / 2));
}

}  // namespace

cplx weyl_sum(const Orbit& orb, const std::vector<double>& xi)
{
    if (orb.count() == 0)
        throw std::invalid_argument("weyl_sum: empty summation range");
    if (xi.size() != orb.values.size())
        throw std::invalid_argument("weyl_sum: frequency dimension mismatch");
    cplx s{};
    for (std::size_t n = 0; n < orb.count(); ++n) {
        double phase = 0;
        for (std::size_t i = 0; i < xi.size(); ++i)
            phase += frac_product(xi[i], orb.values[i][n]);
        s += grid::e(phase);
    }
    return s / static_cast<double>(orb.count());
}

cplx weyl_sum(const PolynomialMap& pm, double N, const std::vector<double>& xi)
{
    if (!(N >= 1))
        throw std::invalid_argument("weyl_sum: N must be at least 1");
    return weyl_sum(orbit(pm, half_floor(N), static_cast<std::int64_t>(std::floor(N))), xi);
}

cplx weyl_sum_exact(const PolynomialMap& pm, double N, const std::vector<Fraction>& theta)
{
    if (!(N >= 1))
        throw std::invalid_argument("weyl_sum_exact: N must be at least 1");
    if (theta.size() != pm.k())
        throw std::invalid_argument("weyl_sum_exact: frequency dimension mismatch");
    std::int64_t q = 1;
    for (const auto& t : theta)
        q = std::lcm(q, t.q);
    const std::int64_t lo = half_floor(N);
    const auto hi = static_cast<std::int64_t>(std::floor(N));
    std::vector<std::vector<std::int64_t>> coeffs;
    for (std::size_t i = 0; i < pm.k(); ++i)
        coeffs.push_back(poly::small_coeffs(pm[i]));
    cplx s{};
    for (std::int64_t n = lo + 1; n <= hi; ++n) {
        __int128 num = 0;
        for (std::size_t i = 0; i < pm.k(); ++i) {
            const __int128 v = poly::eval_i128(coeffs[i], n) % q;
            num += v * theta[i].a % q * (q / theta[i].q) % q;
        }
        s += grid::e_ratio128(num, q);
    }
    return s / static_cast<double>(hi - lo);
}

// ---------------------------------------------------------- quadrature

namespace {

constexpr std::array<double, 8> kronrod_x = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                                             0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                                             0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                                             0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kronrod_w = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                                             0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                                             0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                                             0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> gauss_w = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Integrand {
    const PolynomialMap& pm;
    double N;
    const std::vector<double>& xi;
    std::vector<std::vector<double>> coeffs;

    cplx operator()(double t) const
    {
        double phase = 0;
        const double x = N * t;
        for (std::size_t i = 0; i < coeffs.size(); ++i) {
            double v = 0;
            for (auto it = coeffs[i].rbegin(); it != coeffs[i].rend(); ++it)
                v = v * x + *it;
            phase += xi[i] * v;
        }
        return grid::e(phase);
    }
};

void gk15(const Integrand& f, double a, double b, cplx& kronrod, cplx& gauss)
{
    const double c = (a + b) / 2;
    const double h = (b - a) / 2;
    const cplx fc = f(c);
    kronrod = fc * kronrod_w[7];
    gauss = fc * gauss_w[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = h * kronrod_x[static_cast<std::size_t>(j)];
        const cplx sum = f(c - dx) + f(c + dx);
        kronrod += sum * kronrod_w[static_cast<std::size_t>(j)];
        if (j % 2 == 1)
            gauss += sum * gauss_w[static_cast<std::size_t>(j / 2)];
    }
    kronrod *= h;
    gauss *= h;
}

cplx adaptive(const Integrand& f, double a, double b, double tol, int depth, int max_depth)
{
    cplx k, g;
    gk15(f, a, b, k, g);
    if (std::abs(k - g) <= tol)
        return k;
    if (depth >= max_depth)
        throw std::runtime_error("osc_integral: quadrature did not converge");
    const double m = (a + b) / 2;
    return adaptive(f, a, m, tol / 2, depth + 1, max_depth) + adaptive(f, m, b, tol / 2, depth + 1, max_depth);
}

}  // namespace

cplx osc_integral(const PolynomialMap& pm, double N, const std::vector<double>& xi, const QuadratureOptions& opt)
{
    if (xi.size() != pm.k())
        throw std::invalid_argument("osc_integral: frequency dimension mismatch");
    Integrand f{pm, N, xi, {}};
    double slope = 0;   // bound for |phase'| on [1/2, 1]
    for (std::size_t i = 0; i < pm.k(); ++i) {
        std::vector<double> c;
        double bound = 0;
        for (int j = 0; j <= pm[i].degree(); ++j) {
            const double cj = pm[i].coeff(j).convert_to<double>();
            c.push_back(cj);
            if (j > 0)
                bound += j * std::fabs(cj) * std::pow(N, j);
        }
        f.coeffs.push_back(std::move(c));
        slope += std::fabs(xi[i]) * bound;
    }
    // panels short enough that the phase turns by at most a quarter cycle
    const double panels_d = std::ceil(2.0 * slope) + 1;
    if (panels_d > 4e6)
        throw std::invalid_argument("osc_integral: phase too oscillatory for the quadrature guard");
    const auto panels = static_cast<int>(panels_d);
    const double width = 0.5 / panels;
    cplx s{};
    for (int p = 0; p < panels; ++p) {
        const double a = 0.5 + p * width;
        s += adaptive(f, a, a + width, opt.abs_tol / (2.0 * panels), 0, opt.max_depth);
    }
    return 2.0 * s;
}

cplx gauss_sum(const PolynomialMap& pm, const std::vector<Fraction>& theta)
{
    if (theta.size() != pm.k())
        throw std::invalid_argument("gauss_sum: frequency dimension mismatch");
    std::int64_t q = 1;
    for (const auto& t : theta)
        q = std::lcm(q, t.q);
    std::vector<std::vector<std::int64_t>> coeffs;
    for (std::size_t i = 0; i < pm.k(); ++i)
        coeffs.push_back(poly::small_coeffs(pm[i]));
    cplx s{};
    for (std::int64_t n = 1; n <= q; ++n) {
        __int128 num = 0;
        for (std::size_t i = 0; i < pm.k(); ++i) {
            const __int128 v = poly::eval_i128(coeffs[i], n) % q;
            num += v * theta[i].a % q * (q / theta[i].q) % q;
        }
        s += grid::e_ratio128(num, q);
    }
    return s / static_cast<double>(q);
}

double approx_error(const PolynomialMap& pm, double N, const std::vector<double>& xi,
                    const std::vector<Fraction>& theta, const std::vector<double>& M)
{
    if (xi.size() != pm.k() || theta.size() != pm.k() || M.size() != pm.k())
        throw std::invalid_argument("approx_error: dimension mismatch");
    std::vector<double> beta(pm.k());
    for (std::size_t i = 0; i < pm.k(); ++i) {
        const double d = xi[i] - theta[i].value();
        beta[i] = d - std::round(d);
        if (std::fabs(beta[i]) > 1.0 / M[i] * (1 + 1e-12))
            throw std::invalid_argument("approx_error: xi outside the window around theta");
    }
    const cplx lhs = weyl_sum(pm, N, xi);
    const cplx rhs = gauss_sum(pm, theta) * osc_integral(pm, N, beta);
    return std::abs(lhs - rhs);
}

double approx_shape(const PolynomialMap& pm, double N, int l, const std::vector<double>& M)
{
    double worst = 0;
    for (std::size_t i = 0; i < pm.k(); ++i)
        worst = std::max(worst, std::pow(N, pm.degree(i) - 1) / M[i]);
    return std::ldexp(1.0, static_cast<int>(pm.k()) * l) * (worst + 1.0 / N);
}

std::optional<std::int64_t> weyl_rationality_detect(const PolynomialMap& pm, double N,
                                                    const std::vector<double>& xi, double epsilon,
                                                    double C, std::int64_t q_max)
{
    if (xi.size() != pm.k())
        throw std::invalid_argument("weyl_rationality_detect: dimension mismatch");
    const double scale = C * std::pow(epsilon, -C);
    const auto cap = static_cast<std::int64_t>(std::min<double>(static_cast<double>(q_max), std::floor(scale)));
    for (std::int64_t q = 1; q <= cap; ++q) {
        bool ok = true;
        for (std::size_t i = 0; i < pm.k() && ok; ++i) {
            const double v = frac_product(xi[i], q);
            const double dist = std::min(v, 1 - v);
            ok = dist <= scale * std::pow(N, -pm.degree(i));
        }
        if (ok)
            return q;
    }
    return std::nullopt;
}

grid::GridFunction kernel(const grid::GridFunction& multiplier)
{
    return grid::idft(multiplier);
}

std::vector<std::vector<Fraction>> shell_product(const std::vector<int>& levels)
{
    std::vector<std::vector<Fraction>> out{{}};
    for (int l : levels) {
        const auto sh = arcs::shell(l);
        std::vector<std::vector<Fraction>> next;
        for (const auto& prefix : out) {
            for (const auto& f : sh) {
                auto v = prefix;
                v.push_back(f);
                next.push_back(std::move(v));
            }
        }
        out = std::move(next);
    }
    return out;
}

namespace {

// Frequency offsets a/M - c with |a/M - c| <= r, as (index, offset) pairs.
std::vector<std::pair<std::int64_t, double>> window(std::int64_t M, const Fraction& c, double r)
{
    std::vector<std::pair<std::int64_t, double>> out;
    if (M % c.q != 0)
        throw std::invalid_argument("frequency " + std::to_string(c.a) + "/" + std::to_string(c.q) +
                                    " is not hosted by the periodic model");
    const std::int64_t base = c.a * (M / c.q);
    const auto reach = static_cast<std::int64_t>(std::floor(std::min(r, 0.5) * static_cast<double>(M)));
    for (std::int64_t d = -reach; d <= reach; ++d) {
        if (2 * d == M)   // keep one representative of the antipode
            continue;
        std::int64_t idx = (base + d) % M;
        if (idx < 0)
            idx += M;
        out.emplace_back(idx, static_cast<double>(d) / static_cast<double>(M));
    }
    return out;
}

}  // namespace

grid::GridFunction model_operator(const std::vector<ModelTerm>& terms, const BlockMultiplier& m,
                                  const std::vector<grid::GridFunction>& fs)
{
    if (fs.empty())
        throw std::invalid_argument("model_operator: no input functions");
    const std::size_t k = fs.size();
    for (const auto& f : fs) {
        if (!f.is_periodic())
            throw std::invalid_argument("model_operator needs periodic inputs");
        if (f.domain() != fs[0].domain())
            throw std::invalid_argument("model_operator: inputs live on different models");
    }
    if (fs[0].dims() != k || m.radius.size() != k)
        throw std::invalid_argument("model_operator: expects k functions on (Z/M)^k");
    for (const auto& t : terms)
        if (t.theta.size() != k)
            throw std::invalid_argument("model_operator: frequency dimension mismatch");
    const grid::Point& M = fs[0].domain().period;

    if (k == 1) {
        std::vector<cplx> mult(static_cast<std::size_t>(M[0]));
        for (const auto& t : terms)
            for (const auto& [idx, off] : window(M[0], t.theta[0], m.radius[0]))
                mult[static_cast<std::size_t>(idx)] += t.weight * m.value({off});
        grid::GridFunction out = fs[0];
        grid::apply_axis_multiplier(out, 0, mult);
        return out;
    }

    const std::size_t cells = fs[0].size();
    if (cells > 4096)
        throw std::invalid_argument("model_operator: multilinear kernel path limited to 4096 cells");
    grid::GridFunction out(fs[0].domain());
    for (const auto& t : terms) {
        // sampled tau_theta m on the frequency lattice, then its kernel
        grid::GridFunction mult(fs[0].domain());
        std::vector<std::vector<std::pair<std::int64_t, double>>> win;
        for (std::size_t i = 0; i < k; ++i)
            win.push_back(window(M[i], t.theta[i], m.radius[i]));
        std::vector<std::size_t> pos(k, 0);
        bool any = std::all_of(win.begin(), win.end(), [](const auto& w) { return !w.empty(); });
        while (any) {
            grid::Point a(k);
            std::vector<double> off(k);
            for (std::size_t i = 0; i < k; ++i) {
                a[i] = win[i][pos[i]].first;
                off[i] = win[i][pos[i]].second;
            }
            mult.values()[mult.index_of(a)] += m.value(off);
            std::size_t i = 0;
            while (i < k && ++pos[i] == win[i].size())
                pos[i++] = 0;
            any = i < k;
        }
        const grid::GridFunction K = kernel(mult);
        for (std::size_t xi = 0; xi < cells; ++xi) {
            const grid::Point x = out.point_of(xi);
            cplx acc{};
            for (std::size_t yi = 0; yi < cells; ++yi) {
                if (K[yi] == cplx{})
                    continue;
                const grid::Point y = K.point_of(yi);
                cplx prod = K[yi];
                for (std::size_t i = 0; i < k && prod != cplx{}; ++i) {
                    grid::Point z = x;
                    z[i] -= y[i];
                    prod *= fs[i].at(z);
                }
                acc += prod;
            }
            out[xi] += t.weight * acc;
        }
    }
    return out;
}

}  // namespace circlelab::expsums
