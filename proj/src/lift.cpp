#include "circlelab/lift.hpp"

#include <stdexcept>

namespace circlelab::lift {

namespace {

void check_index(const PolynomialMap& pm, std::size_t i)
{
    if (i >= pm.k())
        throw std::out_of_range("lift: component index out of range");
}

std::int64_t ipow(std::int64_t b, int e)
{
    std::int64_t v = 1;
    for (int j = 0; j < e; ++j)
        v *= b;
    return v;
}

std::int64_t floor_div(std::int64_t a, std::int64_t b)
{
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0)))
        --q;
    return q;
}

struct LiftSetup {
    std::vector<std::vector<std::int64_t>> a;   // a[i][j-1] = a^i_j
    grid::Point lo, hi;
};

LiftSetup prepare(const grid::GridFunction& g, const PolynomialMap& pm, const std::vector<std::int64_t>& r,
                  std::int64_t N)
{
    if (!pm.has_zero_constant_terms())
        throw std::invalid_argument("lift_function: polynomials must have zero constant term");
    if (g.is_periodic())
        throw std::invalid_argument("lift_function: g must be supported on a box");
    if (g.dims() != pm.k() || r.size() != pm.k())
        throw std::invalid_argument("lift_function: dimension mismatch");
    if (N < 1)
        throw std::invalid_argument("lift_function: N must be positive");
    LiftSetup s;
    for (std::size_t i = 0; i < pm.k(); ++i) {
        const auto c = poly::small_coeffs(pm[i]);
        std::vector<std::int64_t> ai(c.begin() + 1, c.end());
        const std::int64_t lead = ai.back();
        if (r[i] < 0 || r[i] >= (lead < 0 ? -lead : lead))
            throw std::invalid_argument("lift_function: offset r_i outside [0, |leading coefficient|)");
        const int d = pm.degree(i);
        std::int64_t reach = 0;   // max |sum_{j<d} a_j x_j| over E_i
        for (int j = 1; j < d; ++j) {
            const std::int64_t Nj = ipow(N, j);
            s.lo.push_back(-Nj);
            s.hi.push_back(Nj);
            reach += (ai[static_cast<std::size_t>(j - 1)] < 0 ? -ai[static_cast<std::size_t>(j - 1)]
                                                               : ai[static_cast<std::size_t>(j - 1)]) *
                     Nj;
        }
        const std::int64_t ylo = g.domain().lo[i] - r[i];
        const std::int64_t yhi = g.domain().hi[i] - r[i];
        // a_d x_d = y - r - (lower terms) with y - r in [ylo, yhi]
        std::int64_t t1 = ylo - reach, t2 = yhi + reach;
        if (lead < 0) {
            std::swap(t1, t2);
            t1 = -t1;
            t2 = -t2;
        }
        const std::int64_t alead = lead < 0 ? -lead : lead;
        s.lo.push_back(-floor_div(-t1, alead));
        s.hi.push_back(floor_div(t2, alead));
        s.a.push_back(std::move(ai));
    }
    return s;
}

}  // namespace

std::vector<BigInt> lift_curve(const PolynomialMap& pm, std::size_t i, const BigInt& u)
{
    check_index(pm, i);
    std::vector<BigInt> out(static_cast<std::size_t>(pm.total_degree()), 0);
    const std::size_t off = block_offset(pm, i);
    BigInt power = 1;
    for (int j = 0; j < pm.degree(i); ++j) {
        power *= u;
        out[off + static_cast<std::size_t>(j)] = power;
    }
    return out;
}

std::size_t block_offset(const PolynomialMap& pm, std::size_t i)
{
    check_index(pm, i);
    std::size_t off = 0;
    for (std::size_t l = 0; l < i; ++l)
        off += static_cast<std::size_t>(pm.degree(l));
    return off;
}

std::int64_t block_form(const PolynomialMap& pm, std::size_t i, const grid::Point& x)
{
    const std::size_t off = block_offset(pm, i);
    const auto c = poly::small_coeffs(pm[i]);
    std::int64_t v = 0;
    for (int j = 1; j <= pm.degree(i); ++j)
        v += c[static_cast<std::size_t>(j)] * x[off + static_cast<std::size_t>(j - 1)];
    return v;
}

grid::GridFunction lift_function(const grid::GridFunction& g, const PolynomialMap& pm,
                                 const std::vector<std::int64_t>& r, std::int64_t N)
{
    const LiftSetup s = prepare(g, pm, r, N);
    grid::GridFunction f(grid::Domain::box(s.lo, s.hi));
    grid::Point y(pm.k());
    for (std::size_t idx = 0; idx < f.size(); ++idx) {
        const grid::Point x = f.point_of(idx);
        std::size_t off = 0;
        for (std::size_t i = 0; i < pm.k(); ++i) {
            std::int64_t q = 0;
            for (std::size_t j = 0; j < s.a[i].size(); ++j)
                q += s.a[i][j] * x[off + j];
            y[i] = q + r[i];
            off += s.a[i].size();
        }
        f[idx] = g.at(y);
    }
    return f;
}

std::size_t lift_support_count(const grid::GridFunction& g, const PolynomialMap& pm,
                               const std::vector<std::int64_t>& r, std::int64_t N)
{
    const LiftSetup s = prepare(g, pm, r, N);
    // The blocks decouple except through g, so enumerate x' per block and
    // count the admissible top coordinates for every point of supp g.
    std::vector<std::vector<std::int64_t>> lower;   // per block: all values of sum_{j<d} a_j x_j
    for (std::size_t i = 0; i < pm.k(); ++i) {
        std::vector<std::int64_t> vals{0};
        for (std::size_t j = 0; j + 1 < s.a[i].size(); ++j) {
            const std::int64_t Nj = ipow(N, static_cast<int>(j + 1));
            std::vector<std::int64_t> next;
            next.reserve(vals.size() * static_cast<std::size_t>(2 * Nj + 1));
            for (auto v : vals)
                for (std::int64_t x = -Nj; x <= Nj; ++x)
                    next.push_back(v + s.a[i][j] * x);
            vals = std::move(next);
        }
        lower.push_back(std::move(vals));
    }
    std::size_t total = 0;
    for (std::size_t idx = 0; idx < g.size(); ++idx) {
        if (g[idx] == grid::cplx{})
            continue;
        const grid::Point y = g.point_of(idx);
        std::size_t prod = 1;
        for (std::size_t i = 0; i < pm.k() && prod != 0; ++i) {
            const std::int64_t lead = s.a[i].back();
            std::size_t c = 0;
            for (auto v : lower[i])
                if ((y[i] - r[i] - v) % lead == 0)
                    ++c;
            prod *= c;
        }
        total += prod;
    }
    return total;
}

}  // namespace circlelab::lift
