#include "circlelab/improving.hpp"
#include "circlelab/lift.hpp"
#include "circlelab/rng.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace circlelab::improving {

// ------------------------------------------------------------ Vinogradov

namespace {

std::int64_t ipow(std::int64_t b, int e)
{
    std::int64_t v = 1;
    for (int j = 0; j < e; ++j)
        v *= b;
    return v;
}

// Histogram of (sum n, sum n^2, ..., sum n^d) over [N]^s, keyed by a
// mixed-radix code of the shifted power sums.
struct PowerSumHistogram {
    std::vector<std::int64_t> radix;
    std::unordered_map<std::int64_t, std::uint64_t> counts;

    std::int64_t encode(const std::vector<std::int64_t>& v, int s) const
    {
        std::int64_t code = 0;
        for (std::size_t j = v.size(); j-- > 0;) {
            const std::int64_t digit = v[j] - s;   // sum of s positive powers is at least s
            if (digit < 0 || digit >= radix[j])
                return -1;
            code = code * radix[j] + digit;
        }
        return code;
    }
};

PowerSumHistogram histogram(int s, int d, std::int64_t N)
{
    PowerSumHistogram h;
    double cells = 1;
    for (int j = 1; j <= d; ++j) {
        h.radix.push_back(s * (ipow(N, j) - 1) + 1);
        cells *= static_cast<double>(h.radix.back());
    }
    if (cells > 9e18)
        throw std::length_error("vinogradov_count: power sums exceed the key range");
    if (std::pow(static_cast<double>(N), s) > 4e8)
        throw std::length_error("vinogradov_count: N^s exceeds the memory guard");
    std::vector<std::int64_t> n(static_cast<std::size_t>(s), 1);
    std::vector<std::int64_t> sums(static_cast<std::size_t>(d));
    while (true) {
        std::fill(sums.begin(), sums.end(), 0);
        for (auto v : n) {
            std::int64_t p = 1;
            for (int j = 0; j < d; ++j) {
                p *= v;
                sums[static_cast<std::size_t>(j)] += p;
            }
        }
        ++h.counts[h.encode(sums, s)];
        std::size_t i = 0;
        while (i < n.size() && ++n[i] > N)
            n[i++] = 1;
        if (i == n.size())
            break;
    }
    return h;
}

}  // namespace

BigInt vinogradov_count(int s, int d, std::int64_t N, const std::optional<std::vector<std::int64_t>>& xi)
{
    if (s < 1 || d < 1)
        throw std::invalid_argument("vinogradov_count: s and d must be positive");
    if (N < 1)
        return 0;
    if (xi && xi->size() != static_cast<std::size_t>(d))
        throw std::invalid_argument("vinogradov_count: xi must have d entries");
    const PowerSumHistogram h = histogram(s, d, N);
    BigInt total = 0;
    if (!xi) {
        for (const auto& [code, c] : h.counts)
            total += BigInt(c) * c;
        return total;
    }
    // sum n^j - sum m^j = xi_j: pair the histogram with its shift by -xi.
    std::vector<std::int64_t> digits(static_cast<std::size_t>(d));
    for (const auto& [code, c] : h.counts) {
        std::int64_t rest = code;
        std::vector<std::int64_t> sums(static_cast<std::size_t>(d));
        for (std::size_t j = 0; j < sums.size(); ++j) {
            sums[j] = rest % h.radix[j] + s - (*xi)[j];
            rest /= h.radix[j];
        }
        const std::int64_t other = h.encode(sums, s);
        if (other < 0)
            continue;
        const auto it = h.counts.find(other);
        if (it != h.counts.end())
            total += BigInt(c) * it->second;
    }
    return total;
}

VmvtFit vmvt_bound_check(int s, int d, const std::vector<std::int64_t>& N_list, double epsilon)
{
    if (N_list.empty())
        throw std::invalid_argument("vmvt_bound_check: empty N list");
    VmvtFit fit;
    const int crit = d * (d + 1) / 2;
    for (auto N : N_list) {
        const double J = vinogradov_count(s, d, N).convert_to<double>();
        const double Nd = static_cast<double>(N);
        const double base = std::pow(Nd, s) + std::pow(Nd, 2 * s - crit);
        fit.N.push_back(N);
        fit.ratio_free.push_back(J / base);
        fit.ratio_eps.push_back(J / (std::pow(Nd, epsilon) * base));
        fit.C_eps = std::max(fit.C_eps, fit.ratio_eps.back());
    }
    if (s > crit)
        fit.C_free = *std::max_element(fit.ratio_free.begin(), fit.ratio_free.end());
    // least-squares slope of log ratio over the upper half of the list
    const std::size_t from = fit.N.size() / 2;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t m = 0;
    for (std::size_t t = from; t < fit.N.size(); ++t) {
        const double x = std::log(static_cast<double>(fit.N[t]));
        const double y = std::log(fit.ratio_free[t]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++m;
    }
    const double den = static_cast<double>(m) * sxx - sx * sx;
    fit.tail_slope = (m >= 2 && den > 0) ? (static_cast<double>(m) * sxy - sx * sy) / den : 0.0;
    fit.ok = std::isfinite(fit.C_eps) && fit.tail_slope < 0.5;
    return fit;
}

// --------------------------------------------------------- indicator sets

IndicatorSet::IndicatorSet(grid::Domain box) : box_(std::move(box))
{
    if (box_.kind != grid::DomainKind::Box)
        throw std::invalid_argument("IndicatorSet: needs a box");
    bits_.assign(box_.size(), 0);
}

IndicatorSet IndicatorSet::from_function(const grid::GridFunction& f)
{
    IndicatorSet s(f.domain());
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (f[i] == grid::cplx{1, 0}) {
            s.bits_[i] = 1;
            ++s.count_;
        } else if (f[i] != grid::cplx{}) {
            throw std::invalid_argument("IndicatorSet: values must be exactly 0 or 1");
        }
    }
    return s;
}

std::size_t IndicatorSet::index(const grid::Point& x) const
{
    std::size_t idx = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
        idx = idx * static_cast<std::size_t>(box_.hi[i] - box_.lo[i] + 1) + static_cast<std::size_t>(x[i] - box_.lo[i]);
    return idx;
}

bool IndicatorSet::contains(const grid::Point& x) const
{
    if (x.size() != box_.dims())
        throw std::invalid_argument("IndicatorSet: point dimension mismatch");
    if (!box_.contains(x))
        return false;
    return bits_[index(x)] != 0;
}

void IndicatorSet::insert(const grid::Point& x)
{
    if (!box_.contains(x))
        throw std::out_of_range("IndicatorSet: point outside the box");
    auto& b = bits_[index(x)];
    if (!b) {
        b = 1;
        ++count_;
    }
}

void IndicatorSet::erase(const grid::Point& x)
{
    if (!box_.contains(x))
        return;
    auto& b = bits_[index(x)];
    if (b) {
        b = 0;
        --count_;
    }
}

std::vector<grid::Point> IndicatorSet::points() const
{
    std::vector<grid::Point> out;
    out.reserve(count_);
    const grid::GridFunction shape(box_);
    for (std::size_t i = 0; i < bits_.size(); ++i)
        if (bits_[i])
            out.push_back(shape.point_of(i));
    return out;
}

grid::GridFunction IndicatorSet::to_function() const
{
    grid::GridFunction f(box_);
    for (std::size_t i = 0; i < bits_.size(); ++i)
        f[i] = bits_[i] ? 1.0 : 0.0;
    return f;
}

// ----------------------------------------------------------- orbit counts

std::int64_t orbit_count(const std::vector<const IndicatorSet*>& sets,
                         const std::vector<std::vector<grid::Point>>& offsets, const grid::Point& x)
{
    std::int64_t c = 0;
    grid::Point y(x.size());
    for (const auto& per_u : offsets) {
        bool all = true;
        for (std::size_t slot = 0; slot < sets.size() && all; ++slot) {
            for (std::size_t t = 0; t < x.size(); ++t)
                y[t] = x[t] + per_u[slot][t];
            all = sets[slot]->contains(y);
        }
        if (all)
            ++c;
    }
    return c;
}

std::vector<std::vector<grid::Point>> shift_offsets(const PolynomialMap& pm, std::int64_t N)
{
    std::vector<std::vector<std::int64_t>> coeffs;
    for (std::size_t i = 0; i < pm.k(); ++i)
        coeffs.push_back(poly::small_coeffs(pm[i]));
    std::vector<std::vector<grid::Point>> out;
    for (std::int64_t u = 1; u <= N; ++u) {
        std::vector<grid::Point> per(pm.k(), grid::Point(pm.k(), 0));
        for (std::size_t i = 0; i < pm.k(); ++i) {
            const __int128 v = poly::eval_i128(coeffs[i], u);
            if (v > INT64_MAX || v < -INT64_MAX)
                throw std::overflow_error("shift_offsets: polynomial value out of range");
            per[i][i] = -static_cast<std::int64_t>(v);
        }
        out.push_back(std::move(per));
    }
    return out;
}

namespace {

std::vector<grid::Point> curve_points(const PolynomialMap& pm, std::int64_t u)
{
    std::vector<grid::Point> out;
    for (std::size_t i = 0; i < pm.k(); ++i) {
        grid::Point p;
        for (const auto& c : lift::lift_curve(pm, i, u))
            p.push_back(c.convert_to<std::int64_t>());
        out.push_back(std::move(p));
    }
    return out;
}

}  // namespace

std::vector<std::vector<grid::Point>> lifted_offsets(const PolynomialMap& pm, std::int64_t N)
{
    std::vector<std::vector<grid::Point>> out;
    for (std::int64_t u = 1; u <= N; ++u) {
        auto g = curve_points(pm, u);
        for (auto& p : g)
            for (auto& c : p)
                c = -c;
        out.push_back(std::move(g));
    }
    return out;
}

std::vector<std::vector<grid::Point>> lifted_adjoint_offsets(const PolynomialMap& pm, std::int64_t N, std::size_t i)
{
    if (i >= pm.k())
        throw std::out_of_range("lifted_adjoint_offsets: slot out of range");
    std::vector<std::vector<grid::Point>> out;
    for (std::int64_t u = 1; u <= N; ++u) {
        const auto g = curve_points(pm, u);
        std::vector<grid::Point> per;
        for (std::size_t l = 0; l < pm.k(); ++l) {
            grid::Point p = g[i];
            if (l != i)
                for (std::size_t t = 0; t < p.size(); ++t)
                    p[t] -= g[l][t];
            per.push_back(std::move(p));
        }
        out.push_back(std::move(per));
    }
    return out;
}

namespace {

BigInt pairing(const IndicatorSet& target, const std::vector<const IndicatorSet*>& slots,
               const std::vector<std::vector<grid::Point>>& offsets)
{
    BigInt total = 0;
    std::int64_t acc = 0;
    for (const auto& x : target.points()) {
        acc += orbit_count(slots, offsets, x);
        if (acc > (INT64_MAX >> 2)) {
            total += acc;
            acc = 0;
        }
    }
    return total + acc;
}

CornerForm make_form(BigInt count, std::int64_t N)
{
    CornerForm f;
    f.K = Rational(count, BigInt(N));
    f.count = std::move(count);
    return f;
}

void check_sets(const PolynomialMap& pm, const std::vector<IndicatorSet>& E, std::size_t dim)
{
    if (E.size() != pm.k() + 1)
        throw std::invalid_argument("need k + 1 sets E_0, ..., E_k");
    for (const auto& e : E)
        if (e.dims() != dim)
            throw std::invalid_argument("set dimension does not match the operator");
}

}  // namespace

CornerForm corner_form(const PolynomialMap& pm, std::int64_t N, const std::vector<IndicatorSet>& E)
{
    if (N < 1)
        throw std::invalid_argument("corner_form: N must be positive");
    check_sets(pm, E, pm.k());
    std::vector<const IndicatorSet*> slots;
    for (std::size_t i = 1; i < E.size(); ++i)
        slots.push_back(&E[i]);
    return make_form(pairing(E[0], slots, shift_offsets(pm, N)), N);
}

CornerForm lifted_corner_form(const PolynomialMap& pm, std::int64_t N, const std::vector<IndicatorSet>& E)
{
    if (N < 1)
        throw std::invalid_argument("lifted_corner_form: N must be positive");
    check_sets(pm, E, static_cast<std::size_t>(pm.total_degree()));
    std::vector<const IndicatorSet*> slots;
    for (std::size_t i = 1; i < E.size(); ++i)
        slots.push_back(&E[i]);
    return make_form(pairing(E[0], slots, lifted_offsets(pm, N)), N);
}

// ------------------------------------------------------ restricted weak type

int RwtExponents::total() const
{
    int S = 0;
    for (int v : s)
        S += v;
    return S;
}

std::vector<int> RwtExponents::set_exponents(std::size_t k) const
{
    std::vector<int> e(k + 1);
    e[0] = s[j];
    for (std::size_t i = 0; i < k; ++i)
        e[i + 1] = s[i];
    e[j + 1] = total();
    if (k >= 2)
        e[jp + 1] = s[jp] + 1;
    return e;
}

RwtExponents default_exponents(const PolynomialMap& pm)
{
    RwtExponents ex;
    ex.s.assign(pm.k(), pm.lifted_degree());
    ex.j = 0;
    ex.jp = pm.k() >= 2 ? 1 : 0;
    return ex;
}

RwtResult rwt_check(const PolynomialMap& pm, std::int64_t N, const std::vector<IndicatorSet>& E,
                    const RwtExponents& ex)
{
    const std::size_t k = pm.k();
    if (ex.s.size() != k)
        throw std::invalid_argument("rwt_check: need one exponent s_i per component");
    if (ex.j >= k || (k >= 2 && (ex.jp >= k || ex.jp == ex.j)))
        throw std::invalid_argument("rwt_check: j and j' must be distinct components");
    const int Dstar = pm.lifted_degree();
    for (std::size_t i = 0; i < k; ++i) {
        const int d = pm.degree(i);
        const bool ok = ex.integer_relaxation ? 2 * ex.s[i] > d * (d + 2) : ex.s[i] >= Dstar;
        if (!ok)
            throw std::invalid_argument("rwt_check: exponent s_" + std::to_string(i + 1) + " violates the constraint");
    }
    RwtResult res;
    res.K = lifted_corner_form(pm, N, E);
    for (const auto& e : E)
        res.sizes.push_back(e.cardinality());
    const auto ev = ex.set_exponents(k);
    const int S = ex.total();
    int sum_e = 0;
    for (std::size_t i = 1; i < ev.size(); ++i)
        sum_e += ev[i];
    res.N_exponent = -Dstar * (sum_e - 2 * S + ex.s[ex.j]);
    BigInt rhs_sets = 1;
    for (std::size_t i = 0; i < ev.size(); ++i)
        rhs_sets *= boost::multiprecision::pow(BigInt(res.sizes[i]), static_cast<unsigned>(ev[i]));
    if (rhs_sets == 0) {
        res.ratio = 0;
        return res;
    }
    // K^{2S} / (N^{N_exponent} prod |E_i|^{e_i}) with K = count / N
    BigInt num = boost::multiprecision::pow(res.K.count, static_cast<unsigned>(2 * S));
    BigInt den = boost::multiprecision::pow(BigInt(N), static_cast<unsigned>(2 * S)) * rhs_sets;
    const BigInt Npow = boost::multiprecision::pow(BigInt(N), static_cast<unsigned>(std::abs(res.N_exponent)));
    if (res.N_exponent < 0)
        num *= Npow;
    else
        den *= Npow;
    res.ratio = Rational(num, den);
    return res;
}

// ------------------------------------------------------------ refinements

bool Refinement::all_hold() const
{
    return std::all_of(certificates.begin(), certificates.end(), [](const Certificate& c) { return c.holds; });
}

bool Refinement::all_nonempty() const
{
    for (const auto& lvl : levels)
        for (const auto& e : lvl)
            if (e.cardinality() == 0)
                return false;
    return true;
}

Refinement refine(const PolynomialMap& pm, std::int64_t N, const std::vector<IndicatorSet>& E, int levels)
{
    const std::size_t k = pm.k();
    check_sets(pm, E, static_cast<std::size_t>(pm.total_degree()));
    if (levels < 0)
        throw std::invalid_argument("refine: negative level count");
    Refinement out;
    out.K = lifted_corner_form(pm, N, E);
    if (out.K.count == 0)
        throw std::invalid_argument("refine: K = 0, refinements are undefined");
    const BigInt& Kc = out.K.count;
    out.levels.push_back(E);

    const auto forward = lifted_offsets(pm, N);
    std::vector<std::vector<std::vector<grid::Point>>> adjoint;
    for (std::size_t i = 0; i < k; ++i)
        adjoint.push_back(lifted_adjoint_offsets(pm, N, i));

    for (int r = 1; r <= levels; ++r) {
        const auto& prev = out.levels.back();
        std::vector<IndicatorSet> cur = prev;
        for (std::size_t i = 0; i <= k; ++i) {
            const int t = (r - 1) * static_cast<int>(k + 1) + static_cast<int>(i) + 1;
            const BigInt scale = BigInt(1) << t;
            // operator arguments: already refined sets for slots before i, E_0^r in slot i
            std::vector<const IndicatorSet*> slots;
            const std::vector<std::vector<grid::Point>>* offs = nullptr;
            if (i == 0) {
                for (std::size_t l = 1; l <= k; ++l)
                    slots.push_back(&prev[l]);
                offs = &forward;
            } else {
                for (std::size_t l = 1; l <= k; ++l)
                    slots.push_back(l < i ? &cur[l] : (l == i ? &cur[0] : &prev[l]));
                offs = &adjoint[i - 1];
            }
            const BigInt size_i(E[i].cardinality());
            IndicatorSet next = prev[i];
            BigInt kept = 0;
            for (const auto& x : prev[i].points()) {
                const std::int64_t c = orbit_count(slots, *offs, x);
                // A(x) >= c_{r,i} alpha_i  <=>  c 2^t |E_i| >= K count
                if (BigInt(c) * scale * size_i >= Kc)
                    kept += c;
                else
                    next.erase(x);
            }
            Certificate cert;
            cert.r = r;
            cert.i = i;
            cert.c_log2 = t;
            cert.lhs_count = kept;
            cert.K_count = Kc;
            cert.holds = kept * scale >= Kc;
            out.certificates.push_back(std::move(cert));
            cur[i] = std::move(next);
        }
        out.levels.push_back(std::move(cur));
    }
    return out;
}

// ------------------------------------------------------------------ sweep

SweepResult rwt_sweep(const PolynomialMap& pm, std::int64_t N_max, std::size_t families, std::uint64_t seed,
                      int refine_levels)
{
    if (N_max < 2)
        throw std::invalid_argument("rwt_sweep: N_max must be at least 2");
    const auto ex = default_exponents(pm);
    const auto D = static_cast<std::size_t>(pm.total_degree());
    SweepResult out;
    out.max_ratio = 0;
    for (std::size_t f = 0; f < families; ++f) {
        Rng rng(seed, f);
        const std::int64_t N = 2 + static_cast<std::int64_t>(f % static_cast<std::size_t>(N_max - 1));
        // box [0, c N^j] on the j-th coordinate of each block
        grid::Point lo(D, 0), hi(D, 0);
        std::size_t t = 0;
        for (std::size_t i = 0; i < pm.k(); ++i)
            for (int j = 1; j <= pm.degree(i); ++j)
                hi[t++] = rng.integer(1, 2) * ipow(N, j);
        const auto box = grid::Domain::box(lo, hi);
        std::vector<IndicatorSet> E;
        const bool structured = f % 4 == 3;
        for (std::size_t i = 0; i <= pm.k(); ++i) {
            IndicatorSet s(box);
            const grid::GridFunction shape(box);
            if (structured) {
                // a random sub-box
                grid::Point a(D), b(D);
                for (std::size_t c = 0; c < D; ++c) {
                    a[c] = rng.integer(lo[c], hi[c]);
                    b[c] = rng.integer(a[c], hi[c]);
                }
                for (std::size_t idx = 0; idx < shape.size(); ++idx) {
                    const auto x = shape.point_of(idx);
                    bool in = true;
                    for (std::size_t c = 0; c < D && in; ++c)
                        in = x[c] >= a[c] && x[c] <= b[c];
                    if (in)
                        s.insert(x);
                }
            } else {
                const double density = rng.uniform(0.05, 0.95);
                for (std::size_t idx = 0; idx < shape.size(); ++idx)
                    if (rng.bernoulli(density))
                        s.insert(shape.point_of(idx));
            }
            E.push_back(std::move(s));
        }
        const RwtResult r = rwt_check(pm, N, E, ex);
        ++out.families;
        out.ratios.push_back(r.ratio_value());
        if (r.ratio > out.max_ratio) {
            out.max_ratio = r.ratio;
            out.argmax_seed = f;
        }
        if (refine_levels > 0 && r.K.count > 0) {
            const Refinement ref = refine(pm, N, E, refine_levels);
            out.certificates += ref.certificates.size();
            out.certificates_hold = out.certificates_hold && ref.all_hold() && ref.all_nonempty();
        }
    }
    return out;
}

}  // namespace circlelab::improving
