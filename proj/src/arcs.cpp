#include "circlelab/arcs.hpp"

#include "circlelab/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace circlelab::arcs {

FareyFraction::FareyFraction(std::int64_t a_, std::int64_t q_)
{
    if (q_ < 1)
        throw std::invalid_argument("fraction denominator must be positive");
    a_ %= q_;
    if (a_ < 0)
        a_ += q_;
    const std::int64_t g = std::gcd(a_, q_);
    a = a_ / g;
    q = q_ / g;
    if (a == 0)
        q = 1;
}

std::strong_ordering FareyFraction::operator<=>(const FareyFraction& o) const
{
    const __int128 lhs = static_cast<__int128>(a) * o.q;
    const __int128 rhs = static_cast<__int128>(o.a) * q;
    if (lhs != rhs)
        return lhs < rhs ? std::strong_ordering::less : std::strong_ordering::greater;
    return q <=> o.q;
}

std::vector<FareyFraction> farey_upto(std::int64_t N)
{
    if (N < 1)
        throw std::invalid_argument("farey_upto: N must be positive");
    // consecutive-terms recurrence, already sorted
    std::vector<FareyFraction> out;
    std::int64_t a = 0, b = 1, c = 1, d = N;
    out.emplace_back(0, 1);
    while (c < d) {
        out.emplace_back(c, d);
        const std::int64_t k = (N + b) / d;
        const std::int64_t nc = k * c - a;
        const std::int64_t nd = k * d - b;
        a = c;
        b = d;
        c = nc;
        d = nd;
    }
    return out;
}

std::vector<FareyFraction> shell(int l)
{
    if (l < 0)
        throw std::invalid_argument("shell: negative level");
    if (l == 0)
        return farey_upto(1);
    const std::int64_t lo = std::int64_t{1} << (l - 1);
    std::vector<FareyFraction> out;
    for (const auto& f : farey_upto(std::int64_t{1} << l))
        if (f.q > lo)
            out.push_back(f);
    return out;
}

std::vector<FareyFraction> shells_upto(int l)
{
    if (l < 0)
        throw std::invalid_argument("shells_upto: negative level");
    return farey_upto(std::int64_t{1} << l);
}

double ArcFamily::half_width() const
{
    return std::ldexp(1.0, width_log2);
}

bool ArcFamily::pairwise_disjoint() const
{
    if (centers.size() <= 1)
        return true;
    if (width_log2 >= -1)
        return false;
    std::vector<FareyFraction> c = centers;
    std::sort(c.begin(), c.end());
    const int shift = -width_log2 - 1;   // gap > 2^(m+1) <=> gap * 2^(-m-1) > 1
    for (std::size_t i = 0; i < c.size(); ++i) {
        const FareyFraction& x = c[i];
        const FareyFraction& y = c[(i + 1) % c.size()];
        __int128 num = static_cast<__int128>(y.a) * x.q - static_cast<__int128>(x.a) * y.q;
        const __int128 den = static_cast<__int128>(x.q) * y.q;
        if (i + 1 == c.size())
            num += den;   // wrap around through 1
        if ((num << shift) <= den)
            return false;
    }
    return true;
}

double torus_distance(double a, double b)
{
    const double d = a - b;
    return std::fabs(d - std::round(d));
}

bool in_major_arcs(double xi, const std::vector<FareyFraction>& centers, double half_width)
{
    for (const auto& c : centers)
        if (torus_distance(xi, c.value()) <= half_width)
            return true;
    return false;
}

bool in_major_arcs(double xi, const ArcFamily& arcs)
{
    return in_major_arcs(xi, arcs.centers, arcs.half_width());
}

double eta(double x)
{
    const double ax = std::fabs(x);
    if (ax <= 0.25)
        return 1.0;
    if (ax >= 0.5)
        return 0.0;
    const double t = (0.5 - ax) / 0.25;
    const double rt = std::exp(-1.0 / t);
    const double rs = std::exp(-1.0 / (1.0 - t));
    return rt / (rt + rs);
}

std::int64_t lcm_upto(std::int64_t n)
{
    std::int64_t l = 1;
    for (std::int64_t q = 2; q <= n; ++q)
        l = std::lcm(l, q);
    return l;
}

std::int64_t lcm_of_denominators(const std::vector<FareyFraction>& centers)
{
    std::int64_t l = 1;
    for (const auto& c : centers)
        l = std::lcm(l, c.q);
    return l;
}

std::vector<grid::cplx> SparseMultiplier::dense() const
{
    std::vector<grid::cplx> out(static_cast<std::size_t>(period));
    for (const auto& [i, v] : entries)
        out[static_cast<std::size_t>(i)] = v;
    return out;
}

double SparseMultiplier::max_value() const
{
    double m = 0;
    for (const auto& [i, v] : entries)
        m = std::max(m, v);
    return m;
}

SparseMultiplier iw_multiplier(std::int64_t M, const std::vector<FareyFraction>& centers, int m)
{
    if (m > -1)
        throw std::invalid_argument("iw_multiplier: width exponent must be negative");
    SparseMultiplier out;
    out.period = M;
    const double W = std::ldexp(static_cast<double>(M), m - 1);   // index half-window
    const auto reach = static_cast<std::int64_t>(std::ceil(W));
    std::vector<std::pair<std::int64_t, double>> raw;
    for (const auto& c : centers) {
        if (M % c.q != 0)
            throw std::invalid_argument("center " + std::to_string(c.a) + "/" + std::to_string(c.q) +
                                        " is not a frequency of the model");
        const std::int64_t base = c.a * (M / c.q);
        for (std::int64_t d = -reach; d <= reach; ++d) {
            const double v = eta(std::ldexp(static_cast<double>(d) / static_cast<double>(M), -m));
            if (v == 0.0)
                continue;
            std::int64_t idx = (base + d) % M;
            if (idx < 0)
                idx += M;
            raw.emplace_back(idx, v);
        }
    }
    std::sort(raw.begin(), raw.end());
    for (const auto& [i, v] : raw) {
        if (!out.entries.empty() && out.entries.back().first == i)
            out.entries.back().second += v;
        else
            out.entries.emplace_back(i, v);
    }
    return out;
}

grid::GridFunction iw_project(const grid::GridFunction& f, std::size_t axis,
                              const std::vector<FareyFraction>& centers, int m)
{
    if (!f.is_periodic())
        throw std::invalid_argument("iw_project needs a periodic domain");
    if (axis >= f.dims())
        throw std::out_of_range("iw_project: axis out of range");
    const auto mult = iw_multiplier(f.domain().period[axis], centers, m);
    grid::GridFunction out = f;
    grid::apply_axis_multiplier(out, axis, mult.dense());
    return out;
}

std::int64_t iw_model_size(const std::vector<FareyFraction>& centers, int m)
{
    const std::int64_t L = lcm_of_denominators(centers);
    const int a = std::max(0, 2 - m);
    if (a > 40)
        throw std::invalid_argument("iw_model_size: width too small for a desk-scale model");
    return L << a;
}

ProbeResult iw_opnorm_probe(const std::vector<FareyFraction>& centers, int m, double p, int trials,
                            std::uint64_t seed, std::optional<std::int64_t> model)
{
    if (trials < 1)
        throw std::invalid_argument("probe needs at least one trial");
    ProbeResult r;
    r.model = model ? *model : iw_model_size(centers, m);
    r.ncenters = centers.size();
    const auto mult = iw_multiplier(r.model, centers, m).dense();
    Rng root(seed);
    for (int t = 0; t < trials; ++t) {
        Rng rng = root.split(static_cast<std::uint64_t>(t));
        grid::GridFunction f(grid::Domain::periodic({r.model}));
        for (auto& v : f.values())
            v = rng.complex_normal();
        grid::GridFunction g = f;
        grid::apply_axis_multiplier(g, 0, mult);
        const double ratio = grid::lp_norm(g, p) / grid::lp_norm(f, p);
        r.estimate = std::max(r.estimate, ratio);
        r.running_max.push_back(r.estimate);
    }
    return r;
}

std::int64_t lifted_composite(std::int64_t q, std::int64_t N)
{
    if (q < 1 || q > N)
        throw std::invalid_argument("lifted_composite needs 1 <= q <= N");
    auto top_power = [N](std::int64_t p) {
        std::int64_t pw = 1;
        while (pw <= N / p)
            pw *= p;
        return pw;
    };
    std::int64_t out = 1;
    std::int64_t rest = q;
    for (std::int64_t p = 2; p * p <= rest; ++p) {
        if (rest % p != 0)
            continue;
        while (rest % p == 0)
            rest /= p;
        out *= top_power(p);
    }
    if (rest > 1)
        out *= top_power(rest);
    return out;
}

std::int64_t divisor_count_upto(std::int64_t q, std::int64_t N)
{
    if (q < 1)
        throw std::invalid_argument("divisor_count_upto needs q >= 1");
    std::int64_t count = 0;
    for (std::int64_t d = 1; d * d <= q; ++d) {
        if (q % d != 0)
            continue;
        if (d <= N)
            ++count;
        const std::int64_t e = q / d;
        if (e != d && e <= N)
            ++count;
    }
    return count;
}

int log2_floor(double N)
{
    if (!(N >= 1))
        throw std::invalid_argument("log2_floor needs N >= 1");
    return std::ilogb(N);
}

double shell_bump(double xi, int s, double N, int d)
{
    if (s < 0)
        throw std::invalid_argument("shell_bump: s must be nonnegative");
    const int L = log2_floor(N);
    if (s == 0)
        return eta(std::ldexp(xi, d * L));
    return eta(std::ldexp(xi, d * (L - s))) - eta(std::ldexp(xi, d * (L - s + 1)));
}

std::function<double(double)> shell_bump_fn(int s, double N, int d)
{
    return [=](double xi) { return shell_bump(xi, s, N, d); };
}

}  // namespace circlelab::arcs
