#include "circlelab/variation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace circlelab::variation {

IndexedSequence IndexedSequence::from_values(std::vector<cplx> values)
{
    IndexedSequence s;
    for (std::size_t i = 0; i < values.size(); ++i)
        s.indices.push_back(static_cast<double>(i));
    s.values = std::move(values);
    return s;
}

IndexedSequence IndexedSequence::from_values(const std::vector<double>& values)
{
    return from_values(std::vector<cplx>(values.begin(), values.end()));
}

void IndexedSequence::validate() const
{
    if (indices.size() != values.size())
        throw std::invalid_argument("IndexedSequence: index and value counts differ");
    for (std::size_t i = 1; i < indices.size(); ++i)
        if (!(indices[i] > indices[i - 1]))
            throw std::invalid_argument("IndexedSequence: indices must be strictly increasing");
}

double variation_seminorm(const std::vector<cplx>& a, double r)
{
    if (!(r >= 1))
        throw std::invalid_argument("variation: r must be at least 1");
    const std::size_t n = a.size();
    if (n <= 1)
        return 0;
    if (std::isinf(r)) {
        double best = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                best = std::max(best, std::abs(a[j] - a[i]));
        return best;
    }
    // best[j]: largest sum of |jump|^r over increasing chains ending at j
    std::vector<double> best(n, 0.0);
    double top = 0;
    for (std::size_t j = 1; j < n; ++j) {
        for (std::size_t i = 0; i < j; ++i)
            best[j] = std::max(best[j], best[i] + std::pow(std::abs(a[j] - a[i]), r));
        top = std::max(top, best[j]);
    }
    return std::pow(top, 1.0 / r);
}

double variation_seminorm(const IndexedSequence& seq, double r)
{
    seq.validate();
    return variation_seminorm(seq.values, r);
}

double variation_norm(const std::vector<cplx>& a, double r)
{
    double sup = 0;
    for (const auto& v : a)
        sup = std::max(sup, std::abs(v));
    return sup + variation_seminorm(a, r);
}

double variation_norm(const IndexedSequence& seq, double r)
{
    seq.validate();
    return variation_norm(seq.values, r);
}

namespace {

double chain_sum(const std::vector<cplx>& a, const std::vector<std::size_t>& idx, double r)
{
    double s = 0;
    for (std::size_t j = 1; j < idx.size(); ++j)
        s += std::pow(std::abs(a[idx[j]] - a[idx[j - 1]]), r);
    return s;
}

}  // namespace

VariationBounds variation_bounds(const std::vector<cplx>& a, double r)
{
    VariationBounds b;
    b.value = variation_seminorm(a, r);
    b.upper = variation_seminorm(a, 1.0);
    if (a.size() <= 1 || std::isinf(r)) {
        b.lower = b.value;
        return b;
    }
    // Drop interior points while that increases the sum.
    std::vector<std::size_t> idx(a.size());
    for (std::size_t i = 0; i < idx.size(); ++i)
        idx[i] = i;
    double cur = chain_sum(a, idx, r);
    bool improved = true;
    while (improved && idx.size() > 2) {
        improved = false;
        for (std::size_t j = 1; j + 1 < idx.size(); ++j) {
            const double before = std::pow(std::abs(a[idx[j]] - a[idx[j - 1]]), r) +
                                  std::pow(std::abs(a[idx[j + 1]] - a[idx[j]]), r);
            const double after = std::pow(std::abs(a[idx[j + 1]] - a[idx[j - 1]]), r);
            if (after > before) {
                cur += after - before;
                idx.erase(idx.begin() + static_cast<std::ptrdiff_t>(j));
                improved = true;
                break;
            }
        }
    }
    // Endpoints may also be worth dropping.
    cur = chain_sum(a, idx, r);
    b.lower = std::min(b.value, std::pow(cur, 1.0 / r));
    return b;
}

RmCheck rm_check(const std::vector<cplx>& a, std::int64_t n0, int m)
{
    if (m < 0 || m > 30)
        throw std::invalid_argument("rm_check: m out of range");
    const std::int64_t top = std::int64_t{1} << m;
    if (n0 < 0 || n0 >= top)
        throw std::invalid_argument("rm_check: need 0 <= n0 < 2^m");
    if (static_cast<std::int64_t>(a.size()) < top + 1)
        throw std::invalid_argument("rm_check: need a_0, ..., a_{2^m}");
    RmCheck out;
    out.lhs = variation_seminorm(std::vector<cplx>(a.begin() + n0, a.begin() + top), 2.0);
    double rhs = 0;
    for (int i = 0; i <= m; ++i) {
        const std::int64_t len = std::int64_t{1} << i;
        double sq = 0;
        for (std::int64_t j = 1; j <= (top >> i); ++j) {
            const std::int64_t lo = (j - 1) * len;
            const std::int64_t hi = j * len;   // U = [lo, hi)
            if (lo < n0 || hi > top)
                continue;
            const cplx jump = a[static_cast<std::size_t>(hi)] - a[static_cast<std::size_t>(lo)];
            sq += std::norm(jump);
        }
        rhs += std::sqrt(sq);
    }
    out.rhs = std::sqrt(2.0) * rhs;
    out.ok = out.lhs <= out.rhs + 1e-9;
    return out;
}

std::vector<std::int64_t> lacunary(double lambda, double start, std::size_t count)
{
    if (!(lambda > 1))
        throw std::invalid_argument("lacunary: lambda must exceed 1");
    if (!(start >= 1))
        throw std::invalid_argument("lacunary: start must be at least 1");
    std::vector<std::int64_t> out;
    double target = start;
    for (std::size_t n = 0; n < count; ++n) {
        auto v = static_cast<std::int64_t>(std::ceil(target - 1e-9 * target));
        if (!out.empty()) {
            const auto prev = static_cast<double>(out.back());
            if (static_cast<double>(v) < lambda * prev)
                v = static_cast<std::int64_t>(std::ceil(lambda * prev));
        }
        if (v <= 0 || (!out.empty() && v <= out.back()))
            throw std::overflow_error("lacunary: sequence left the representable range");
        out.push_back(v);
        target *= lambda;
    }
    return out;
}

std::vector<double> pointwise_variation_norm(const std::vector<grid::GridFunction>& fs, double r)
{
    if (fs.empty())
        return {};
    for (const auto& f : fs)
        if (f.domain() != fs[0].domain())
            throw std::invalid_argument("pointwise_variation_norm: functions on different domains");
    std::vector<double> out(fs[0].size());
    std::vector<cplx> a(fs.size());
    for (std::size_t x = 0; x < out.size(); ++x) {
        for (std::size_t n = 0; n < fs.size(); ++n)
            a[n] = fs[n][x];
        out[x] = variation_norm(a, r);
    }
    return out;
}

// ------------------------------------------------------------------ chain

namespace {

double distance(const grid::GridFunction& f, const grid::GridFunction& g, double p)
{
    double s = 0;
    for (std::size_t x = 0; x < f.size(); ++x)
        s += std::pow(std::abs(f[x] - g[x]), p);
    return std::pow(s, 1.0 / p);
}

}  // namespace

Chain entropy_chain(const std::vector<grid::GridFunction>& fs, double p)
{
    if (!(p >= 1) || std::isinf(p))
        throw std::invalid_argument("entropy_chain: p must lie in [1, infinity)");
    if (fs.empty())
        throw std::invalid_argument("entropy_chain: empty family");
    for (const auto& f : fs)
        if (f.domain() != fs[0].domain())
            throw std::invalid_argument("entropy_chain: functions on different domains");
    const std::size_t n = fs.size();

    Chain c;
    c.p = p;
    double mass = 0;
    for (double v : pointwise_variation_norm(fs, p))
        mass += std::pow(v, p);
    c.vnorm = std::pow(mass, 1.0 / p);

    std::vector<std::vector<double>> dist(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            dist[i][j] = dist[j][i] = distance(fs[i], fs[j], p);

    // Farthest-point order with the covering radius after each prefix.
    std::vector<std::size_t> order{0};
    std::vector<double> radius;
    std::vector<double> near(n);
    for (std::size_t j = 0; j < n; ++j)
        near[j] = dist[0][j];
    while (true) {
        std::size_t far = 0;
        for (std::size_t j = 1; j < n; ++j)
            if (near[j] > near[far])
                far = j;
        radius.push_back(near[far]);
        if (near[far] == 0)
            break;
        order.push_back(far);
        for (std::size_t j = 0; j < n; ++j)
            near[j] = std::min(near[j], dist[far][j]);
    }

    // J_m is the shortest prefix whose covering radius is at most 2^-m vnorm.
    std::size_t prev_size = 0;
    for (int m = 1;; ++m) {
        const double tau = std::ldexp(c.vnorm, -m);
        std::size_t t = 1;
        while (radius[t - 1] > tau)
            ++t;
        ChainLevel lvl;
        lvl.m = m;
        lvl.members.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(t));
        c.levels.push_back(std::move(lvl));
        if (t == order.size() && prev_size == t)
            break;
        prev_size = t;
        if (m > 2000)
            throw std::logic_error("entropy_chain: levels failed to stabilize");
    }
    // pi_m: nearest member of J_m, earliest in the order on ties.
    for (std::size_t l = 0; l + 1 < c.levels.size(); ++l) {
        const auto& here = c.levels[l].members;
        for (std::size_t q : c.levels[l + 1].members) {
            std::size_t best = here[0];
            for (std::size_t cand : here)
                if (dist[q][cand] < dist[q][best])
                    best = cand;
            c.levels[l].parent.push_back(best);
        }
    }
    // Paths: start from the representative at the last level and walk down.
    const auto& last = c.levels.back().members;
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t rep = last[0];
        for (std::size_t cand : last)
            if (dist[i][cand] < dist[i][rep])
                rep = cand;
        std::vector<std::size_t> path(c.levels.size());
        path.back() = rep;
        for (std::size_t l = c.levels.size() - 1; l-- > 0;) {
            const auto& next = c.levels[l + 1].members;
            const auto pos = static_cast<std::size_t>(std::find(next.begin(), next.end(), path[l + 1]) - next.begin());
            path[l] = c.levels[l].parent[pos];
        }
        c.paths.push_back(std::move(path));
    }
    c.telescoping_residual = verify_chain(c, fs);
    return c;
}

double verify_chain(const Chain& c, const std::vector<grid::GridFunction>& fs)
{
    const double slack = 1e-12 * std::max(1.0, c.vnorm);
    for (std::size_t l = 0; l < c.levels.size(); ++l) {
        const auto& lvl = c.levels[l];
        const double bound = c.card_constant * std::pow(2.0, c.p * lvl.m);
        if (static_cast<double>(lvl.members.size()) > bound)
            throw std::logic_error("entropy_chain: level cardinality bound (i) fails");
        if (l + 1 < c.levels.size()) {
            const auto& next = c.levels[l + 1].members;
            if (lvl.parent.size() != next.size())
                throw std::logic_error("entropy_chain: parent map has the wrong size");
            for (std::size_t q = 0; q < next.size(); ++q) {
                if (std::find(lvl.members.begin(), lvl.members.end(), lvl.parent[q]) == lvl.members.end())
                    throw std::logic_error("entropy_chain: parent outside J_m");
                const double d = distance(fs[next[q]], fs[lvl.parent[q]], c.p);
                if (d > c.step_constant * std::ldexp(c.vnorm, -lvl.m) + slack)
                    throw std::logic_error("entropy_chain: step bound (ii) fails");
            }
        }
    }
    double worst = 0;
    for (std::size_t i = 0; i < fs.size(); ++i) {
        const auto& path = c.paths[i];
        if (path.size() != c.levels.size())
            throw std::logic_error("entropy_chain: path length mismatch");
        for (std::size_t l = 0; l + 1 < path.size(); ++l) {
            const auto& next = c.levels[l + 1].members;
            const auto it = std::find(next.begin(), next.end(), path[l + 1]);
            if (it == next.end() || c.levels[l].parent[static_cast<std::size_t>(it - next.begin())] != path[l])
                throw std::logic_error("entropy_chain: path is not compatible with pi_m");
        }
        // the final index must be the one the path stabilizes at
        if (c.levels.size() >= 2 && path[path.size() - 2] != path.back())
            throw std::logic_error("entropy_chain: path does not stabilize");
        grid::GridFunction sum = fs[path[0]];
        for (std::size_t l = 0; l + 1 < path.size(); ++l)
            for (std::size_t x = 0; x < sum.size(); ++x)
                sum[x] += fs[path[l + 1]][x] - fs[path[l]][x];
        worst = std::max(worst, distance(fs[i], sum, c.p));
        if (distance(fs[i], fs[path.back()], c.p) != 0)
            throw std::logic_error("entropy_chain: path ends away from F_n");
    }
    if (worst > 1e-10 * std::max(1.0, c.vnorm))
        throw std::logic_error("entropy_chain: telescoping identity fails");
    return worst;
}

}  // namespace circlelab::variation
