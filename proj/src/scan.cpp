// Minor-arc scan of a one-dimensional Weyl sum.
//
// With xi = (b + u)/R and x_n = P(n) mod R the sum is
//   X(b) = sum_n w_n e(x_n b / R),   w_n = e(u P(n) / R).
// Writing b = b1 + R2 b2 with R = R1 R2 gives
//   X(b) = sum_{x1 < R1} e(x1 b2 / R1) Y_{b1}(x1),
//   Y_{b1}(x1) = sum_{n : x_n = x1 mod R1} w_n e(x_n b1 / R),
// so each b1 costs one length-R1 FFT.
#include "circlelab/expsums.hpp"
#include "circlelab/rng.hpp"

#include <fftw3.h>

#include <cmath>
#include <stdexcept>

namespace circlelab::expsums {

namespace {

// e(idx / 2^r) from two tables of size 2^ceil(r/2) and 2^floor(r/2).
class PhaseTable {
public:
    explicit PhaseTable(int r) : lo_bits_(r / 2), mask_((std::uint64_t{1} << lo_bits_) - 1), r_(r)
    {
        const int hi_bits = r - lo_bits_;
        lo_.resize(std::size_t{1} << lo_bits_);
        hi_.resize(std::size_t{1} << hi_bits);
        for (std::size_t i = 0; i < lo_.size(); ++i)
            lo_[i] = grid::e(std::ldexp(static_cast<double>(i), -r));
        for (std::size_t i = 0; i < hi_.size(); ++i)
            hi_[i] = grid::e(std::ldexp(static_cast<double>(i), lo_bits_ - r));
    }

    cplx operator()(std::uint64_t idx) const
    {
        idx &= (std::uint64_t{1} << r_) - 1;
        return hi_[idx >> lo_bits_] * lo_[idx & mask_];
    }

private:
    int lo_bits_;
    std::uint64_t mask_;
    int r_;
    std::vector<cplx> lo_, hi_;
};

struct FftBuffer {
    explicit FftBuffer(std::size_t n)
    {
        in = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
        out = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
        std::lock_guard<std::mutex> g(grid::planner_lock());
        plan = fftw_plan_dft_1d(static_cast<int>(n), in, out, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    ~FftBuffer()
    {
        {
            std::lock_guard<std::mutex> g(grid::planner_lock());
            fftw_destroy_plan(plan);
        }
        fftw_free(in);
        fftw_free(out);
    }
    FftBuffer(const FftBuffer&) = delete;
    FftBuffer& operator=(const FftBuffer&) = delete;

    fftw_complex* in = nullptr;
    fftw_complex* out = nullptr;
    fftw_plan plan = nullptr;
};

}  // namespace

ScanResult minor_arc_scan(const poly::IntPolynomial& P, std::int64_t N, double delta, double C,
                          std::int64_t grid_resolution, std::uint64_t seed)
{
    const int d = P.degree();
    if (d < 1)
        throw std::invalid_argument("minor_arc_scan: polynomial must be nonconstant");
    if (N < 2)
        throw std::invalid_argument("minor_arc_scan: N must be at least 2");
    if (!(delta > 0 && delta <= 1))
        throw std::invalid_argument("minor_arc_scan: delta must lie in (0, 1]");
    const double top = 4.0 * std::pow(static_cast<double>(N), d);
    if (static_cast<double>(grid_resolution) < top)
        throw std::invalid_argument("minor_arc_scan: resolution must be at least 4 N^d");
    int r = 2;
    while ((std::int64_t{1} << r) < grid_resolution)
        ++r;
    if (r > 32)
        throw std::invalid_argument("minor_arc_scan: resolution above 2^32 is not supported");
    const std::uint64_t R = std::uint64_t{1} << r;
    const int r1 = (r + 1) / 2;
    const std::uint64_t R1 = std::uint64_t{1} << r1;
    const std::uint64_t R2 = R >> r1;
    const std::uint64_t half = R / 2;

    ScanResult res;
    res.resolution = static_cast<std::int64_t>(R);
    Rng rng(seed);
    res.jitter = rng.uniform();
    const double q_cap = std::pow(delta, -C);
    res.q_max = static_cast<std::int64_t>(std::floor(q_cap + 1e-9));
    res.arc_half_width = q_cap * std::pow(static_cast<double>(N), -d);

    // Major-arc mask over b in [0, R/2].
    std::vector<bool> masked(half + 1, false);
    const double Rd = static_cast<double>(R);
    for (const auto& c : arcs::farey_upto(std::max<std::int64_t>(res.q_max, 1))) {
        const double lo = (c.value() - res.arc_half_width) * Rd - res.jitter;
        const double hi = (c.value() + res.arc_half_width) * Rd - res.jitter;
        const auto b_lo = static_cast<std::int64_t>(std::ceil(lo));
        const auto b_hi = static_cast<std::int64_t>(std::floor(hi));
        if (b_hi - b_lo + 1 >= static_cast<std::int64_t>(R)) {
            std::fill(masked.begin(), masked.end(), true);
            break;
        }
        for (std::int64_t b = b_lo; b <= b_hi; ++b) {
            const auto m = static_cast<std::uint64_t>(((b % static_cast<std::int64_t>(R)) + static_cast<std::int64_t>(R)) %
                                                      static_cast<std::int64_t>(R));
            if (m <= half)
                masked[m] = true;
        }
    }

    // Orbit residues and jitter weights.
    const auto coeffs = poly::small_coeffs(P);
    const std::int64_t lo_n = N / 2;
    const std::size_t count = static_cast<std::size_t>(N - lo_n);
    std::vector<std::uint64_t> xs(count);
    std::vector<cplx> w(count);
    const double u_over_R = res.jitter / Rd;
    for (std::size_t j = 0; j < count; ++j) {
        const __int128 v = poly::eval_i128(coeffs, lo_n + 1 + static_cast<std::int64_t>(j));
        __int128 m = v % static_cast<__int128>(R);
        if (m < 0)
            m += R;
        xs[j] = static_cast<std::uint64_t>(m);
        w[j] = grid::e(frac_product(u_over_R, v));
    }

    const PhaseTable table(r);
    FftBuffer buf(R1);
    auto* in = reinterpret_cast<cplx*>(buf.in);
    const auto* out = reinterpret_cast<const cplx*>(buf.out);
    const double norm = 1.0 / static_cast<double>(count);
    for (std::uint64_t b1 = 0; b1 < R2; ++b1) {
        std::fill(in, in + R1, cplx{});
        for (std::size_t j = 0; j < count; ++j)
            in[xs[j] & (R1 - 1)] += w[j] * table(xs[j] * b1);
        fftw_execute(buf.plan);
        for (std::uint64_t b2 = 0; b2 < R1; ++b2) {
            const std::uint64_t b = b1 + R2 * b2;
            if (b > half)
                break;
            ++res.samples;
            if (masked[b])
                continue;
            ++res.minor_samples;
            const double v = std::abs(out[b2]) * norm;
            if (v > res.sup) {
                res.sup = v;
                res.argmax = (static_cast<double>(b) + res.jitter) / Rd;
            }
        }
    }
    return res;
}

}  // namespace circlelab::expsums
