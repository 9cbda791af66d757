#include "circlelab/rng.hpp"

#include <cmath>
#include <numbers>

namespace circlelab {

std::uint64_t mix64(std::uint64_t z)
{
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

Rng::Rng(std::uint64_t seed, std::uint64_t stream)
    : key_(mix64(seed + 0x9e3779b97f4a7c15ULL) ^ mix64(stream * 0xd1b54a32d192ed03ULL + 1))
{
}

Rng Rng::split(std::uint64_t stream) const
{
    Rng r(0);
    r.key_ = mix64(key_ ^ mix64(stream + 0x632be59bd9b4e019ULL));
    return r;
}

std::uint64_t Rng::next()
{
    return mix64(key_ + (counter_++) * 0x9e3779b97f4a7c15ULL);
}

double Rng::uniform()
{
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi)
{
    return lo + (hi - lo) * uniform();
}

std::int64_t Rng::integer(std::int64_t lo, std::int64_t hi)
{
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    if (span == 0)
        return static_cast<std::int64_t>(next());
    // rejection keeps the draw unbiased
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    std::uint64_t v;
    do {
        v = next();
    } while (v >= limit);
    return lo + static_cast<std::int64_t>(v % span);
}

bool Rng::bernoulli(double p)
{
    return uniform() < p;
}

double Rng::normal()
{
    double u1 = uniform();
    while (u1 <= 0.0)
        u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::complex<double> Rng::complex_normal()
{
    const double re = normal();
    const double im = normal();
    return {re * std::numbers::sqrt2 / 2, im * std::numbers::sqrt2 / 2};
}

std::complex<double> Rng::unit_disc()
{
    const double r = std::sqrt(uniform());
    const double t = 2.0 * std::numbers::pi * uniform();
    return std::polar(r, t);
}

}  // namespace circlelab
