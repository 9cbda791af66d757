// Counter-based random numbers. Every sweep threads an explicit Rng; streams
// are split by index so results do not depend on worker scheduling.
#pragma once

#include <complex>
#include <cstdint>

namespace circlelab {

class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

    // Independent generator for sub-task `stream`.
    Rng split(std::uint64_t stream) const;

    std::uint64_t next();
    double uniform();                      // [0,1)
    double uniform(double lo, double hi);
    std::int64_t integer(std::int64_t lo, std::int64_t hi);  // inclusive
    bool bernoulli(double p);
    double normal();
    std::complex<double> complex_normal();
    std::complex<double> unit_disc();      // uniform in |z| <= 1

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

std::uint64_t mix64(std::uint64_t z);

}  // namespace circlelab
