#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace shiftlab {

/// Seedable generator with platform-independent output.
///
/// Engine is std::mt19937_64 (its sequence is fixed by the standard); the
/// uniform and Gaussian transforms are implemented here because the
/// standard distributions are implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    /// Independent stream for trial `index`, derived by SplitMix64 mixing.
    Rng split(std::uint64_t index) const;

    std::uint64_t next_u64();
    double uniform();                          // [0, 1)
    double uniform(double lo, double hi);      // [lo, hi)
    double gaussian();                         // N(0, 1), Box-Muller
    std::complex<double> complex_gaussian();   // re, im independent N(0, 1)
    std::complex<double> uniform_square();     // uniform on [-1,1]^2
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);  // inclusive

    std::uint64_t seed() const noexcept { return seed_; }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace shiftlab
