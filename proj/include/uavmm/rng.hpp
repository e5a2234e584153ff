// SPDX-License-Identifier: Apache-2.0

#ifndef UAVMM_RNG_HPP
#define UAVMM_RNG_HPP

#include <complex>
#include <cstdint>
#include <random>

namespace uavmm {

// Mixes a master seed with a stream index (trial, user, measurement counter).
// splitmix64 finalizer; the result is platform independent.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

// Seeded mt19937_64 with its own uniform and Gaussian transforms; draws are
// identical across standard library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0, 1) with 53 random bits.
    double uniform();
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Standard normal (Box-Muller, both outputs used).
    double gaussian();

    // Circularly-symmetric complex Gaussian with E|z|^2 = variance.
    std::complex<double> complex_gaussian(double variance = 1.0);

    // Integer uniform in [0, n).
    std::uint64_t below(std::uint64_t n);

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace uavmm

#endif
