// SPDX-License-Identifier: Apache-2.0

#include "uavmm/rng.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace uavmm {

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index)
{
    std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double Rng::uniform()
{
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::gaussian()
{
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0)
        u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(t);
    has_spare_ = true;
    return r * std::cos(t);
}

std::complex<double> Rng::complex_gaussian(double variance)
{
    const double s = std::sqrt(variance / 2.0);
    const double re = gaussian();
    const double im = gaussian();
    return {s * re, s * im};
}

std::uint64_t Rng::below(std::uint64_t n)
{
    if (n == 0)
        throw std::invalid_argument("Rng::below: n must be positive");
    // Rejection sampling keeps the result unbiased.
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x = engine_();
    while (x >= limit)
        x = engine_();
    return x % n;
}

} // namespace uavmm
