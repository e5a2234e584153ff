// SPDX-License-Identifier: Apache-2.0

#include "uavmm/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <set>

using namespace uavmm;

TEST_CASE("same seed gives the same stream")
{
    Rng a(42), b(42);
    for (int i = 0; i < 100; ++i) {
        CHECK(a.next_u64() == b.next_u64());
        CHECK(a.gaussian() == b.gaussian());
    }
}

TEST_CASE("derive_seed separates streams")
{
    std::set<std::uint64_t> seen;
    for (std::uint64_t m = 0; m < 20; ++m)
        for (std::uint64_t i = 0; i < 50; ++i)
            seen.insert(derive_seed(m, i));
    CHECK(seen.size() == 1000);
    CHECK(derive_seed(3, 4) == derive_seed(3, 4));
}

TEST_CASE("uniform stays in [0, 1) and below stays in range")
{
    Rng r(1);
    for (int i = 0; i < 10000; ++i) {
        const double u = r.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        CHECK(r.below(7) < 7);
    }
}

TEST_CASE("gaussian and complex gaussian moments")
{
    Rng r(9);
    const int n = 200000;
    double s = 0.0, s2 = 0.0, p = 0.0;
    for (int i = 0; i < n; ++i) {
        const double g = r.gaussian();
        s += g;
        s2 += g * g;
        p += std::norm(r.complex_gaussian(2.0));
    }
    CHECK(std::abs(s / n) < 0.01);
    CHECK(std::abs(s2 / n - 1.0) < 0.02);
    CHECK(std::abs(p / n - 2.0) < 0.03);
}
