// SPDX-License-Identifier: Apache-2.0

#include "uavmm/array_channel.hpp"

#include <doctest.h>

#include <Eigen/SVD>

#include <cmath>
#include <complex>
#include <numbers>

using namespace uavmm;

namespace {

cplx steering_element(int n_ant, double spacing, int n, double omega)
{
    const double phase = 2.0 * std::numbers::pi * spacing * n * omega;
    return std::complex<double>(std::cos(phase), std::sin(phase)) / std::sqrt(static_cast<double>(n_ant));
}

} // namespace

TEST_CASE("steering vector matches the per-element formula and has unit norm")
{
    for (int n_ant : {1, 4, 7, 32}) {
        for (double spacing : {0.5, 0.25, 1.0}) {
            for (double omega : {-1.0, -0.37, 0.0, 0.5, 0.999}) {
                const CVector a = steering_vector(ArrayGeometry(n_ant, spacing), omega);
                REQUIRE(a.size() == n_ant);
                for (int n = 0; n < n_ant; ++n)
                    CHECK(std::abs(a[n] - steering_element(n_ant, spacing, n, omega)) < 1e-12);
                CHECK(std::abs(a.norm() - 1.0) < 1e-12);
            }
        }
    }
}

TEST_CASE("invalid geometry and angles are rejected")
{
    CHECK_THROWS_AS(ArrayGeometry(0), std::domain_error);
    CHECK_THROWS_AS(ArrayGeometry(4, 0.0), std::domain_error);
    const ArrayGeometry g(8);
    CHECK_THROWS_AS(steering_vector(g, 1.0), std::domain_error);
    CHECK_THROWS_AS(steering_vector(g, -1.0001), std::domain_error);
    CHECK_THROWS_AS(steering_vector(g, std::nan("")), std::domain_error);
}

TEST_CASE("single-path channel is the scaled outer product")
{
    const ArrayGeometry bs(8), ms(4);
    const Mpc p{cplx(0.3, -0.4), 0.25, -0.6};
    const ChannelRealization ch = synth_channel(bs, ms, std::span<const Mpc>(&p, 1));
    REQUIRE(ch.h.rows() == 8);
    REQUIRE(ch.h.cols() == 4);
    for (int r = 0; r < 8; ++r)
        for (int c = 0; c < 4; ++c) {
            const cplx expect = std::sqrt(32.0) * p.gain * steering_element(8, 0.5, r, 0.25) *
                                std::conj(steering_element(4, 0.5, c, -0.6));
            CHECK(std::abs(ch.h(r, c) - expect) < 1e-12);
        }
}

TEST_CASE("channel rank never exceeds the path count")
{
    const ArrayGeometry bs(16), ms(16);
    for (int l = 1; l <= 4; ++l) {
        const auto mpcs = sample_mpcs(100 + l, l, 20.0);
        const auto ch = synth_channel(bs, ms, mpcs);
        const Eigen::JacobiSVD<CMatrix> svd(ch.h);
        const auto &s = svd.singularValues();
        int rank = 0;
        for (Eigen::Index i = 0; i < s.size(); ++i)
            rank += s[i] > 1e-9 * s[0];
        CHECK(rank <= l);
    }
}

TEST_CASE("shared arrival angle copies the first path's angle")
{
    const ArrayGeometry bs(8), ms(8);
    auto mpcs = sample_mpcs(5, 3, 10.0);
    const auto shared = synth_channel(bs, ms, mpcs, true);
    for (auto &m : mpcs)
        m.aoa_bs = mpcs.front().aoa_bs;
    const auto manual = synth_channel(bs, ms, mpcs);
    CHECK((shared.h - manual.h).norm() < 1e-12);
}

TEST_CASE("sampled paths: unit LOS, NLOS power offset, determinism")
{
    const auto a = sample_mpcs(77, 3, 20.0);
    const auto b = sample_mpcs(77, 3, 20.0);
    REQUIRE(a.size() == 3);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].gain == b[i].gain);
        CHECK(a[i].aoa_bs == b[i].aoa_bs);
        CHECK(a[i].aoa_bs >= -1.0);
        CHECK(a[i].aoa_bs < 1.0);
        CHECK(a[i].aod_ms >= -1.0);
        CHECK(a[i].aod_ms < 1.0);
    }
    CHECK(std::abs(std::abs(a[0].gain) - 1.0) < 1e-12);

    double power = 0.0;
    const int draws = 20000;
    for (int s = 0; s < draws; ++s)
        power += std::norm(sample_mpcs(static_cast<std::uint64_t>(s), 2, 20.0)[1].gain);
    CHECK(std::abs(power / draws - 0.01) < 0.0005);
}

TEST_CASE("nearest grid index agrees with a linear scan of the slices")
{
    for (int n : {4, 8, 32}) {
        for (int i = 0; i <= 997; ++i) {
            const double omega = -1.0 + 2.0 * i / 998.0;
            int expect = -1;
            for (int g = 0; g < n; ++g)
                if (omega >= -1.0 + 2.0 * g / n && omega < -1.0 + 2.0 * (g + 1) / n)
                    expect = g;
            CHECK(nearest_grid_index(omega, n) == expect);
        }
    }
}

TEST_CASE("Doppler spread and coherence time")
{
    const MobilityParams m{20.0, 0.005, std::numbers::pi / 3};
    CHECK(doppler_spread_hz(m) == doctest::Approx(2000.0).epsilon(1e-12));
    CHECK(coherence_time_s(m) == doctest::Approx(0.5e-3).epsilon(1e-12));
    CHECK(doppler_spread_hz(m) * coherence_time_s(m) == doctest::Approx(1.0));

    const MobilityParams perp{20.0, 0.005, std::numbers::pi / 2};
    CHECK(std::isinf(coherence_time_s(perp)));
    CHECK(doppler_spread_hz(perp) == 0.0);

    const MobilityParams still{0.0, 0.005, 0.0};
    CHECK(std::isinf(coherence_time_s(still)));
}

TEST_CASE("link budget terms")
{
    const double c = 299792458.0;
    const double fspl = 20.0 * std::log10(4.0 * std::numbers::pi * 1000.0 * 30e9 / c);
    CHECK(free_space_path_loss_db(30e9, 1000.0) == doctest::Approx(fspl).epsilon(1e-12));
    CHECK(noise_power_dbm(100e6, 5.0) == doctest::Approx(-89.0).epsilon(1e-12));

    LinkBudget lb;
    CHECK(friis_rx_snr_db(lb) == doctest::Approx(30.0 + 24.0 + 12.0 - fspl + 89.0).epsilon(1e-12));
    lb.distance_m = 2000.0;
    CHECK(friis_rx_snr_db(LinkBudget{}) - friis_rx_snr_db(lb) == doctest::Approx(20.0 * std::log10(2.0)));
    CHECK(db_to_linear(linear_to_db(3.7)) == doctest::Approx(3.7));
}
