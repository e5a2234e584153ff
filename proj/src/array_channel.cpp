// SPDX-License-Identifier: Apache-2.0

#include "uavmm/array_channel.hpp"
#include "uavmm/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace uavmm {

namespace {

constexpr double kPi = std::numbers::pi;

// Motion perpendicular to the link: cos(pi/2) evaluates to ~6e-17, not 0.
constexpr double kPerpendicularCos = 1e-12;

void check_link_budget(const LinkBudget &lb)
{
    if (!(lb.carrier_hz > 0.0))
        throw std::domain_error("link budget: carrier_hz must be > 0");
    if (!(lb.distance_m > 0.0))
        throw std::domain_error("link budget: distance_m must be > 0");
    if (!(lb.bandwidth_hz > 0.0))
        throw std::domain_error("link budget: bandwidth_hz must be > 0");
}

double radial_speed(const MobilityParams &m)
{
    if (!(m.wavelength_m > 0.0))
        throw std::domain_error("mobility: wavelength_m must be > 0");
    if (m.speed_mps < 0.0)
        throw std::domain_error("mobility: speed_mps must be >= 0");
    const double c = std::abs(std::cos(m.angle_rad));
    return c < kPerpendicularCos ? 0.0 : m.speed_mps * c;
}

} // namespace

ArrayGeometry::ArrayGeometry(int n, double spacing) : n_elements(n), spacing_wavelengths(spacing)
{
    if (n < 1)
        throw std::domain_error("array: n_elements must be >= 1");
    if (!(spacing > 0.0))
        throw std::domain_error("array: spacing_wavelengths must be > 0");
}

void check_normalized_angle(double omega, const char *what)
{
    if (!(omega >= -1.0 && omega < 1.0))
        throw std::domain_error(std::string(what) + ": normalized angle " + std::to_string(omega) +
                                " outside [-1, 1)");
}

CVector steering_vector(const ArrayGeometry &geom, double omega)
{
    check_normalized_angle(omega, "steering_vector");
    const int n = geom.n_elements;
    const double amp = 1.0 / std::sqrt(static_cast<double>(n));
    CVector a(n);
    for (int i = 0; i < n; ++i)
        a[i] = std::polar(amp, 2.0 * kPi * geom.spacing_wavelengths * i * omega);
    return a;
}

ChannelRealization synth_channel(const ArrayGeometry &bs, const ArrayGeometry &ms,
                                 std::span<const Mpc> mpcs, bool shared_bs_aoa)
{
    if (mpcs.empty())
        throw std::domain_error("synth_channel: MPC list is empty");

    ChannelRealization out;
    out.mpcs.assign(mpcs.begin(), mpcs.end());
    if (shared_bs_aoa)
        for (auto &p : out.mpcs)
            p.aoa_bs = mpcs.front().aoa_bs;

    const double scale = std::sqrt(static_cast<double>(bs.n_elements) * ms.n_elements);
    out.h = CMatrix::Zero(bs.n_elements, ms.n_elements);
    for (const auto &p : out.mpcs) {
        const CVector a_bs = steering_vector(bs, p.aoa_bs);
        const CVector a_ms = steering_vector(ms, p.aod_ms);
        out.h.noalias() += (scale * p.gain) * a_bs * a_ms.adjoint();
    }
    return out;
}

std::vector<Mpc> sample_mpcs(std::uint64_t seed, int l_paths, double nlos_power_offset_db)
{
    if (l_paths < 1)
        throw std::domain_error("sample_mpcs: l_paths must be >= 1");

    Rng rng(seed);
    std::vector<Mpc> mpcs(static_cast<std::size_t>(l_paths));
    const double nlos_power = db_to_linear(-nlos_power_offset_db);
    for (int l = 0; l < l_paths; ++l) {
        Mpc &p = mpcs[static_cast<std::size_t>(l)];
        if (l == 0)
            p.gain = std::polar(1.0, rng.uniform(0.0, 2.0 * kPi));
        else
            p.gain = rng.complex_gaussian(nlos_power);
        p.aoa_bs = rng.uniform(-1.0, 1.0);
        p.aod_ms = rng.uniform(-1.0, 1.0);
    }
    return mpcs;
}

int nearest_grid_index(double omega, int n_beams)
{
    check_normalized_angle(omega, "nearest_grid_index");
    const int idx = static_cast<int>(std::floor((omega + 1.0) * n_beams / 2.0));
    return std::clamp(idx, 0, n_beams - 1);
}

double coherence_time_s(const MobilityParams &m)
{
    const double v = radial_speed(m);
    if (v == 0.0)
        return std::numeric_limits<double>::infinity();
    return m.wavelength_m / v;
}

double doppler_spread_hz(const MobilityParams &m)
{
    return radial_speed(m) / m.wavelength_m;
}

double free_space_path_loss_db(double carrier_hz, double distance_m)
{
    return 20.0 * std::log10(4.0 * kPi * distance_m * carrier_hz / kSpeedOfLight);
}

double noise_power_dbm(double bandwidth_hz, double noise_figure_db)
{
    return kThermalNoiseDbmPerHz + 10.0 * std::log10(bandwidth_hz) + noise_figure_db;
}

double friis_rx_snr_db(const LinkBudget &lb)
{
    check_link_budget(lb);
    return lb.tx_power_dbm + lb.tx_array_gain_db + lb.rx_array_gain_db -
           free_space_path_loss_db(lb.carrier_hz, lb.distance_m) -
           noise_power_dbm(lb.bandwidth_hz, lb.noise_figure_db);
}

} // namespace uavmm
