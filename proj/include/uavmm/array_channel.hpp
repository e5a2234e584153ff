// SPDX-License-Identifier: Apache-2.0

#ifndef UAVMM_ARRAY_CHANNEL_HPP
#define UAVMM_ARRAY_CHANNEL_HPP

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace uavmm {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

inline constexpr double kSpeedOfLight = 299792458.0;
inline constexpr double kThermalNoiseDbmPerHz = -174.0;

// Uniform linear array. Angles are normalized spatial angles (cosine of the
// physical angle) in [-1, 1).
struct ArrayGeometry {
    int n_elements = 1;
    double spacing_wavelengths = 0.5;

    ArrayGeometry() = default;
    explicit ArrayGeometry(int n, double spacing = 0.5);
};

// One multipath component: complex gain, arrival angle at the BS array and
// departure angle at the MS array.
struct Mpc {
    cplx gain{1.0, 0.0};
    double aoa_bs = 0.0;
    double aod_ms = 0.0;
};

struct ChannelRealization {
    std::vector<Mpc> mpcs;
    CMatrix h; // N_BS x N_MS

    int n_bs() const { return static_cast<int>(h.rows()); }
    int n_ms() const { return static_cast<int>(h.cols()); }
};

struct MobilityParams {
    double speed_mps = 0.0;
    double wavelength_m = 0.005;
    double angle_rad = 0.0; // between direction of motion and the UAV-MS link
};

struct LinkBudget {
    double carrier_hz = 30e9;
    double distance_m = 1000.0;
    double tx_array_gain_db = 24.0;
    double rx_array_gain_db = 12.0;
    double tx_power_dbm = 30.0;
    double bandwidth_hz = 100e6;
    double noise_figure_db = 5.0;
};

// Throws std::domain_error unless omega lies in [-1, 1).
void check_normalized_angle(double omega, const char *what);

// Element n: exp(i 2 pi d n omega) / sqrt(N).
CVector steering_vector(const ArrayGeometry &geom, double omega);

// H = sqrt(N_BS N_MS) sum_l gain_l a(N_BS, aoa_l) a(N_MS, aod_l)^H.
// With shared_bs_aoa every path uses the first path's arrival angle.
ChannelRealization synth_channel(const ArrayGeometry &bs, const ArrayGeometry &ms,
                                 std::span<const Mpc> mpcs, bool shared_bs_aoa = false);

// First path is LOS (unit magnitude, random phase); the remaining l_paths-1
// paths are Rayleigh with mean power 10^(-offset/10). All angles uniform.
std::vector<Mpc> sample_mpcs(std::uint64_t seed, int l_paths, double nlos_power_offset_db);

// Index of the bottom-layer grid beam nearest to omega for an N-beam grid,
// i.e. the slice [-1 + 2n/N, -1 + 2(n+1)/N) containing omega.
int nearest_grid_index(double omega, int n_beams);

double coherence_time_s(const MobilityParams &m);
double doppler_spread_hz(const MobilityParams &m);

double free_space_path_loss_db(double carrier_hz, double distance_m);
double noise_power_dbm(double bandwidth_hz, double noise_figure_db);
double friis_rx_snr_db(const LinkBudget &lb);

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double x) { return 10.0 * std::log10(x); }

} // namespace uavmm

#endif
