// SPDX-License-Identifier: Apache-2.0

#ifndef UAVMM_SDMA_HPP
#define UAVMM_SDMA_HPP

#include "uavmm/array_channel.hpp"
#include "uavmm/codebook.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace uavmm {

struct UserLink {
    int user_id = 0;
    ChannelRealization channel; // H_u, N_BS x N_MS
    CVector tx_codeword;        // f_u, MS side
    CVector rx_codeword;        // w_u, BS side
    int group_index = 0;        // bottom-layer BS codeword index
};

// Greedy first-fit: a user joins the first slot without its group index.
// Returns user ids per slot.
std::vector<std::vector<int>> group_users(std::span<const UserLink> links);

// H_E[i, j] = w_i^H H_j f_j.
CMatrix effective_channel(std::span<const UserLink> links);

struct SicRates {
    std::vector<double> per_user; // bps/Hz, indexed like the columns of H_E
    double sum = 0.0;
};

// Decoding order used when none is given: descending |H_E[u, u]|.
std::vector<int> default_sic_order(const CMatrix &h_eff);

// MMSE-SIC with per-user SNR rho. Users are decoded in `order` (first entry
// first); each treats the not-yet-decoded users as noise.
SicRates mmse_sic_rates(const CMatrix &h_eff, double snr_linear, std::span<const int> order = {});

// Linear MMSE without cancellation: every other user is interference.
std::vector<double> mmse_rates_no_sic(const CMatrix &h_eff, double snr_linear);

// sum_u log2(1 + rho |H_E[u, u]|^2): interference forced to zero.
double bound_rate(const CMatrix &h_eff, double snr_linear);

struct CapacityParams {
    double bandwidth_hz = 100e6;
    double snr_linear = 1.0;
    int n_users = 1;
};

// U B log2(1 + rho / U), bits/s.
double capacity_mm(const CapacityParams &p);

enum class ExpectationMethod { quadrature, monte_carlo };

// E{U B log2(1 + rho |h|^2 / U)} with h ~ CN(0, 1), bits/s.
double capacity_lf(const CapacityParams &p, ExpectationMethod method = ExpectationMethod::quadrature,
                   std::size_t samples = 1'000'000, std::uint64_t seed = 1);

// Gauss-Laguerre nodes and weights for integrals of e^{-x} f(x) over [0, inf).
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
QuadratureRule gauss_laguerre(int order);

// U users with distinct BS beam groups, codewords found by hierarchical
// search at the working SNR, MMSE-SIC sum rate against the perfect-CSI
// zero-interference bound. Both arrays need the same codebook depth.
struct SdmaScenario {
    int n_bs = 32;
    int n_ms = 32;
    int branching = 2;
    int n_users = 4;
    int l_paths = 3;
    double nlos_offset_db = 20.0;
    int min_group_separation = 1;
    CodebookKind kind = CodebookKind::bmw_ss;
    bool grid_aligned = false; // snap LOS angles to bottom-layer beam centers
};

struct SdmaPoint {
    double snr_db = 0.0;
    double sum_rate = 0.0;   // mean over trials, bps/Hz
    double bound_rate = 0.0; // mean over trials, bps/Hz
    int n_users = 0;
};

std::vector<SdmaPoint> sdma_rate_curve(const SdmaScenario &scenario, const std::vector<double> &snr_grid_db,
                                       int trials, std::uint64_t master_seed);

} // namespace uavmm

#endif
