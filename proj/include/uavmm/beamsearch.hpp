// SPDX-License-Identifier: Apache-2.0

#ifndef UAVMM_BEAMSEARCH_HPP
#define UAVMM_BEAMSEARCH_HPP

#include "uavmm/array_channel.hpp"
#include "uavmm/codebook.hpp"

#include <cstdint>
#include <vector>

namespace uavmm {

// y = sqrt(rho) w^H H f + w^H n with unit-variance complex Gaussian noise per
// BS antenna. The noise of measurement `counter` is drawn from a stream
// seeded by (rng_seed, counter), so any single slot is reproducible.
struct MeasurementModel {
    double snr_linear = 1.0;
    std::uint64_t rng_seed = 0;
    bool noiseless = false;
};

struct LayerStep {
    int layer = 0;
    int tx = 0; // MS codeword index
    int rx = 0; // BS codeword index
};

struct SearchResult {
    int tx_index = 0; // bottom-layer MS codeword
    int rx_index = 0; // bottom-layer BS codeword
    int slots_used = 0;
    std::vector<LayerStep> layer_trace;
};

// w_rx is the BS combiner (rows of H), f_tx the MS beamformer (columns).
cplx measure(const CMatrix &h, const Codeword &w_rx, const Codeword &f_tx, const MeasurementModel &model,
             std::uint64_t counter);

// All N_BS x N_MS bottom-layer pairs, one slot each.
SearchResult exhaustive_search(const CMatrix &h, const HierCodebook &cb_bs, const HierCodebook &cb_ms,
                               const MeasurementModel &model);

// Joint descent: at every layer below the root, all M x M children of the
// current pair are measured and the strongest kept.
SearchResult hierarchical_search(const CMatrix &h, const HierCodebook &cb_bs, const HierCodebook &cb_ms,
                                 const MeasurementModel &model);

long long exhaustive_slots(int n_antennas);
long long hierarchical_slots(int n_antennas, int branching);

// Bottom-layer neighbours {i-1, i, i+1}, saturated at the grid ends.
std::vector<int> tracking_shortlist(const HierCodebook &cb, int current_index);

struct SearchScenario {
    int n_antennas = 32;
    int branching = 2;
    int l_paths = 3;
    double nlos_offset_db = 20.0;
    CodebookKind kind = CodebookKind::bmw_ss;
    bool shared_bs_aoa = false;
};

struct SuccessPoint {
    double snr_db = 0.0;
    double success_rate = 0.0;
    int trials = 0;
};

// Fraction of trials in which hierarchical search lands on the bottom-layer
// pair nearest the LOS angles. Trial t draws its channel and noise from
// seeds derived from (master_seed, t) only, so every SNR point sees the same
// channels and noise realizations.
std::vector<SuccessPoint> success_rate(const SearchScenario &scenario, const std::vector<double> &snr_grid_db,
                                       int trials, std::uint64_t master_seed);

} // namespace uavmm

#endif
