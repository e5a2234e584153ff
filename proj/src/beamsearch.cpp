// SPDX-License-Identifier: Apache-2.0

#include "uavmm/beamsearch.hpp"
#include "uavmm/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace uavmm {

namespace {

constexpr std::uint64_t kNoiseStream = 0x6E6F697365ULL;
constexpr std::uint64_t kChannelStream = 0x6368616E6EULL;

void check_dims(const CMatrix &h, const Codeword &w_rx, const Codeword &f_tx)
{
    if (w_rx.size() != h.rows() || f_tx.size() != h.cols())
        throw std::domain_error("measure: codeword sizes (" + std::to_string(w_rx.size()) + ", " +
                                std::to_string(f_tx.size()) + ") do not match channel " + std::to_string(h.rows()) +
                                "x" + std::to_string(h.cols()));
}

void check_codebooks(const CMatrix &h, const HierCodebook &cb_bs, const HierCodebook &cb_ms)
{
    if (cb_bs.n_antennas() != h.rows() || cb_ms.n_antennas() != h.cols())
        throw std::domain_error("search: codebook sizes do not match the channel");
}

} // namespace

cplx measure(const CMatrix &h, const Codeword &w_rx, const Codeword &f_tx, const MeasurementModel &model,
             std::uint64_t counter)
{
    check_dims(h, w_rx, f_tx);
    if (model.snr_linear < 0.0)
        throw std::domain_error("measure: snr_linear must be >= 0");

    cplx y = std::sqrt(model.snr_linear) * w_rx.weights.dot(h * f_tx.weights);
    if (!model.noiseless) {
        Rng rng(derive_seed(model.rng_seed ^ kNoiseStream, counter));
        cplx noise(0.0, 0.0);
        for (Eigen::Index i = 0; i < w_rx.weights.size(); ++i) {
            const cplx n = rng.complex_gaussian(1.0);
            noise += std::conj(w_rx.weights[i]) * n;
        }
        y += noise;
    }
    return y;
}

SearchResult exhaustive_search(const CMatrix &h, const HierCodebook &cb_bs, const HierCodebook &cb_ms,
                               const MeasurementModel &model)
{
    check_codebooks(h, cb_bs, cb_ms);
    const auto &bs = cb_bs.layer(cb_bs.depth());
    const auto &ms = cb_ms.layer(cb_ms.depth());

    SearchResult r;
    double best = -1.0;
    std::uint64_t counter = 0;
    for (const auto &w : bs) {
        for (const auto &f : ms) {
            const double p = std::norm(measure(h, w, f, model, counter++));
            if (p > best) {
                best = p;
                r.rx_index = w.index;
                r.tx_index = f.index;
            }
        }
    }
    r.slots_used = static_cast<int>(counter);
    r.layer_trace.push_back({cb_bs.depth(), r.tx_index, r.rx_index});
    return r;
}

SearchResult hierarchical_search(const CMatrix &h, const HierCodebook &cb_bs, const HierCodebook &cb_ms,
                                 const MeasurementModel &model)
{
    check_codebooks(h, cb_bs, cb_ms);
    if (cb_bs.depth() != cb_ms.depth() || cb_bs.branching() != cb_ms.branching())
        throw std::domain_error("hierarchical_search: BS and MS codebooks must have the same depth and branching");

    SearchResult r;
    int rx = 0;
    int tx = 0;
    std::uint64_t counter = 0;
    for (int k = 0; k < cb_bs.depth(); ++k) {
        const auto rx_kids = cb_bs.children(k, rx);
        const auto tx_kids = cb_ms.children(k, tx);
        double best = -1.0;
        int best_rx = rx_kids.front();
        int best_tx = tx_kids.front();
        for (int i : rx_kids) {
            for (int j : tx_kids) {
                const double p = std::norm(measure(h, cb_bs.at(k + 1, i), cb_ms.at(k + 1, j), model, counter++));
                if (p > best) {
                    best = p;
                    best_rx = i;
                    best_tx = j;
                }
            }
        }
        rx = best_rx;
        tx = best_tx;
        r.layer_trace.push_back({k + 1, tx, rx});
    }
    r.rx_index = rx;
    r.tx_index = tx;
    r.slots_used = static_cast<int>(counter);
    return r;
}

long long exhaustive_slots(int n_antennas)
{
    return static_cast<long long>(n_antennas) * n_antennas;
}

long long hierarchical_slots(int n_antennas, int branching)
{
    return static_cast<long long>(branching) * branching * exact_log(n_antennas, branching);
}

std::vector<int> tracking_shortlist(const HierCodebook &cb, int current_index)
{
    const int n = static_cast<int>(cb.layer(cb.depth()).size());
    if (current_index < 0 || current_index >= n)
        throw std::out_of_range("tracking_shortlist: index " + std::to_string(current_index) + " out of range");
    std::vector<int> out;
    for (int i = std::max(0, current_index - 1); i <= std::min(n - 1, current_index + 1); ++i)
        out.push_back(i);
    return out;
}

std::vector<SuccessPoint> success_rate(const SearchScenario &scenario, const std::vector<double> &snr_grid_db,
                                       int trials, std::uint64_t master_seed)
{
    if (trials < 1)
        throw std::domain_error("success_rate: trials must be >= 1");

    const HierCodebook cb = build_codebook(scenario.kind, scenario.n_antennas, scenario.branching);
    const ArrayGeometry geom(scenario.n_antennas);

    std::vector<SuccessPoint> curve;
    curve.reserve(snr_grid_db.size());
    for (double snr_db : snr_grid_db)
        curve.push_back({snr_db, 0.0, trials});

    std::vector<int> hits(snr_grid_db.size(), 0);
    for (int t = 0; t < trials; ++t) {
        const auto mpcs = sample_mpcs(derive_seed(master_seed ^ kChannelStream, static_cast<std::uint64_t>(t)),
                                      scenario.l_paths, scenario.nlos_offset_db);
        const ChannelRealization ch = synth_channel(geom, geom, mpcs, scenario.shared_bs_aoa);
        const int want_rx = nearest_grid_index(ch.mpcs.front().aoa_bs, scenario.n_antennas);
        const int want_tx = nearest_grid_index(ch.mpcs.front().aod_ms, scenario.n_antennas);

        MeasurementModel model;
        model.rng_seed = derive_seed(master_seed, static_cast<std::uint64_t>(t));
        for (std::size_t s = 0; s < snr_grid_db.size(); ++s) {
            model.snr_linear = db_to_linear(snr_grid_db[s]);
            const SearchResult r = hierarchical_search(ch.h, cb, cb, model);
            if (r.rx_index == want_rx && r.tx_index == want_tx)
                ++hits[s];
        }
    }
    for (std::size_t s = 0; s < curve.size(); ++s)
        curve[s].success_rate = static_cast<double>(hits[s]) / trials;
    return curve;
}

} // namespace uavmm
