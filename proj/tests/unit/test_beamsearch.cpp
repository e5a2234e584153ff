// SPDX-License-Identifier: Apache-2.0

#include "uavmm/beamsearch.hpp"

#include <doctest.h>

#include <cmath>

using namespace uavmm;

namespace {

ChannelRealization los_channel(int n, double aoa, double aod)
{
    const Mpc p{cplx(1.0, 0.0), aoa, aod};
    return synth_channel(ArrayGeometry(n), ArrayGeometry(n), std::span<const Mpc>(&p, 1));
}

double center(int n, int g)
{
    return -1.0 + (2.0 * g + 1.0) / n;
}

} // namespace

TEST_CASE("slot formulas")
{
    CHECK(exhaustive_slots(32) == 1024);
    CHECK(hierarchical_slots(16, 2) == 16);
    CHECK(hierarchical_slots(128, 2) == 28);
    CHECK(hierarchical_slots(27, 3) == 27);
    CHECK_THROWS(hierarchical_slots(24, 2));
}

TEST_CASE("noiseless measurement equals the explicit bilinear form")
{
    const auto ch = synth_channel(ArrayGeometry(8), ArrayGeometry(8), sample_mpcs(4, 3, 10.0));
    const HierCodebook cb = build_codebook(CodebookKind::bmw_ss, 8, 2);
    MeasurementModel model;
    model.snr_linear = 2.5;
    model.noiseless = true;
    const Codeword &w = cb.at(1, 1);
    const Codeword &f = cb.at(2, 3);
    cplx expect = 0.0;
    for (int r = 0; r < 8; ++r)
        for (int c = 0; c < 8; ++c)
            expect += std::conj(w.weights[r]) * ch.h(r, c) * f.weights[c];
    expect *= std::sqrt(2.5);
    CHECK(std::abs(measure(ch.h, w, f, model, 0) - expect) < 1e-12);
}

TEST_CASE("measurement noise is reproducible per counter")
{
    const auto ch = los_channel(8, 0.1, -0.2);
    const HierCodebook cb = build_codebook(CodebookKind::deact, 8, 2);
    MeasurementModel model;
    model.snr_linear = 0.0;
    model.rng_seed = 99;
    const cplx a = measure(ch.h, cb.at(3, 0), cb.at(3, 0), model, 5);
    CHECK(a == measure(ch.h, cb.at(3, 0), cb.at(3, 0), model, 5));
    CHECK(a != measure(ch.h, cb.at(3, 0), cb.at(3, 0), model, 6));

    // Pure noise w^H n has variance |w|^2 = 1 for a pencil beam.
    double p = 0.0;
    const int draws = 20000;
    for (int i = 0; i < draws; ++i)
        p += std::norm(measure(ch.h, cb.at(3, 0), cb.at(3, 0), model, static_cast<std::uint64_t>(i)));
    CHECK(std::abs(p / draws - 1.0) < 0.05);
}

TEST_CASE("dimension mismatch is rejected")
{
    const auto ch = los_channel(8, 0.1, -0.2);
    const HierCodebook cb4 = build_codebook(CodebookKind::deact, 4, 2);
    const HierCodebook cb8 = build_codebook(CodebookKind::deact, 8, 2);
    MeasurementModel model;
    CHECK_THROWS_AS(measure(ch.h, cb4.at(0, 0), cb8.at(0, 0), model, 0), std::domain_error);
    CHECK_THROWS(hierarchical_search(ch.h, cb8, build_codebook(CodebookKind::deact, 8, 8), model));
}

TEST_CASE("hierarchical search equals exhaustive search on grid-aligned LOS angles")
{
    for (CodebookKind kind : {CodebookKind::deact, CodebookKind::bmw_ss}) {
        for (int n : {4, 8, 16}) {
            const HierCodebook cb = build_codebook(kind, n, 2);
            MeasurementModel model;
            model.noiseless = true;
            int agree = 0;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    const auto ch = los_channel(n, center(n, i), center(n, j));
                    const SearchResult h = hierarchical_search(ch.h, cb, cb, model);
                    const SearchResult e = exhaustive_search(ch.h, cb, cb, model);
                    CHECK(e.rx_index == i);
                    CHECK(e.tx_index == j);
                    agree += h.rx_index == e.rx_index && h.tx_index == e.tx_index;
                    CHECK(h.slots_used == hierarchical_slots(n, 2));
                    CHECK(e.slots_used == exhaustive_slots(n));
                }
            CAPTURE(to_string(kind));
            CAPTURE(n);
            CHECK(agree == n * n);
        }
    }
}

TEST_CASE("layer trace descends through children")
{
    const HierCodebook cb = build_codebook(CodebookKind::bmw_ss, 16, 2);
    const auto ch = los_channel(16, center(16, 11), center(16, 3));
    MeasurementModel model;
    model.noiseless = true;
    const SearchResult r = hierarchical_search(ch.h, cb, cb, model);
    REQUIRE(r.layer_trace.size() == 4);
    int prev_rx = 0, prev_tx = 0;
    for (const LayerStep &s : r.layer_trace) {
        CHECK(s.rx / 2 == prev_rx);
        CHECK(s.tx / 2 == prev_tx);
        prev_rx = s.rx;
        prev_tx = s.tx;
    }
    CHECK(r.rx_index == 11);
    CHECK(r.tx_index == 3);
}

TEST_CASE("tracking shortlist")
{
    const HierCodebook cb = build_codebook(CodebookKind::deact, 8, 2);
    CHECK(tracking_shortlist(cb, 4) == std::vector<int>{3, 4, 5});
    CHECK(tracking_shortlist(cb, 0) == std::vector<int>{0, 1});
    CHECK(tracking_shortlist(cb, 7) == std::vector<int>{6, 7});
    CHECK_THROWS_AS(tracking_shortlist(cb, 8), std::out_of_range);
}

TEST_CASE("success rate is deterministic and monotone in the limit")
{
    SearchScenario sc;
    sc.n_antennas = 16;
    const auto a = success_rate(sc, {-40.0, 40.0}, 300, 5);
    const auto b = success_rate(sc, {-40.0, 40.0}, 300, 5);
    REQUIRE(a.size() == 2);
    CHECK(a[0].success_rate == b[0].success_rate);
    CHECK(a[1].success_rate == b[1].success_rate);
    CHECK(a[1].success_rate > a[0].success_rate);
    CHECK(a[0].trials == 300);
    CHECK_THROWS(success_rate(sc, {0.0}, 0, 1));
}
