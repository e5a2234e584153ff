// SPDX-License-Identifier: Apache-2.0

#include "oracles.hpp"
#include "uavmm/rng.hpp"
#include "uavmm/sdma.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>

using namespace uavmm;

namespace {

CMatrix random_matrix(Rng &rng, int u)
{
    CMatrix h(u, u);
    for (int i = 0; i < u; ++i)
        for (int j = 0; j < u; ++j)
            h(i, j) = rng.complex_gaussian();
    return h;
}

// log2 det(I + rho H H^H) from the eigenvalues of H H^H.
double logdet_oracle(const CMatrix &h, double rho)
{
    const Eigen::SelfAdjointEigenSolver<CMatrix> es(h * h.adjoint());
    double r = 0.0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
        r += std::log2(1.0 + rho * std::max(es.eigenvalues()[i], 0.0));
    return r;
}

std::vector<std::vector<int>> first_fit_oracle(const std::vector<int> &groups)
{
    std::vector<std::vector<int>> slots;
    for (int u = 0; u < static_cast<int>(groups.size()); ++u) {
        bool placed = false;
        for (auto &slot : slots) {
            bool clash = false;
            for (int other : slot)
                clash = clash || groups[static_cast<std::size_t>(other)] == groups[static_cast<std::size_t>(u)];
            if (!clash) {
                slot.push_back(u);
                placed = true;
                break;
            }
        }
        if (!placed)
            slots.push_back({u});
    }
    return slots;
}

} // namespace

TEST_CASE("MMSE-SIC sum rate equals log det and ignores decoding order")
{
    Rng rng(2024);
    for (int u : {2, 4, 8}) {
        for (int trial = 0; trial < 100; ++trial) {
            const CMatrix h = random_matrix(rng, u);
            const double rho = std::pow(10.0, rng.uniform(-2.0, 3.0));
            const SicRates base = mmse_sic_rates(h, rho);
            CHECK(std::abs(base.sum - logdet_oracle(h, rho)) < 1e-9);
            CHECK(std::accumulate(base.per_user.begin(), base.per_user.end(), 0.0) ==
                  doctest::Approx(base.sum).epsilon(1e-12));

            std::vector<int> order(static_cast<std::size_t>(u));
            std::iota(order.begin(), order.end(), 0);
            for (std::size_t i = order.size() - 1; i > 0; --i)
                std::swap(order[i], order[rng.below(i + 1)]);
            CHECK(std::abs(mmse_sic_rates(h, rho, order).sum - base.sum) < 1e-9);

            // Hadamard: det(I + rho H H^H) <= prod_u (1 + rho |row_u|^2).
            double hadamard = 0.0;
            for (int r = 0; r < u; ++r)
                hadamard += std::log2(1.0 + rho * h.row(r).squaredNorm());
            CHECK(base.sum <= hadamard + 1e-9);

            const auto no_sic = mmse_rates_no_sic(h, rho);
            CHECK(std::accumulate(no_sic.begin(), no_sic.end(), 0.0) <= base.sum + 1e-9);
        }
    }
}

TEST_CASE("last-decoded user sees no interference")
{
    Rng rng(7);
    const CMatrix h = random_matrix(rng, 4);
    const std::vector<int> order{2, 0, 3, 1};
    const SicRates r = mmse_sic_rates(h, 10.0, order);
    CHECK(r.per_user[1] == doctest::Approx(std::log2(1.0 + 10.0 * h.col(1).squaredNorm())).epsilon(1e-12));
    CHECK_THROWS_AS(mmse_sic_rates(h, 10.0, std::vector<int>{0, 1, 1, 2}), std::domain_error);
}

TEST_CASE("diagonal effective channel: every rate equals the bound")
{
    CMatrix h = CMatrix::Zero(3, 3);
    h(0, 0) = cplx(2.0, 1.0);
    h(1, 1) = cplx(0.0, -0.5);
    h(2, 2) = 3.0;
    const double rho = 4.0;
    CHECK(mmse_sic_rates(h, rho).sum == doctest::Approx(bound_rate(h, rho)).epsilon(1e-12));
    const auto no_sic = mmse_rates_no_sic(h, rho);
    CHECK(std::accumulate(no_sic.begin(), no_sic.end(), 0.0) == doctest::Approx(bound_rate(h, rho)).epsilon(1e-12));
    CHECK(default_sic_order(h) == std::vector<int>{2, 0, 1});
}

TEST_CASE("effective channel entries")
{
    Rng rng(8);
    std::vector<UserLink> links;
    const ArrayGeometry bs(8), ms(4);
    for (int u = 0; u < 3; ++u) {
        UserLink l;
        l.user_id = u;
        l.channel = synth_channel(bs, ms, sample_mpcs(static_cast<std::uint64_t>(u) + 50, 2, 10.0));
        l.tx_codeword = steering_vector(ms, rng.uniform(-1.0, 1.0));
        l.rx_codeword = steering_vector(bs, rng.uniform(-1.0, 1.0));
        links.push_back(l);
    }
    const CMatrix he = effective_channel(links);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            cplx expect = 0.0;
            for (int r = 0; r < 8; ++r)
                for (int c = 0; c < 4; ++c)
                    expect += std::conj(links[static_cast<std::size_t>(i)].rx_codeword[r]) *
                              links[static_cast<std::size_t>(j)].channel.h(r, c) *
                              links[static_cast<std::size_t>(j)].tx_codeword[c];
            CHECK(std::abs(he(i, j) - expect) < 1e-12);
        }
    links[1].tx_codeword = CVector::Ones(5);
    CHECK_THROWS_AS(effective_channel(links), std::domain_error);
}

TEST_CASE("grouping matches a brute-force first fit and never repeats a group in a slot")
{
    Rng rng(31);
    for (int trial = 0; trial < 200; ++trial) {
        const int users = 1 + static_cast<int>(rng.below(10));
        std::vector<int> groups;
        std::vector<UserLink> links;
        for (int u = 0; u < users; ++u) {
            groups.push_back(static_cast<int>(rng.below(4)));
            UserLink l;
            l.user_id = u;
            l.group_index = groups.back();
            links.push_back(l);
        }
        const auto slots = group_users(links);
        CHECK(slots == first_fit_oracle(groups));
        std::size_t total = 0;
        for (const auto &slot : slots) {
            total += slot.size();
            std::vector<int> g;
            for (int id : slot)
                g.push_back(groups[static_cast<std::size_t>(id)]);
            std::sort(g.begin(), g.end());
            CHECK(std::adjacent_find(g.begin(), g.end()) == g.end());
        }
        CHECK(total == static_cast<std::size_t>(users));
    }
}

TEST_CASE("capacity formulas")
{
    CHECK(capacity_mm({100e6, 100.0, 4}) == doctest::Approx(4 * 100e6 * std::log2(26.0)).epsilon(1e-14));
    CHECK_THROWS_AS(capacity_mm({0.0, 1.0, 1}), std::domain_error);
    CHECK_THROWS_AS(capacity_mm({1.0, 1.0, 0}), std::domain_error);

    for (double rho : {1e-3, 0.01, 1.0, 30.0, 1e3, 1e5, 1e7}) {
        for (int u : {1, 4, 8}) {
            const CapacityParams p{5e6, rho, u};
            const double expect = u * 5e6 * test::expected_log1p_exp(rho / u) / std::log(2.0);
            CAPTURE(rho);
            CAPTURE(u);
            CHECK(capacity_lf(p) == doctest::Approx(expect).epsilon(1e-9));
            // Jensen: fading never helps at equal mean SNR.
            CHECK(capacity_lf(p) < capacity_mm(p));
        }
    }
    CHECK(capacity_lf({1.0, 0.0, 1}) == 0.0);
}

TEST_CASE("Monte-Carlo expectation agrees with quadrature")
{
    for (double rho : {1.0, 100.0, 1e4}) {
        const CapacityParams p{1.0, rho, 4};
        const double mc = capacity_lf(p, ExpectationMethod::monte_carlo, 1'000'000, 3);
        CHECK(std::abs(mc / capacity_lf(p) - 1.0) < 0.005);
    }
    CHECK(capacity_lf({1.0, 5.0, 1}, ExpectationMethod::monte_carlo, 1000, 9) ==
          capacity_lf({1.0, 5.0, 1}, ExpectationMethod::monte_carlo, 1000, 9));
}

TEST_CASE("Gauss-Laguerre integrates x^k e^-x exactly")
{
    const QuadratureRule q = gauss_laguerre(10);
    REQUIRE(q.nodes.size() == 10);
    double factorial = 1.0;
    for (int k = 0; k < 20; ++k) {
        if (k > 0)
            factorial *= k;
        double acc = 0.0;
        for (std::size_t i = 0; i < q.nodes.size(); ++i)
            acc += q.weights[i] * std::pow(q.nodes[i], k);
        CHECK(acc == doctest::Approx(factorial).epsilon(1e-9));
    }
    CHECK_THROWS(gauss_laguerre(0));
}

TEST_CASE("SDMA curve: determinism, input checks, slope near the user count")
{
    SdmaScenario sc;
    sc.n_bs = sc.n_ms = 16;
    sc.grid_aligned = true;
    const std::vector<double> snr{30.0, 40.0};
    const auto a = sdma_rate_curve(sc, snr, 10, 3);
    const auto b = sdma_rate_curve(sc, snr, 10, 3);
    REQUIRE(a.size() == 2);
    CHECK(a[1].sum_rate == b[1].sum_rate);
    const double slope = (a[1].sum_rate - a[0].sum_rate) / std::log2(10.0);
    CHECK(slope == doctest::Approx(4.0).epsilon(0.1));

    sc.n_users = 17;
    CHECK_THROWS(sdma_rate_curve(sc, snr, 1, 1));
    sc.n_users = 4;
    sc.min_group_separation = 8;
    CHECK_THROWS(sdma_rate_curve(sc, snr, 1, 1));
}
