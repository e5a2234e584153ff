// SPDX-License-Identifier: Apache-2.0

#include "uavmm/sdma.hpp"
#include "uavmm/beamsearch.hpp"
#include "uavmm/rng.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace uavmm {

namespace {

constexpr std::uint64_t kUserStream = 0x7573657273ULL;
constexpr std::uint64_t kSearchStream = 0x7365617263ULL;

void check_square(const CMatrix &h_eff, double snr)
{
    if (h_eff.rows() != h_eff.cols())
        throw std::domain_error("effective channel must be square");
    if (snr < 0.0)
        throw std::domain_error("snr must be >= 0");
}

void check_capacity(const CapacityParams &p)
{
    if (!(p.bandwidth_hz > 0.0))
        throw std::domain_error("capacity: bandwidth_hz must be > 0");
    if (p.snr_linear < 0.0)
        throw std::domain_error("capacity: snr_linear must be >= 0");
    if (p.n_users < 1)
        throw std::domain_error("capacity: n_users must be >= 1");
}

// Golub-Welsch: nodes and weights from the symmetric Jacobi matrix.
QuadratureRule golub_welsch(const Eigen::VectorXd &diag, const Eigen::VectorXd &offdiag, double mu0)
{
    const Eigen::Index n = diag.size();
    Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n, n);
    j.diagonal() = diag;
    for (Eigen::Index i = 0; i + 1 < n; ++i)
        j(i, i + 1) = j(i + 1, i) = offdiag[i];
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(j);
    QuadratureRule q;
    for (Eigen::Index i = 0; i < n; ++i) {
        q.nodes.push_back(es.eigenvalues()[i]);
        const double v = es.eigenvectors()(0, i);
        q.weights.push_back(mu0 * v * v);
    }
    return q;
}

QuadratureRule gauss_legendre(int order)
{
    Eigen::VectorXd d = Eigen::VectorXd::Zero(order);
    Eigen::VectorXd e(std::max(order - 1, 0));
    for (int i = 1; i < order; ++i)
        e[i - 1] = i / std::sqrt(4.0 * i * i - 1.0);
    return golub_welsch(d, e, 2.0);
}

// E[ln(1 + a X)] for X ~ Exp(1): Gauss-Legendre on geometrically graded
// panels over [0, 1], shifted Gauss-Laguerre over [1, inf).
double expected_log1p_exponential(double a)
{
    if (a == 0.0)
        return 0.0;
    static const QuadratureRule laguerre = gauss_laguerre(64);
    static const QuadratureRule legendre = gauss_legendre(16);

    auto f = [a](double x) { return std::exp(-x) * std::log1p(a * x); };

    double head = 0.0;
    double hi = 1.0;
    const double floor_x = std::min(1e-3 / a, 1e-3);
    while (hi > floor_x) {
        const double lo = hi / 8.0;
        const double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
        for (std::size_t i = 0; i < legendre.nodes.size(); ++i)
            head += half * legendre.weights[i] * f(mid + half * legendre.nodes[i]);
        hi = lo;
    }
    // Remaining sliver [0, hi]: ln(1 + a x) ~ a x there.
    head += 0.5 * a * hi * hi;

    double tail = 0.0;
    for (std::size_t i = 0; i < laguerre.nodes.size(); ++i)
        tail += laguerre.weights[i] * std::log1p(a * (1.0 + laguerre.nodes[i]));
    tail *= std::exp(-1.0);
    return head + tail;
}

} // namespace

std::vector<std::vector<int>> group_users(std::span<const UserLink> links)
{
    std::vector<std::vector<int>> slots;
    std::vector<std::vector<int>> slot_groups;
    for (const auto &u : links) {
        std::size_t s = 0;
        for (; s < slots.size(); ++s)
            if (std::find(slot_groups[s].begin(), slot_groups[s].end(), u.group_index) == slot_groups[s].end())
                break;
        if (s == slots.size()) {
            slots.emplace_back();
            slot_groups.emplace_back();
        }
        slots[s].push_back(u.user_id);
        slot_groups[s].push_back(u.group_index);
    }
    return slots;
}

CMatrix effective_channel(std::span<const UserLink> links)
{
    const auto u = static_cast<Eigen::Index>(links.size());
    CMatrix he(u, u);
    for (Eigen::Index j = 0; j < u; ++j) {
        const UserLink &lj = links[static_cast<std::size_t>(j)];
        if (lj.tx_codeword.size() != lj.channel.h.cols())
            throw std::domain_error("effective_channel: user " + std::to_string(lj.user_id) +
                                    " MS codeword does not match its channel");
        const CVector hf = lj.channel.h * lj.tx_codeword;
        for (Eigen::Index i = 0; i < u; ++i) {
            const CVector &w = links[static_cast<std::size_t>(i)].rx_codeword;
            if (w.size() != hf.size())
                throw std::domain_error("effective_channel: user " +
                                        std::to_string(links[static_cast<std::size_t>(i)].user_id) +
                                        " BS codeword does not match the BS array");
            he(i, j) = w.dot(hf);
        }
    }
    return he;
}

std::vector<int> default_sic_order(const CMatrix &h_eff)
{
    std::vector<int> order(static_cast<std::size_t>(h_eff.cols()));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return std::abs(h_eff(a, a)) > std::abs(h_eff(b, b)); });
    return order;
}

SicRates mmse_sic_rates(const CMatrix &h_eff, double snr_linear, std::span<const int> order)
{
    check_square(h_eff, snr_linear);
    const Eigen::Index u = h_eff.cols();
    std::vector<int> ord = order.empty() ? default_sic_order(h_eff) : std::vector<int>(order.begin(), order.end());
    {
        std::vector<int> sorted = ord;
        std::sort(sorted.begin(), sorted.end());
        std::vector<int> expect(static_cast<std::size_t>(u));
        std::iota(expect.begin(), expect.end(), 0);
        if (sorted != expect)
            throw std::domain_error("mmse_sic_rates: decoding order must be a permutation of the users");
    }

    SicRates out;
    out.per_user.assign(static_cast<std::size_t>(u), 0.0);
    for (std::size_t t = 0; t < ord.size(); ++t) {
        const int k = ord[t];
        CMatrix cov = CMatrix::Identity(h_eff.rows(), h_eff.rows());
        for (std::size_t r = t + 1; r < ord.size(); ++r) {
            const auto hj = h_eff.col(ord[r]);
            cov.noalias() += snr_linear * hj * hj.adjoint();
        }
        const CVector hk = h_eff.col(k);
        const CVector x = cov.llt().solve(hk);
        const double sinr = snr_linear * std::real(hk.dot(x));
        const double rate = std::log2(1.0 + std::max(sinr, 0.0));
        out.per_user[static_cast<std::size_t>(k)] = rate;
        out.sum += rate;
    }
    return out;
}

std::vector<double> mmse_rates_no_sic(const CMatrix &h_eff, double snr_linear)
{
    check_square(h_eff, snr_linear);
    const Eigen::Index u = h_eff.cols();
    std::vector<double> rates(static_cast<std::size_t>(u));
    for (Eigen::Index k = 0; k < u; ++k) {
        CMatrix cov = CMatrix::Identity(h_eff.rows(), h_eff.rows());
        for (Eigen::Index j = 0; j < u; ++j)
            if (j != k)
                cov.noalias() += snr_linear * h_eff.col(j) * h_eff.col(j).adjoint();
        const CVector hk = h_eff.col(k);
        const double sinr = snr_linear * std::real(hk.dot(cov.llt().solve(hk)));
        rates[static_cast<std::size_t>(k)] = std::log2(1.0 + std::max(sinr, 0.0));
    }
    return rates;
}

double bound_rate(const CMatrix &h_eff, double snr_linear)
{
    check_square(h_eff, snr_linear);
    double r = 0.0;
    for (Eigen::Index u = 0; u < h_eff.cols(); ++u)
        r += std::log2(1.0 + snr_linear * std::norm(h_eff(u, u)));
    return r;
}

double capacity_mm(const CapacityParams &p)
{
    check_capacity(p);
    return p.n_users * p.bandwidth_hz * std::log2(1.0 + p.snr_linear / p.n_users);
}

QuadratureRule gauss_laguerre(int order)
{
    if (order < 1)
        throw std::domain_error("gauss_laguerre: order must be >= 1");
    Eigen::VectorXd d(order), e(std::max(order - 1, 0));
    for (int i = 0; i < order; ++i)
        d[i] = 2.0 * i + 1.0;
    for (int i = 1; i < order; ++i)
        e[i - 1] = i;
    return golub_welsch(d, e, 1.0);
}

double capacity_lf(const CapacityParams &p, ExpectationMethod method, std::size_t samples, std::uint64_t seed)
{
    check_capacity(p);
    const double users = p.n_users;
    const double a = p.snr_linear / users;
    if (method == ExpectationMethod::quadrature)
        return users * p.bandwidth_hz * expected_log1p_exponential(a) / std::log(2.0);

    if (samples == 0)
        throw std::domain_error("capacity_lf: Monte-Carlo needs at least one sample");
    Rng rng(seed);
    double acc = 0.0;
    for (std::size_t i = 0; i < samples; ++i)
        acc += std::log2(1.0 + a * std::norm(rng.complex_gaussian(1.0)));
    return users * p.bandwidth_hz * acc / static_cast<double>(samples);
}

std::vector<SdmaPoint> sdma_rate_curve(const SdmaScenario &sc, const std::vector<double> &snr_grid_db, int trials,
                                       std::uint64_t master_seed)
{
    if (trials < 1)
        throw std::domain_error("sdma: trials must be >= 1");
    if (sc.n_users < 1 || sc.n_users > sc.n_bs)
        throw std::domain_error("sdma: n_users must be in [1, n_bs]");
    if (sc.min_group_separation < 1 || (sc.n_users - 1) * sc.min_group_separation >= sc.n_bs)
        throw std::domain_error("sdma: min_group_separation leaves no room for n_users distinct groups");

    const HierCodebook cb_bs = build_codebook(sc.kind, sc.n_bs, sc.branching);
    const HierCodebook cb_ms = build_codebook(sc.kind, sc.n_ms, sc.branching);
    const ArrayGeometry bs(sc.n_bs), ms(sc.n_ms);

    std::vector<SdmaPoint> curve;
    for (double s : snr_grid_db)
        curve.push_back({s, 0.0, 0.0, sc.n_users});

    for (int t = 0; t < trials; ++t) {
        // Users whose LOS arrival angles fall in separated BS grid beams.
        std::vector<ChannelRealization> chans;
        std::vector<int> los_groups;
        std::uint64_t draw = 0;
        while (static_cast<int>(chans.size()) < sc.n_users) {
            const std::uint64_t seed = derive_seed(derive_seed(master_seed ^ kUserStream, static_cast<std::uint64_t>(t)), draw++);
            auto mpcs = sample_mpcs(seed, sc.l_paths, sc.nlos_offset_db);
            const int g = nearest_grid_index(mpcs.front().aoa_bs, sc.n_bs);
            if (sc.grid_aligned) {
                mpcs.front().aoa_bs = -1.0 + (2.0 * g + 1.0) / sc.n_bs;
                const int h = nearest_grid_index(mpcs.front().aod_ms, sc.n_ms);
                mpcs.front().aod_ms = -1.0 + (2.0 * h + 1.0) / sc.n_ms;
            }
            const bool clash = std::any_of(los_groups.begin(), los_groups.end(),
                                           [&](int o) { return std::abs(o - g) < sc.min_group_separation; });
            if (clash)
                continue;
            los_groups.push_back(g);
            chans.push_back(synth_channel(bs, ms, mpcs));
        }

        // Zero-interference bound with exact steering vectors.
        std::vector<UserLink> ideal;
        for (int u = 0; u < sc.n_users; ++u) {
            const auto &ch = chans[static_cast<std::size_t>(u)];
            ideal.push_back({u, ch, steering_vector(ms, ch.mpcs.front().aod_ms),
                             steering_vector(bs, ch.mpcs.front().aoa_bs), los_groups[static_cast<std::size_t>(u)]});
        }
        const CMatrix he_ideal = effective_channel(ideal);

        for (std::size_t s = 0; s < snr_grid_db.size(); ++s) {
            const double rho = db_to_linear(snr_grid_db[s]);
            std::vector<UserLink> links;
            for (int u = 0; u < sc.n_users; ++u) {
                MeasurementModel model;
                model.snr_linear = rho;
                model.rng_seed = derive_seed(master_seed ^ kSearchStream,
                                             static_cast<std::uint64_t>(t) * 4096u + static_cast<std::uint64_t>(u));
                const auto &ch = chans[static_cast<std::size_t>(u)];
                const SearchResult r = hierarchical_search(ch.h, cb_bs, cb_ms, model);
                links.push_back({u, ch, cb_ms.at(cb_ms.depth(), r.tx_index).weights,
                                 cb_bs.at(cb_bs.depth(), r.rx_index).weights, r.rx_index});
            }

            // Users that collide in a beam group are time-shared.
            const auto slots = group_users(links);
            double rate = 0.0;
            for (const auto &slot : slots) {
                std::vector<UserLink> members;
                for (int id : slot)
                    members.push_back(links[static_cast<std::size_t>(id)]);
                rate += mmse_sic_rates(effective_channel(members), rho).sum;
            }
            curve[s].sum_rate += rate / static_cast<double>(slots.size());
            curve[s].bound_rate += bound_rate(he_ideal, rho);
        }
    }
    for (auto &p : curve) {
        p.sum_rate /= trials;
        p.bound_rate /= trials;
    }
    return curve;
}

} // namespace uavmm
