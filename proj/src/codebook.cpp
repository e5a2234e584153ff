// SPDX-License-Identifier: Apache-2.0

#include "uavmm/codebook.hpp"
#include "uavmm/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

namespace uavmm {

namespace {

constexpr double kPi = std::numbers::pi;

// Phase candidates used by the coordinate searches in the BMW-SS builder.
constexpr int kPhaseCandidates = 64;

double db_or_neg_inf(double g)
{
    return g > 0.0 ? 10.0 * std::log10(g) : -std::numeric_limits<double>::infinity();
}

Codeword make_codeword(CVector w, int layer, int index)
{
    Codeword cw;
    cw.active_mask.resize(static_cast<std::size_t>(w.size()));
    for (Eigen::Index i = 0; i < w.size(); ++i)
        cw.active_mask[static_cast<std::size_t>(i)] = w[i] != cplx(0.0, 0.0);
    cw.weights = std::move(w);
    cw.layer = layer;
    cw.index = index;
    return cw;
}

// Multiplies by exp(i pi n omega): shifts the array factor by omega.
CVector steer_to(const CVector &base, double omega)
{
    CVector w(base.size());
    for (Eigen::Index n = 0; n < base.size(); ++n)
        w[n] = base[n] * std::polar(1.0, kPi * static_cast<double>(n) * omega);
    return w;
}

// Array factor sampled on omega_g = -1 + 2g/G. Columns of `basis` are
// exp(-i pi n omega_g).
class PatternGrid {
public:
    PatternGrid(int n, int grid) : basis_(grid, n)
    {
        for (int g = 0; g < grid; ++g) {
            const double om = -1.0 + 2.0 * g / grid;
            for (int i = 0; i < n; ++i)
                basis_(g, i) = std::polar(1.0, -kPi * i * om);
        }
    }

    int size() const { return static_cast<int>(basis_.rows()); }
    CVector af(const CVector &w) const { return basis_ * w; }
    auto column(int n) const { return basis_.col(n); }
    CVector transpose_times(const CVector &v) const { return basis_.transpose() * v; }

private:
    CMatrix basis_;
};

// Score of a layer-k base codeword centred on omega = 0. The pattern repeats
// with period 2, so sibling codewords are grid shifts by `per_slice` points.
// Child containment (the codeword beats every sibling inside its own slice)
// dominates; among containing candidates the larger in-slice minimum wins.
struct Score {
    bool contained = false;
    double value = -std::numeric_limits<double>::infinity();

    bool operator>(const Score &o) const
    {
        if (contained != o.contained)
            return contained;
        return value > o.value * (1.0 + 1e-12) + 1e-15;
    }
};

Score score_pattern(const CVector &af, int n_slices, int per_slice)
{
    const int grid = static_cast<int>(af.size());
    std::vector<double> g(static_cast<std::size_t>(grid));
    for (int i = 0; i < grid; ++i)
        g[static_cast<std::size_t>(i)] = std::norm(af[i]);

    const int first = grid / 2 - per_slice / 2;
    double min_gain = std::numeric_limits<double>::infinity();
    double worst_margin = std::numeric_limits<double>::infinity();
    for (int i = first; i < first + per_slice; ++i) {
        const double own = g[static_cast<std::size_t>(i)];
        min_gain = std::min(min_gain, own);
        for (int j = 1; j < n_slices; ++j) {
            const double other = g[static_cast<std::size_t>((i + j * per_slice) % grid)];
            worst_margin = std::min(worst_margin, own - other);
        }
    }
    // Exact ties at slice boundaries are allowed.
    const double tol = 1e-9 * std::max(1.0, min_gain);
    if (worst_margin >= -tol)
        return {true, min_gain};
    return {false, worst_margin};
}

// Sub-array layout of a widened beam: S contiguous sub-arrays steered to
// sub-slice centres spread symmetrically about 0, with mirrored sub-arrays
// sharing one phase. Weights use the centred index n - (N-1)/2 so that the
// whole vector is palindromic and the pattern symmetric about its centre.
CVector subarray_base(int n, int n_slices, int n_sub, double spread, const std::vector<double> &phases)
{
    const int per_sub = n / n_sub;
    const double step = spread * 2.0 / (static_cast<double>(n_slices) * n_sub);
    const double amp = 1.0 / std::sqrt(static_cast<double>(n));
    CVector w(n);
    for (int s = 0; s < n_sub; ++s) {
        const double offset = (s - 0.5 * (n_sub - 1)) * step;
        for (int i = s * per_sub; i < (s + 1) * per_sub; ++i) {
            const double m = i - 0.5 * (n - 1);
            w[i] = std::polar(amp, kPi * m * offset + phases[static_cast<std::size_t>(s)]);
        }
    }
    return w;
}

int smallest_power_with_square_at_least(int base, int value)
{
    int s = 1;
    while (s * s < value)
        s *= base;
    return s;
}

// Wide codeword for layer 1 <= k < S, centred at omega = 0, all antennas on.
CVector widened_base(int n, int branching, int layer)
{
    int n_slices = 1;
    for (int k = 0; k < layer; ++k)
        n_slices *= branching;
    const int widening = n / n_slices;
    const int n_sub = smallest_power_with_square_at_least(branching, widening);

    int per_slice = std::max(16, (8 * n + n_slices - 1) / n_slices);
    per_slice += per_slice % 2;
    const PatternGrid grid(n, n_slices * per_slice);

    // Mirror groups of sub-arrays whose common phase is free; the outermost
    // pair is the phase reference.
    std::vector<std::pair<int, int>> groups;
    for (int p = 1; p < n_sub / 2; ++p)
        groups.emplace_back(p, n_sub - 1 - p);
    if (n_sub % 2 == 1 && n_sub > 1)
        groups.emplace_back(n_sub / 2, n_sub / 2);

    // Coarse stage: sub-array spread and per-group phases.
    CVector best_w;
    Score best;
    for (int si = 0; si <= 20; ++si) {
        const double spread = 0.5 + 0.05 * si;
        std::vector<double> phases(static_cast<std::size_t>(n_sub), 0.0);
        for (int sweep = 0; sweep < 2; ++sweep) {
            for (const auto &[a, b] : groups) {
                double keep = phases[static_cast<std::size_t>(a)];
                Score keep_score;
                for (int c = 0; c < kPhaseCandidates / 2; ++c) {
                    const double ph = 2.0 * kPi * c / (kPhaseCandidates / 2);
                    phases[static_cast<std::size_t>(a)] = phases[static_cast<std::size_t>(b)] = ph;
                    const Score sc = score_pattern(grid.af(subarray_base(n, n_slices, n_sub, spread, phases)),
                                                   n_slices, per_slice);
                    if (sc > keep_score) {
                        keep_score = sc;
                        keep = ph;
                    }
                }
                phases[static_cast<std::size_t>(a)] = phases[static_cast<std::size_t>(b)] = keep;
            }
        }
        CVector w = subarray_base(n, n_slices, n_sub, spread, phases);
        const Score sc = score_pattern(grid.af(w), n_slices, per_slice);
        if (best_w.size() == 0 || sc > best) {
            best = sc;
            best_w = std::move(w);
        }
    }

    // Fine stage: mirrored element pairs, one shared phase per pair.
    const double amp = 1.0 / std::sqrt(static_cast<double>(n));
    CVector w = best_w;
    CVector af = grid.af(w);
    Score current = score_pattern(af, n_slices, per_slice);
    for (int sweep = 0; sweep < 6; ++sweep) {
        bool changed = false;
        for (int i = 0; i < n / 2; ++i) {
            const int j = n - 1 - i;
            const CVector base_af = af - grid.column(i) * w[i] - grid.column(j) * w[j];
            const CVector pair_col = grid.column(i) + grid.column(j);
            int pick = -1;
            for (int c = 0; c < kPhaseCandidates; ++c) {
                const cplx v = std::polar(amp, 2.0 * kPi * c / kPhaseCandidates);
                const Score sc = score_pattern(base_af + pair_col * v, n_slices, per_slice);
                if (sc > current) {
                    current = sc;
                    pick = c;
                }
            }
            if (pick >= 0) {
                w[i] = w[j] = std::polar(amp, 2.0 * kPi * pick / kPhaseCandidates);
                af = base_af + pair_col * w[i];
                changed = true;
            }
        }
        if (!changed)
            break;
    }
    return w;
}

// Limited-memory BFGS on a smooth objective; returns the final point.
template <class Objective>
Eigen::VectorXd lbfgs_minimize(Objective &&f, Eigen::VectorXd x, int max_iters)
{
    constexpr int kHistory = 8;
    std::vector<Eigen::VectorXd> s_hist, y_hist;
    std::vector<double> rho_hist;
    Eigen::VectorXd g;
    double fx = f(x, g);
    for (int it = 0; it < max_iters; ++it) {
        Eigen::VectorXd q = g;
        const std::size_t h = s_hist.size();
        std::vector<double> alpha(h);
        for (std::size_t i = h; i-- > 0;) {
            alpha[i] = rho_hist[i] * s_hist[i].dot(q);
            q -= alpha[i] * y_hist[i];
        }
        if (h > 0)
            q *= s_hist.back().dot(y_hist.back()) / y_hist.back().squaredNorm();
        for (std::size_t i = 0; i < h; ++i) {
            const double beta = rho_hist[i] * y_hist[i].dot(q);
            q += (alpha[i] - beta) * s_hist[i];
        }
        Eigen::VectorXd dir = -q;
        double slope = g.dot(dir);
        if (slope >= 0.0) {
            dir = -g;
            slope = -g.squaredNorm();
            s_hist.clear();
            y_hist.clear();
            rho_hist.clear();
        }
        if (slope > -1e-300)
            break;

        double step = h == 0 ? 1e-2 / std::max(1.0, std::sqrt(g.squaredNorm())) : 1.0;
        Eigen::VectorXd x_new, g_new;
        double f_new = fx;
        bool accepted = false;
        for (int ls = 0; ls < 40; ++ls, step *= 0.5) {
            x_new = x + step * dir;
            f_new = f(x_new, g_new);
            if (f_new <= fx + 1e-4 * step * slope) {
                accepted = true;
                break;
            }
        }
        if (!accepted)
            break;

        Eigen::VectorXd sv = x_new - x, yv = g_new - g;
        const double sy = sv.dot(yv);
        if (sy > 1e-12) {
            if (s_hist.size() == kHistory) {
                s_hist.erase(s_hist.begin());
                y_hist.erase(y_hist.begin());
                rho_hist.erase(rho_hist.begin());
            }
            s_hist.push_back(std::move(sv));
            y_hist.push_back(std::move(yv));
            rho_hist.push_back(1.0 / sy);
        }
        const double rel = (fx - f_new) / std::max(std::abs(fx), 1e-300);
        x = std::move(x_new);
        g = std::move(g_new);
        fx = f_new;
        if (rel < 1e-12)
            break;
    }
    return x;
}

// Layer-0 codeword: constant amplitude on all antennas with a pattern as flat
// as possible over the whole angle domain. Minimizes sum_g (|AF_g|^2/N - 1)^p
// for p = 4, 8, 16, 32 in turn (approaching the minimax ripple) from several
// seeded starts, then polishes element phases on the min/max ratio.
CVector omni_base(int n)
{
    if (n == 1)
        return CVector::Ones(1);

    const PatternGrid grid(n, std::max(512, 16 * n));
    const int gsz = grid.size();
    const double inv_n = 1.0 / n;

    auto ratio_of = [&](const CVector &af) {
        const Eigen::ArrayXd g = af.cwiseAbs2().array();
        return g.minCoeff() / g.maxCoeff();
    };

    CVector best_w;
    double best_ratio = -1.0;
    Rng rng(0x0B5E55EDULL + static_cast<std::uint64_t>(n));
    for (int start = 0; start < 6; ++start) {
        Eigen::VectorXd ph(n);
        for (int i = 0; i < n; ++i)
            ph[i] = rng.uniform(0.0, 2.0 * kPi);

        for (int p : {4, 8, 16, 32}) {
            auto objective = [&](const Eigen::VectorXd &x, Eigen::VectorXd &grad) {
                CVector w(n);
                for (int i = 0; i < n; ++i)
                    w[i] = std::polar(1.0, x[i]);
                const CVector af = grid.af(w);
                double val = 0.0;
                CVector weighted(gsz);
                for (int g = 0; g < gsz; ++g) {
                    const double r = std::norm(af[g]) * inv_n - 1.0;
                    const double rp1 = std::pow(r, p - 1);
                    val += rp1 * r;
                    weighted[g] = (p * rp1 * 2.0 * inv_n) * std::conj(af[g]);
                }
                // d|AF_g|^2/dphi_i = -2 Im(conj(AF_g) w_i E_gi)
                const CVector t = grid.transpose_times(weighted);
                grad.resize(n);
                for (int i = 0; i < n; ++i)
                    grad[i] = -std::imag(w[i] * t[i]);
                return val;
            };
            ph = lbfgs_minimize(objective, ph, 1500);
        }

        CVector w(n);
        for (int i = 0; i < n; ++i)
            w[i] = std::polar(1.0, ph[i]);

        CVector af = grid.af(w);
        double r = ratio_of(af);
        for (int sweep = 0; sweep < 4; ++sweep) {
            bool changed = false;
            for (int i = 0; i < n; ++i) {
                const CVector rest = af - grid.column(i) * w[i];
                int pick = -1;
                for (int c = 0; c < kPhaseCandidates; ++c) {
                    const double rc = ratio_of(rest + grid.column(i) * std::polar(1.0, 2.0 * kPi * c / kPhaseCandidates));
                    if (rc > r * (1.0 + 1e-12)) {
                        r = rc;
                        pick = c;
                    }
                }
                if (pick >= 0) {
                    w[i] = std::polar(1.0, 2.0 * kPi * pick / kPhaseCandidates);
                    af = rest + grid.column(i) * w[i];
                    changed = true;
                }
            }
            if (!changed)
                break;
        }
        if (r > best_ratio) {
            best_ratio = r;
            best_w = w;
        }
    }
    return best_w / std::sqrt(static_cast<double>(n));
}

} // namespace

std::string to_string(CodebookKind kind)
{
    return kind == CodebookKind::deact ? "deact" : "bmw-ss";
}

CodebookKind parse_codebook_kind(std::string_view name)
{
    if (name == "deact")
        return CodebookKind::deact;
    if (name == "bmw-ss" || name == "bmw_ss")
        return CodebookKind::bmw_ss;
    throw std::invalid_argument("unknown codebook kind '" + std::string(name) + "' (expected deact or bmw-ss)");
}

AngleSlice coverage_slice(int branching, int layer, int index)
{
    double count = 1.0;
    for (int k = 0; k < layer; ++k)
        count *= branching;
    const double width = 2.0 / count;
    const double hi = index + 1 == static_cast<int>(count) ? 1.0 : -1.0 + width * (index + 1);
    return {-1.0 + width * index, hi};
}

int Codeword::active_count() const
{
    return static_cast<int>(std::count(active_mask.begin(), active_mask.end(), true));
}

HierCodebook::HierCodebook(int n_antennas, int branching, CodebookKind kind, std::vector<std::vector<Codeword>> layers)
    : n_antennas_(n_antennas), branching_(branching), kind_(kind), layers_(std::move(layers))
{
    const int depth = exact_log(n_antennas, branching);
    if (static_cast<int>(layers_.size()) != depth + 1)
        throw std::domain_error("codebook: expected " + std::to_string(depth + 1) + " layers");
    std::size_t expected = 1;
    for (std::size_t k = 0; k < layers_.size(); ++k) {
        if (layers_[k].size() != expected)
            throw std::domain_error("codebook: layer " + std::to_string(k) + " has wrong codeword count");
        for (const auto &cw : layers_[k])
            if (cw.size() != n_antennas)
                throw std::domain_error("codebook: codeword length does not match n_antennas");
        expected *= static_cast<std::size_t>(branching);
    }
}

const std::vector<Codeword> &HierCodebook::layer(int k) const
{
    if (k < 0 || k > depth())
        throw std::out_of_range("codebook: layer " + std::to_string(k) + " out of range");
    return layers_[static_cast<std::size_t>(k)];
}

const Codeword &HierCodebook::at(int k, int n) const
{
    const auto &l = layer(k);
    if (n < 0 || n >= static_cast<int>(l.size()))
        throw std::out_of_range("codebook: index " + std::to_string(n) + " out of range in layer " + std::to_string(k));
    return l[static_cast<std::size_t>(n)];
}

std::vector<int> HierCodebook::children(int k, int n) const
{
    if (k >= depth())
        return {};
    std::vector<int> out(static_cast<std::size_t>(branching_));
    for (int m = 0; m < branching_; ++m)
        out[static_cast<std::size_t>(m)] = n * branching_ + m;
    return out;
}

int exact_log(int n, int base)
{
    if (base < 2)
        throw std::domain_error("branching factor must be >= 2");
    if (n < 1)
        throw std::domain_error("antenna count must be >= 1");
    int k = 0;
    int v = n;
    while (v % base == 0) {
        v /= base;
        ++k;
    }
    if (v != 1)
        throw std::domain_error(std::to_string(n) + " is not a power of " + std::to_string(base));
    return k;
}

HierCodebook build_deact(int n_antennas, int branching)
{
    const int depth = exact_log(n_antennas, branching);
    const double amp = 1.0 / std::sqrt(static_cast<double>(n_antennas));
    std::vector<std::vector<Codeword>> layers;
    int count = 1;
    for (int k = 0; k <= depth; ++k, count *= branching) {
        CVector base = CVector::Zero(n_antennas);
        base.head(count).setConstant(amp);
        std::vector<Codeword> layer;
        layer.reserve(static_cast<std::size_t>(count));
        for (int i = 0; i < count; ++i)
            layer.push_back(make_codeword(steer_to(base, coverage_slice(branching, k, i).center()), k, i));
        layers.push_back(std::move(layer));
    }
    return HierCodebook(n_antennas, branching, CodebookKind::deact, std::move(layers));
}

namespace {

HierCodebook construct_bmw_ss(int n_antennas, int branching)
{
    const int depth = exact_log(n_antennas, branching);
    std::vector<std::vector<Codeword>> layers;
    int count = 1;
    for (int k = 0; k <= depth; ++k, count *= branching) {
        CVector base;
        if (k == depth)
            base = CVector::Constant(n_antennas, 1.0 / std::sqrt(static_cast<double>(n_antennas)));
        else if (k == 0)
            base = omni_base(n_antennas);
        else
            base = widened_base(n_antennas, branching, k);

        std::vector<Codeword> layer;
        layer.reserve(static_cast<std::size_t>(count));
        for (int i = 0; i < count; ++i)
            layer.push_back(make_codeword(steer_to(base, coverage_slice(branching, k, i).center()), k, i));
        layers.push_back(std::move(layer));
    }
    return HierCodebook(n_antennas, branching, CodebookKind::bmw_ss, std::move(layers));
}

} // namespace

HierCodebook build_bmw_ss(int n_antennas, int branching)
{
    // Memoized per (N, M).
    static std::mutex mutex;
    static std::map<std::pair<int, int>, HierCodebook> cache;
    const std::lock_guard<std::mutex> lock(mutex);
    const auto key = std::make_pair(n_antennas, branching);
    if (auto it = cache.find(key); it != cache.end())
        return it->second;
    return cache.emplace(key, construct_bmw_ss(n_antennas, branching)).first->second;
}

HierCodebook build_codebook(CodebookKind kind, int n_antennas, int branching)
{
    return kind == CodebookKind::deact ? build_deact(n_antennas, branching) : build_bmw_ss(n_antennas, branching);
}

double array_gain(const CVector &w, double omega)
{
    cplx acc(0.0, 0.0);
    for (Eigen::Index n = 0; n < w.size(); ++n)
        acc += w[n] * std::polar(1.0, -kPi * static_cast<double>(n) * omega);
    return std::norm(acc);
}

BeamPattern beam_pattern(const Codeword &w, int grid_size)
{
    if (grid_size < 2 * w.size())
        throw std::domain_error("beam_pattern: grid_size must be >= 2N");
    BeamPattern p;
    p.omega.resize(static_cast<std::size_t>(grid_size));
    p.gain_db.resize(static_cast<std::size_t>(grid_size));
    for (int g = 0; g < grid_size; ++g) {
        const double om = -1.0 + 2.0 * g / grid_size;
        p.omega[static_cast<std::size_t>(g)] = om;
        p.gain_db[static_cast<std::size_t>(g)] = db_or_neg_inf(array_gain(w.weights, om));
    }
    return p;
}

CoverageStats coverage_stats(const HierCodebook &cb, int layer, int index, int grid_size)
{
    const Codeword &cw = cb.at(layer, index);
    const AngleSlice s = cb.slice(layer, index);
    const BeamPattern p = beam_pattern(cw, grid_size);
    CoverageStats st;
    st.peak_db = -std::numeric_limits<double>::infinity();
    st.min_in_slice_db = std::numeric_limits<double>::infinity();
    st.max_in_slice_db = -std::numeric_limits<double>::infinity();
    for (std::size_t g = 0; g < p.omega.size(); ++g) {
        st.peak_db = std::max(st.peak_db, p.gain_db[g]);
        if (s.contains(p.omega[g])) {
            st.min_in_slice_db = std::min(st.min_in_slice_db, p.gain_db[g]);
            st.max_in_slice_db = std::max(st.max_in_slice_db, p.gain_db[g]);
        }
    }
    return st;
}

std::vector<UnionCheckLayer> coverage_union_check(const HierCodebook &cb, double ripple_db, int grid_size)
{
    std::vector<UnionCheckLayer> report;
    for (int k = 0; k <= cb.depth(); ++k) {
        UnionCheckLayer r;
        r.layer = k;
        if (k == cb.depth()) {
            report.push_back(r);
            continue;
        }
        r.worst_ripple_db = -std::numeric_limits<double>::infinity();
        for (int n = 0; n < static_cast<int>(cb.layer(k).size()); ++n) {
            double ref = 0.0;
            const auto kids = cb.children(k, n);
            for (int c : kids)
                ref += coverage_stats(cb, k + 1, c, grid_size).max_in_slice_db;
            ref /= static_cast<double>(kids.size());
            const double ripple = ref - coverage_stats(cb, k, n, grid_size).min_in_slice_db;
            if (ripple > r.worst_ripple_db) {
                r.worst_ripple_db = ripple;
                r.worst_index = n;
            }
        }
        r.pass = r.worst_ripple_db <= ripple_db;
        report.push_back(r);
    }
    return report;
}

} // namespace uavmm
