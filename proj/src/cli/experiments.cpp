// SPDX-License-Identifier: Apache-2.0

#include "uavmm/cli/experiments.hpp"
#include "uavmm/array_channel.hpp"
#include "uavmm/beamsearch.hpp"
#include "uavmm/cli/config.hpp"
#include "uavmm/codebook.hpp"
#include "uavmm/codebook_io.hpp"
#include "uavmm/deployment.hpp"
#include "uavmm/scene_io.hpp"
#include "uavmm/sdma.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>

namespace uavmm::cli {

using nlohmann::json;

namespace {

std::string fmt(double x)
{
    return format_number(x);
}

bool constant_amplitude(const Codeword &cw)
{
    double ref = -1.0;
    for (int i = 0; i < cw.size(); ++i) {
        const double a = std::abs(cw.weights[i]);
        if (!cw.active_mask[static_cast<std::size_t>(i)]) {
            if (a != 0.0)
                return false;
            continue;
        }
        if (ref < 0.0)
            ref = a;
        else if (std::abs(a - ref) > 1e-12 * ref)
            return false;
    }
    return ref > 0.0;
}

std::string run(PatternConfig &c)
{
    const HierCodebook cb = build_codebook(parse_codebook_kind(c.codebook), c.n, c.m);
    std::ostringstream os;
    write_pattern_csv(os, beam_pattern(cb.at(c.layer, c.index), c.grid));
    return os.str();
}

std::string run(CodebookCheckConfig &c)
{
    const HierCodebook cb = build_codebook(parse_codebook_kind(c.codebook), c.n, c.m);
    const auto unions = coverage_union_check(cb, c.ripple_db, c.grid);
    std::ostringstream os;
    os << "layer,index,active,norm_sq,ca_ok,peak_db,min_in_slice_db,sink_db,sink_pass,union_ripple_db,union_pass\n";
    for (int k = 0; k <= cb.depth(); ++k) {
        const auto &u = unions[static_cast<std::size_t>(k)];
        for (int n = 0; n < static_cast<int>(cb.layer(k).size()); ++n) {
            const Codeword &cw = cb.at(k, n);
            const CoverageStats st = coverage_stats(cb, k, n, c.grid);
            const double sink = st.min_in_slice_db - st.peak_db;
            os << k << ',' << n << ',' << cw.active_count() << ',' << fmt(cw.weights.squaredNorm()) << ','
               << (constant_amplitude(cw) ? 1 : 0) << ',' << fmt(st.peak_db) << ',' << fmt(st.min_in_slice_db) << ','
               << fmt(sink) << ',' << (sink >= -c.ripple_db ? 1 : 0) << ',' << fmt(u.worst_ripple_db) << ','
               << (u.pass ? 1 : 0) << '\n';
        }
    }
    return os.str();
}

std::string run(ComplexityConfig &c)
{
    std::ostringstream os;
    os << "n_antennas,exhaustive_slots,hierarchical_slots\n";
    for (int n : c.n)
        os << n << ',' << exhaustive_slots(n) << ',' << hierarchical_slots(n, c.m) << '\n';
    return os.str();
}

std::string run(SearchSimConfig &c)
{
    const auto grid = parse_grid(c.snr, "search-sim.snr");
    std::ostringstream os;
    os << "snr_db,success_rate,trials,codebook\n";
    for (const auto &name : c.codebooks) {
        SearchScenario sc;
        sc.n_antennas = c.n;
        sc.branching = c.m;
        sc.l_paths = c.l;
        sc.nlos_offset_db = c.nlos_offset_db;
        sc.kind = parse_codebook_kind(name);
        sc.shared_bs_aoa = c.shared_bs_aoa;
        for (const auto &p : success_rate(sc, grid, c.trials, c.seed))
            os << fmt(p.snr_db) << ',' << fmt(p.success_rate) << ',' << p.trials << ',' << to_string(sc.kind) << '\n';
    }
    return os.str();
}

std::string run(SdmaSimConfig &c)
{
    SdmaScenario sc;
    sc.n_bs = c.n_bs;
    sc.n_ms = c.n_ms;
    sc.branching = c.m;
    sc.n_users = c.users;
    sc.l_paths = c.l;
    sc.nlos_offset_db = c.nlos_offset_db;
    sc.min_group_separation = c.min_group_separation;
    sc.kind = parse_codebook_kind(c.codebook);
    sc.grid_aligned = c.grid_aligned;
    std::ostringstream os;
    os << "snr_db,sum_rate,bound_rate,n_users\n";
    for (const auto &p : sdma_rate_curve(sc, parse_grid(c.snr, "sdma-sim.snr"), c.trials, c.seed))
        os << fmt(p.snr_db) << ',' << fmt(p.sum_rate) << ',' << fmt(p.bound_rate) << ',' << p.n_users << '\n';
    return os.str();
}

std::string run(CapacityConfig &c)
{
    const auto method = c.method == "quadrature" ? ExpectationMethod::quadrature : ExpectationMethod::monte_carlo;
    const bool by_power = c.axis == "tx_power";
    std::ostringstream os;
    os << (by_power ? "tx_power_dbm" : "snr_db") << ",c_mm_bps,c_lf_bps,ratio\n";
    for (double x : parse_grid(c.grid, "capacity.grid")) {
        CapacityParams mm{c.mm_bandwidth_hz, db_to_linear(x), c.users};
        CapacityParams lf{c.lf_bandwidth_hz, db_to_linear(x), c.users};
        if (by_power) {
            LinkBudget b;
            b.distance_m = c.distance_m;
            b.tx_power_dbm = x;
            b.noise_figure_db = c.noise_figure_db;
            b.carrier_hz = c.mm_carrier_hz;
            b.bandwidth_hz = c.mm_bandwidth_hz;
            b.tx_array_gain_db = c.mm_tx_gain_db;
            b.rx_array_gain_db = c.mm_rx_gain_db;
            mm.snr_linear = db_to_linear(friis_rx_snr_db(b));
            b.carrier_hz = c.lf_carrier_hz;
            b.bandwidth_hz = c.lf_bandwidth_hz;
            b.tx_array_gain_db = c.lf_tx_gain_db;
            b.rx_array_gain_db = c.lf_rx_gain_db;
            lf.snr_linear = db_to_linear(friis_rx_snr_db(b));
        }
        const double c_mm = capacity_mm(mm);
        const double c_lf = capacity_lf(lf, method, static_cast<std::size_t>(c.samples), c.seed);
        os << fmt(x) << ',' << fmt(c_mm) << ',' << fmt(c_lf) << ',' << fmt(c_mm / c_lf) << '\n';
    }
    return os.str();
}

std::string run(DopplerConfig &c)
{
    std::ostringstream os;
    os << "angle_deg,doppler_spread_hz,coherence_time_s\n";
    for (double deg : parse_grid(c.angle_deg, "doppler.angle_deg")) {
        const MobilityParams m{c.speed_mps, c.wavelength_m, deg * std::numbers::pi / 180.0};
        os << fmt(deg) << ',' << fmt(doppler_spread_hz(m)) << ',' << fmt(coherence_time_s(m)) << '\n';
    }
    return os.str();
}

std::string run(DeploySimConfig &c)
{
    std::ostringstream os;
    write_trajectory_csv(os, iterate_positioning(c.scene, c.max_iters));
    return os.str();
}

template <class Config> RunOutput run_typed(const std::string &command, const json &config)
{
    Config cfg;
    apply_json(cfg, config, command);
    validate(cfg);
    RunOutput out;
    out.resolved = to_json(cfg, command);
    out.csv = run(cfg);
    return out;
}

} // namespace

RunOutput run_command(const std::string &command, const json &config)
{
    if (command == "pattern")
        return run_typed<PatternConfig>(command, config);
    if (command == "codebook-check")
        return run_typed<CodebookCheckConfig>(command, config);
    if (command == "complexity")
        return run_typed<ComplexityConfig>(command, config);
    if (command == "search-sim")
        return run_typed<SearchSimConfig>(command, config);
    if (command == "sdma-sim")
        return run_typed<SdmaSimConfig>(command, config);
    if (command == "capacity")
        return run_typed<CapacityConfig>(command, config);
    if (command == "doppler")
        return run_typed<DopplerConfig>(command, config);
    if (command == "deploy-sim")
        return run_typed<DeploySimConfig>(command, config);
    throw ConfigError("command", "unknown command \"" + command + "\"");
}

void write_outputs(const std::filesystem::path &dir, const std::string &stem, const RunOutput &out)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec)
        throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());
    auto put = [](const std::filesystem::path &p, const std::string &text) {
        std::ofstream f(p, std::ios::binary);
        f << text;
        f.close();
        if (!f)
            throw std::runtime_error("cannot write " + p.string());
    };
    put(dir / (stem + ".csv"), out.csv);
    put(dir / (stem + ".json"), out.resolved.dump(2) + "\n");
}

std::filesystem::path default_output_dir()
{
    const char *env = std::getenv("UAVMM_OUT_DIR");
    return env && *env ? std::filesystem::path(env) : std::filesystem::path(".");
}

} // namespace uavmm::cli
