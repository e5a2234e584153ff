// SPDX-License-Identifier: Apache-2.0

#ifndef UAVMM_CLI_CONFIG_HPP
#define UAVMM_CLI_CONFIG_HPP

#include "uavmm/deployment.hpp"

#include <json.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace uavmm::cli {

// Invalid configuration; the message starts with the offending field path.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string &path, const std::string &what) : std::runtime_error(path + ": " + what) {}
};

// "start:step:stop" (inclusive when stop lands on the grid), or one number.
std::vector<double> parse_grid(const std::string &text, const std::string &path);

struct PatternConfig {
    std::string codebook = "bmw-ss";
    int n = 32;
    int m = 2;
    int layer = 0;
    int index = 0;
    int grid = 1024;

    template <class V> void visit(V &&v)
    {
        v("codebook", codebook);
        v("n", n);
        v("m", m);
        v("layer", layer);
        v("index", index);
        v("grid", grid);
    }
};

struct CodebookCheckConfig {
    std::string codebook = "bmw-ss";
    int n = 32;
    int m = 2;
    double ripple_db = 10.0;
    int grid = 1024;

    template <class V> void visit(V &&v)
    {
        v("codebook", codebook);
        v("n", n);
        v("m", m);
        v("ripple_db", ripple_db);
        v("grid", grid);
    }
};

struct ComplexityConfig {
    std::vector<int> n{16, 32, 64, 128};
    int m = 2;

    template <class V> void visit(V &&v)
    {
        v("n", n);
        v("m", m);
    }
};

struct SearchSimConfig {
    std::vector<std::string> codebooks{"deact", "bmw-ss"};
    int n = 32;
    int m = 2;
    int l = 3;
    double nlos_offset_db = 20.0;
    std::string snr = "-30:2:10";
    int trials = 2000;
    std::uint64_t seed = 7;
    bool shared_bs_aoa = false;

    template <class V> void visit(V &&v)
    {
        v("codebooks", codebooks);
        v("n", n);
        v("m", m);
        v("l", l);
        v("nlos_offset_db", nlos_offset_db);
        v("snr", snr);
        v("trials", trials);
        v("seed", seed);
        v("shared_bs_aoa", shared_bs_aoa);
    }
};

struct SdmaSimConfig {
    std::string codebook = "bmw-ss";
    int n_bs = 32;
    int n_ms = 32;
    int m = 2;
    int users = 4;
    int l = 3;
    double nlos_offset_db = 20.0;
    int min_group_separation = 1;
    std::string snr = "-10:5:40";
    int trials = 100;
    std::uint64_t seed = 7;
    bool grid_aligned = false;

    template <class V> void visit(V &&v)
    {
        v("codebook", codebook);
        v("n_bs", n_bs);
        v("n_ms", n_ms);
        v("m", m);
        v("users", users);
        v("l", l);
        v("nlos_offset_db", nlos_offset_db);
        v("min_group_separation", min_group_separation);
        v("snr", snr);
        v("trials", trials);
        v("seed", seed);
        v("grid_aligned", grid_aligned);
    }
};

// Millimeter-wave band against a low-frequency band at matched transmit
// power. With axis "snr" the grid is the receive SNR shared by both bands.
struct CapacityConfig {
    std::string preset = "mm-vs-lf";
    std::string axis = "tx_power";
    std::string grid = "-10:5:40";
    int users = 4;
    double distance_m = 1000.0;
    double mm_carrier_hz = 30e9;
    double mm_bandwidth_hz = 100e6;
    double mm_tx_gain_db = 24.0;
    double mm_rx_gain_db = 12.0;
    double lf_carrier_hz = 5e9;
    double lf_bandwidth_hz = 5e6;
    double lf_tx_gain_db = 6.0;
    double lf_rx_gain_db = 0.0;
    double noise_figure_db = 5.0;
    std::string method = "quadrature";
    int samples = 1'000'000;
    std::uint64_t seed = 1;

    template <class V> void visit(V &&v)
    {
        v("preset", preset);
        v("axis", axis);
        v("grid", grid);
        v("users", users);
        v("distance_m", distance_m);
        v("mm_carrier_hz", mm_carrier_hz);
        v("mm_bandwidth_hz", mm_bandwidth_hz);
        v("mm_tx_gain_db", mm_tx_gain_db);
        v("mm_rx_gain_db", mm_rx_gain_db);
        v("lf_carrier_hz", lf_carrier_hz);
        v("lf_bandwidth_hz", lf_bandwidth_hz);
        v("lf_tx_gain_db", lf_tx_gain_db);
        v("lf_rx_gain_db", lf_rx_gain_db);
        v("noise_figure_db", noise_figure_db);
        v("method", method);
        v("samples", samples);
        v("seed", seed);
    }
};

struct DopplerConfig {
    double speed_mps = 20.0;
    double wavelength_m = 0.005;
    std::string angle_deg = "0:15:90";

    template <class V> void visit(V &&v)
    {
        v("speed_mps", speed_mps);
        v("wavelength_m", wavelength_m);
        v("angle_deg", angle_deg);
    }
};

struct DeploySimConfig {
    int max_iters = 20;
    DeploymentScene scene = default_scene();

    static DeploymentScene default_scene();

    template <class V> void visit(V &&v)
    {
        v("max_iters", max_iters);
        v("scene", scene);
    }
};

const std::vector<std::string> &command_names();

// Applies the known fields of `j` onto `cfg`. "command" is accepted when it
// equals `command`; any other unknown key is a ConfigError.
template <class Config> void apply_json(Config &cfg, const nlohmann::json &j, const std::string &command);
template <class Config> nlohmann::json to_json(Config &cfg, const std::string &command);

// Throws ConfigError on the first field that breaks a module precondition.
void validate(const PatternConfig &c);
void validate(const CodebookCheckConfig &c);
void validate(const ComplexityConfig &c);
void validate(const SearchSimConfig &c);
void validate(const SdmaSimConfig &c);
void validate(const CapacityConfig &c);
void validate(const DopplerConfig &c);
void validate(const DeploySimConfig &c);

} // namespace uavmm::cli

#endif
