// SPDX-License-Identifier: Apache-2.0

#include "uavmm/cli/config.hpp"
#include "uavmm/codebook.hpp"
#include "uavmm/codebook_io.hpp"
#include "uavmm/scene_io.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <set>

namespace uavmm::cli {

using nlohmann::json;

namespace {

void read(const json &j, const std::string &path, int &dst)
{
    if (!j.is_number_integer())
        throw ConfigError(path, "expected an integer");
    const auto v = j.get<long long>();
    if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max())
        throw ConfigError(path, "integer out of range");
    dst = static_cast<int>(v);
}

void read(const json &j, const std::string &path, std::uint64_t &dst)
{
    if (!j.is_number_unsigned())
        throw ConfigError(path, "expected a non-negative integer");
    dst = j.get<std::uint64_t>();
}

void read(const json &j, const std::string &path, double &dst)
{
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "inf")
            dst = std::numeric_limits<double>::infinity();
        else if (s == "-inf")
            dst = -std::numeric_limits<double>::infinity();
        else
            throw ConfigError(path, "expected a number");
        return;
    }
    if (!j.is_number())
        throw ConfigError(path, "expected a number");
    dst = j.get<double>();
}

void read(const json &j, const std::string &path, bool &dst)
{
    if (!j.is_boolean())
        throw ConfigError(path, "expected true or false");
    dst = j.get<bool>();
}

void read(const json &j, const std::string &path, std::string &dst)
{
    if (j.is_number()) {
        // A lone grid point may be written as a bare number.
        dst = format_number(j.get<double>());
        return;
    }
    if (!j.is_string())
        throw ConfigError(path, "expected a string");
    dst = j.get<std::string>();
}

template <class T> void read(const json &j, const std::string &path, std::vector<T> &dst)
{
    if (!j.is_array())
        throw ConfigError(path, "expected an array");
    std::vector<T> out(j.size());
    for (std::size_t i = 0; i < j.size(); ++i)
        read(j[i], path + "[" + std::to_string(i) + "]", out[i]);
    dst = std::move(out);
}

void read(const json &j, const std::string &path, DeploymentScene &dst)
{
    try {
        dst = scene_from_json(j);
    } catch (const std::invalid_argument &e) {
        // Messages look like "scene.users[0].id: expected an integer".
        const std::string msg = e.what();
        const std::string root = "scene";
        const auto colon = msg.find(": ");
        if (colon == std::string::npos || msg.compare(0, root.size(), root) != 0)
            throw ConfigError(path, msg);
        throw ConfigError(path + msg.substr(root.size(), colon - root.size()), msg.substr(colon + 2));
    }
}

json write(int x) { return x; }
json write(std::uint64_t x) { return x; }
json write(bool x) { return x; }
json write(const std::string &x) { return x; }
json write(double x) { return std::isfinite(x) ? json(x) : json(format_number(x)); }
json write(const DeploymentScene &s) { return scene_to_json(s); }
template <class T> json write(const std::vector<T> &xs)
{
    json a = json::array();
    for (const auto &x : xs)
        a.push_back(write(x));
    return a;
}

void check(bool ok, const std::string &path, const std::string &what)
{
    if (!ok)
        throw ConfigError(path, what);
}

CodebookKind check_kind(const std::string &name, const std::string &path)
{
    try {
        return parse_codebook_kind(name);
    } catch (const std::exception &) {
        throw ConfigError(path, "unknown codebook \"" + name + "\" (expected deact or bmw-ss)");
    }
}

int check_power(int n, int m, const std::string &n_path, const std::string &m_path)
{
    check(m >= 2, m_path, "branching must be >= 2");
    check(n >= m, n_path, "antenna count must be >= branching");
    try {
        return exact_log(n, m);
    } catch (const std::exception &) {
        throw ConfigError(n_path, std::to_string(n) + " is not a power of " + std::to_string(m));
    }
}

void check_grid(const std::string &text, const std::string &path)
{
    parse_grid(text, path);
}

} // namespace

std::vector<double> parse_grid(const std::string &text, const std::string &path)
{
    auto number = [&](std::string_view s) {
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v))
            throw ConfigError(path, "bad number \"" + std::string(s) + "\" in grid \"" + text + "\"");
        return v;
    };
    const auto c1 = text.find(':');
    if (c1 == std::string::npos)
        return {number(text)};
    const auto c2 = text.find(':', c1 + 1);
    if (c2 == std::string::npos || text.find(':', c2 + 1) != std::string::npos)
        throw ConfigError(path, "expected start:step:stop, got \"" + text + "\"");
    const double start = number(std::string_view(text).substr(0, c1));
    const double step = number(std::string_view(text).substr(c1 + 1, c2 - c1 - 1));
    const double stop = number(std::string_view(text).substr(c2 + 1));
    if (!(step > 0.0))
        throw ConfigError(path, "grid step must be > 0");
    if (stop < start)
        throw ConfigError(path, "grid stop must be >= start");
    const double span = (stop - start) / step;
    if (span > 1e6)
        throw ConfigError(path, "grid has too many points");
    const auto count = static_cast<long>(std::floor(span + 1e-9)) + 1;
    std::vector<double> out;
    for (long i = 0; i < count; ++i)
        out.push_back(start + static_cast<double>(i) * step);
    return out;
}

DeploymentScene DeploySimConfig::default_scene()
{
    return three_user_scene();
}

const std::vector<std::string> &command_names()
{
    static const std::vector<std::string> names{"pattern",  "codebook-check", "complexity", "search-sim",
                                                "sdma-sim", "capacity",       "doppler",    "deploy-sim"};
    return names;
}

template <class Config> void apply_json(Config &cfg, const json &j, const std::string &command)
{
    if (!j.is_object())
        throw ConfigError(command, "config must be a JSON object");
    std::set<std::string> known{"command"};
    cfg.visit([&](const char *name, auto &field) {
        known.insert(name);
        if (j.contains(name))
            read(j.at(name), command + "." + name, field);
    });
    for (const auto &[key, value] : j.items()) {
        if (!known.count(key))
            throw ConfigError(command + "." + key, "unknown field");
        if (key == "command" && value != json(command))
            throw ConfigError(command + ".command", "config was written for " + value.dump());
    }
}

template <class Config> json to_json(Config &cfg, const std::string &command)
{
    json j = json::object();
    j["command"] = command;
    cfg.visit([&](const char *name, auto &field) { j[name] = write(field); });
    return j;
}

#define UAVMM_INSTANTIATE(C)                                                                                        \
    template void apply_json<C>(C &, const json &, const std::string &);                                            \
    template json to_json<C>(C &, const std::string &);
UAVMM_INSTANTIATE(PatternConfig)
UAVMM_INSTANTIATE(CodebookCheckConfig)
UAVMM_INSTANTIATE(ComplexityConfig)
UAVMM_INSTANTIATE(SearchSimConfig)
UAVMM_INSTANTIATE(SdmaSimConfig)
UAVMM_INSTANTIATE(CapacityConfig)
UAVMM_INSTANTIATE(DopplerConfig)
UAVMM_INSTANTIATE(DeploySimConfig)
#undef UAVMM_INSTANTIATE

void validate(const PatternConfig &c)
{
    check_kind(c.codebook, "pattern.codebook");
    const int depth = check_power(c.n, c.m, "pattern.n", "pattern.m");
    check(c.layer >= 0 && c.layer <= depth, "pattern.layer", "must be in [0, " + std::to_string(depth) + "]");
    long long width = 1;
    for (int k = 0; k < c.layer; ++k)
        width *= c.m;
    check(c.index >= 0 && c.index < width, "pattern.index", "must be in [0, " + std::to_string(width - 1) + "]");
    check(c.grid >= 2 * c.n, "pattern.grid", "must be >= 2 n");
}

void validate(const CodebookCheckConfig &c)
{
    check_kind(c.codebook, "codebook-check.codebook");
    check_power(c.n, c.m, "codebook-check.n", "codebook-check.m");
    check(c.ripple_db > 0.0, "codebook-check.ripple_db", "must be > 0");
    check(c.grid >= 2 * c.n, "codebook-check.grid", "must be >= 2 n");
}

void validate(const ComplexityConfig &c)
{
    check(!c.n.empty(), "complexity.n", "needs at least one antenna count");
    check(c.m >= 2, "complexity.m", "branching must be >= 2");
    for (std::size_t i = 0; i < c.n.size(); ++i)
        check_power(c.n[i], c.m, "complexity.n[" + std::to_string(i) + "]", "complexity.m");
}

void validate(const SearchSimConfig &c)
{
    check(!c.codebooks.empty(), "search-sim.codebooks", "needs at least one codebook");
    for (std::size_t i = 0; i < c.codebooks.size(); ++i)
        check_kind(c.codebooks[i], "search-sim.codebooks[" + std::to_string(i) + "]");
    check_power(c.n, c.m, "search-sim.n", "search-sim.m");
    check(c.l >= 1, "search-sim.l", "must be >= 1");
    check(std::isfinite(c.nlos_offset_db), "search-sim.nlos_offset_db", "must be finite");
    check_grid(c.snr, "search-sim.snr");
    check(c.trials >= 1, "search-sim.trials", "must be >= 1");
}

void validate(const SdmaSimConfig &c)
{
    check_kind(c.codebook, "sdma-sim.codebook");
    const int d_bs = check_power(c.n_bs, c.m, "sdma-sim.n_bs", "sdma-sim.m");
    const int d_ms = check_power(c.n_ms, c.m, "sdma-sim.n_ms", "sdma-sim.m");
    check(d_bs == d_ms, "sdma-sim.n_ms", "must give the same codebook depth as n_bs");
    check(c.users >= 1 && c.users <= c.n_bs, "sdma-sim.users", "must be in [1, n_bs]");
    check(c.l >= 1, "sdma-sim.l", "must be >= 1");
    check(std::isfinite(c.nlos_offset_db), "sdma-sim.nlos_offset_db", "must be finite");
    check(c.min_group_separation >= 1, "sdma-sim.min_group_separation", "must be >= 1");
    check((c.users - 1) * c.min_group_separation < c.n_bs, "sdma-sim.min_group_separation",
          "leaves no room for the requested users");
    check_grid(c.snr, "sdma-sim.snr");
    check(c.trials >= 1, "sdma-sim.trials", "must be >= 1");
}

void validate(const CapacityConfig &c)
{
    check(c.preset == "mm-vs-lf", "capacity.preset", "unknown preset \"" + c.preset + "\" (expected mm-vs-lf)");
    check(c.axis == "tx_power" || c.axis == "snr", "capacity.axis", "expected tx_power or snr");
    check_grid(c.grid, "capacity.grid");
    check(c.users >= 1, "capacity.users", "must be >= 1");
    check(c.distance_m > 0.0, "capacity.distance_m", "must be > 0");
    check(c.mm_carrier_hz > 0.0, "capacity.mm_carrier_hz", "must be > 0");
    check(c.mm_bandwidth_hz > 0.0, "capacity.mm_bandwidth_hz", "must be > 0");
    check(c.lf_carrier_hz > 0.0, "capacity.lf_carrier_hz", "must be > 0");
    check(c.lf_bandwidth_hz > 0.0, "capacity.lf_bandwidth_hz", "must be > 0");
    check(std::isfinite(c.mm_tx_gain_db) && std::isfinite(c.mm_rx_gain_db), "capacity.mm_tx_gain_db",
          "gains must be finite");
    check(std::isfinite(c.lf_tx_gain_db) && std::isfinite(c.lf_rx_gain_db), "capacity.lf_tx_gain_db",
          "gains must be finite");
    check(std::isfinite(c.noise_figure_db), "capacity.noise_figure_db", "must be finite");
    check(c.method == "quadrature" || c.method == "monte_carlo", "capacity.method",
          "expected quadrature or monte_carlo");
    check(c.samples >= 1, "capacity.samples", "must be >= 1");
}

void validate(const DopplerConfig &c)
{
    check(c.speed_mps >= 0.0 && std::isfinite(c.speed_mps), "doppler.speed_mps", "must be finite and >= 0");
    check(c.wavelength_m > 0.0 && std::isfinite(c.wavelength_m), "doppler.wavelength_m", "must be > 0");
    for (double a : parse_grid(c.angle_deg, "doppler.angle_deg"))
        check(a >= 0.0 && a <= 360.0, "doppler.angle_deg", "angles must lie in [0, 360]");
}

void validate(const DeploySimConfig &c)
{
    check(c.max_iters >= 1, "deploy-sim.max_iters", "must be >= 1");
    try {
        uavmm::validate(c.scene);
    } catch (const std::domain_error &e) {
        throw ConfigError("deploy-sim.scene", e.what());
    }
}

} // namespace uavmm::cli
