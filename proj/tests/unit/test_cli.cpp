// SPDX-License-Identifier: Apache-2.0

#include "uavmm/cli/config.hpp"
#include "uavmm/cli/experiments.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace uavmm::cli;
using nlohmann::json;

namespace {

std::string error_of(const std::string &command, const json &config)
{
    try {
        run_command(command, config);
    } catch (const ConfigError &e) {
        return e.what();
    }
    return "";
}

// Small but non-trivial configs for every command.
json small_config(const std::string &command)
{
    if (command == "search-sim")
        return {{"n", 8}, {"trials", 40}, {"snr", "-10:10:10"}};
    if (command == "sdma-sim")
        return {{"n_bs", 8}, {"n_ms", 8}, {"users", 2}, {"trials", 5}, {"snr", "0:20:40"}};
    if (command == "codebook-check")
        return {{"n", 8}};
    if (command == "pattern")
        return {{"n", 8}, {"layer", 2}, {"index", 3}, {"grid", 64}};
    if (command == "capacity")
        return {{"method", "monte_carlo"}, {"samples", 2000}, {"grid", "0:20:40"}};
    return json::object();
}

} // namespace

TEST_CASE("grid strings")
{
    const auto g = parse_grid("-30:2:10", "x");
    REQUIRE(g.size() == 21);
    CHECK(g.front() == -30.0);
    CHECK(g.back() == 10.0);
    CHECK(parse_grid("0:0.1:0.3", "x").size() == 4);
    CHECK(parse_grid("7", "x") == std::vector<double>{7.0});
    CHECK(parse_grid("0:3:10", "x").back() == 9.0);
    for (const char *bad : {"", "a:1:2", "0:0:5", "5:1:0", "1:2", "1:2:3:4", "0:1:inf"})
        CHECK_THROWS_AS(parse_grid(bad, "x"), ConfigError);
    try {
        parse_grid("0:-1:5", "search-sim.snr");
    } catch (const ConfigError &e) {
        CHECK(std::string(e.what()).rfind("search-sim.snr: ", 0) == 0);
    }
}

TEST_CASE("validation errors carry the field path")
{
    CHECK(error_of("pattern", {{"n", 24}}).rfind("pattern.n:", 0) == 0);
    CHECK(error_of("pattern", {{"layer", 9}}).rfind("pattern.layer:", 0) == 0);
    CHECK(error_of("pattern", {{"index", 4}, {"layer", 2}}).rfind("pattern.index:", 0) == 0);
    CHECK(error_of("pattern", {{"codebook", "sparse"}}).rfind("pattern.codebook:", 0) == 0);
    CHECK(error_of("pattern", {{"n", "32"}}).rfind("pattern.n:", 0) == 0);
    CHECK(error_of("search-sim", {{"trials", 0}}).rfind("search-sim.trials:", 0) == 0);
    CHECK(error_of("search-sim", {{"codebooks", {"deact", "x"}}}).rfind("search-sim.codebooks[1]:", 0) == 0);
    CHECK(error_of("search-sim", {{"seed", -1}}).rfind("search-sim.seed:", 0) == 0);
    CHECK(error_of("sdma-sim", {{"n_ms", 16}}).rfind("sdma-sim.n_ms:", 0) == 0);
    CHECK(error_of("capacity", {{"preset", "other"}}).rfind("capacity.preset:", 0) == 0);
    CHECK(error_of("capacity", {{"axis", "distance"}}).rfind("capacity.axis:", 0) == 0);
    CHECK(error_of("doppler", {{"wavelength_m", 0}}).rfind("doppler.wavelength_m:", 0) == 0);
    CHECK(error_of("complexity", {{"n", {16, 20}}}).rfind("complexity.n[1]:", 0) == 0);
    CHECK(error_of("deploy-sim", {{"scene", {{"uav", {0, 0}}}}}).rfind("deploy-sim.scene.uav:", 0) == 0);
    CHECK(error_of("deploy-sim", {{"scene", {{"sweep_sectors", 0}}}}).rfind("deploy-sim.scene:", 0) == 0);
    CHECK(error_of("doppler", {{"speed", 3}}).rfind("doppler.speed: unknown field", 0) == 0);
    CHECK(error_of("doppler", {{"command", "capacity"}}).rfind("doppler.command:", 0) == 0);
    CHECK(error_of("nope", json::object()).rfind("command:", 0) == 0);
}

TEST_CASE("every command: resolved config reproduces the CSV byte for byte")
{
    for (const auto &command : command_names()) {
        CAPTURE(command);
        const RunOutput first = run_command(command, small_config(command));
        CHECK(first.resolved.at("command") == command);
        CHECK_FALSE(first.csv.empty());
        const RunOutput again = run_command(command, json::parse(first.resolved.dump()));
        CHECK(again.csv == first.csv);
        CHECK(again.resolved == first.resolved);
    }
}

TEST_CASE("CSV headers")
{
    auto header = [](const std::string &command, const json &cfg) {
        const std::string csv = run_command(command, cfg).csv;
        return csv.substr(0, csv.find('\n'));
    };
    CHECK(header("complexity", json::object()) == "n_antennas,exhaustive_slots,hierarchical_slots");
    CHECK(header("search-sim", small_config("search-sim")) == "snr_db,success_rate,trials,codebook");
    CHECK(header("sdma-sim", small_config("sdma-sim")) == "snr_db,sum_rate,bound_rate,n_users");
    CHECK(header("capacity", json::object()) == "tx_power_dbm,c_mm_bps,c_lf_bps,ratio");
    CHECK(header("capacity", {{"axis", "snr"}}) == "snr_db,c_mm_bps,c_lf_bps,ratio");
    CHECK(header("pattern", small_config("pattern")) == "omega,gain_db");
    CHECK(header("deploy-sim", json::object()) == "iter,x,y,z,n_found,utility,moved");
}

TEST_CASE("complexity table")
{
    CHECK(run_command("complexity", json::object()).csv ==
          "n_antennas,exhaustive_slots,hierarchical_slots\n16,256,16\n32,1024,20\n64,4096,24\n128,16384,28\n");
}

TEST_CASE("outputs land on disk")
{
    const auto dir = std::filesystem::temp_directory_path() / "uavmm_cli_test";
    std::filesystem::remove_all(dir);
    const RunOutput out = run_command("doppler", json::object());
    write_outputs(dir / "nested", "d", out);
    std::ifstream csv(dir / "nested" / "d.csv");
    std::stringstream text;
    text << csv.rdbuf();
    CHECK(text.str() == out.csv);
    std::ifstream side(dir / "nested" / "d.json");
    CHECK(json::parse(side) == out.resolved);
    std::filesystem::remove_all(dir);
}
