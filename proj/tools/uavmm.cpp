// SPDX-License-Identifier: Apache-2.0

#include "uavmm/cli/config.hpp"
#include "uavmm/cli/experiments.hpp"
#include "uavmm/scene_io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

using namespace uavmm;
using namespace uavmm::cli;
using nlohmann::json;

namespace {

constexpr int kConfigError = 2;
constexpr int kRuntimeError = 3;

json load_json(const std::string &path, const std::string &field)
{
    std::ifstream f(path);
    if (!f)
        throw ConfigError(field, "cannot open " + path);
    try {
        return json::parse(f);
    } catch (const json::parse_error &e) {
        throw ConfigError(field, path + " is not valid JSON: " + e.what());
    }
}

std::string flag_name(const char *field)
{
    std::string s = "--";
    for (const char *p = field; *p; ++p)
        s += *p == '_' ? '-' : *p;
    return s;
}

struct Binder {
    CLI::App *app;

    template <class T> void operator()(const char *name, T &field) { app->add_option(flag_name(name), field); }
    void operator()(const char *name, bool &field) { app->add_flag(flag_name(name), field); }
    void operator()(const char *name, std::vector<int> &field)
    {
        app->add_option(flag_name(name), field)->expected(1, -1);
    }
    void operator()(const char *name, std::vector<std::string> &field)
    {
        app->add_option(flag_name(name), field)->expected(1, -1);
    }
    void operator()(const char *name, double &field)
    {
        app->add_option_function<std::string>(flag_name(name), [&field, name](const std::string &s) {
            if (s == "inf" || s == "+inf") {
                field = std::numeric_limits<double>::infinity();
                return;
            }
            try {
                std::size_t used = 0;
                field = std::stod(s, &used);
                if (used != s.size())
                    throw std::invalid_argument(s);
            } catch (const std::exception &) {
                throw ConfigError(name, "expected a number, got \"" + s + "\"");
            }
        });
    }
    void operator()(const char *, DeploymentScene &scene)
    {
        app->add_option_function<std::string>(
            "--scene", [&scene](const std::string &path) { scene = scene_from_json(load_json(path, "deploy-sim.scene")); },
            "Scene JSON file");
        app->add_option("--signaling-cost", scene.signaling_cost, "Utility threshold per move (inf allowed)");
        app->add_option("--discovery-range-m", scene.discovery_range_m);
        app->add_option("--sweep-sectors", scene.sweep_sectors);
    }
};

// Value of --config for `command`, if any.
std::string find_config(int argc, char **argv)
{
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--config" && i + 1 < argc)
            return argv[i + 1];
        if (a.rfind("--config=", 0) == 0)
            return a.substr(9);
    }
    return {};
}

struct Outputs {
    std::string dir = default_output_dir().string();
    std::string name;
};

void add_output_flags(CLI::App *sub, Outputs &out)
{
    sub->add_option("--out-dir", out.dir, "Output directory (default: $UAVMM_OUT_DIR or .)");
    sub->add_option("--name", out.name, "Output file stem (default: the command name)");
}

int finish(const std::string &command, const json &config, const Outputs &out)
{
    const RunOutput result = run_command(command, config);
    const std::string stem = out.name.empty() ? command : out.name;
    write_outputs(out.dir, stem, result);
    std::cout << (std::filesystem::path(out.dir) / (stem + ".csv")).string() << '\n';
    return 0;
}

template <class Config> struct Command {
    Config cfg;
    std::string config_path;
    Outputs out;
};

template <class Config>
void register_command(CLI::App &app, const std::string &name, const std::string &help, Command<Config> &cmd,
                      const std::string &active, const std::string &config_path, std::string &chosen)
{
    if (name == active && !config_path.empty())
        apply_json(cmd.cfg, load_json(config_path, name + ".config"), name);
    CLI::App *sub = app.add_subcommand(name, help);
    sub->add_option("--config", cmd.config_path, "JSON config or a previous run's sidecar");
    add_output_flags(sub, cmd.out);
    cmd.cfg.visit(Binder{sub});
    sub->callback([&chosen, name] { chosen = name; });
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Millimeter-wave UAV cellular simulations"};
    app.require_subcommand(1);

    std::string chosen;
    Command<PatternConfig> pattern;
    Command<CodebookCheckConfig> check;
    Command<ComplexityConfig> complexity;
    Command<SearchSimConfig> search;
    Command<SdmaSimConfig> sdma;
    Command<CapacityConfig> capacity;
    Command<DopplerConfig> doppler;
    Command<DeploySimConfig> deploy;

    std::string run_file;
    Outputs run_out;

    try {
        const std::string active = argc > 1 ? argv[1] : "";
        const std::string config_path = find_config(argc, argv);
        register_command(app, "pattern", "Beam pattern of one codeword", pattern, active, config_path, chosen);
        register_command(app, "codebook-check", "Constant-amplitude, sink and union-coverage report", check, active,
                         config_path, chosen);
        register_command(app, "complexity", "Training slots of exhaustive and hierarchical search", complexity,
                         active, config_path, chosen);
        register_command(app, "search-sim", "Beam search success rate against SNR", search, active, config_path,
                         chosen);
        register_command(app, "sdma-sim", "Multi-user MMSE-SIC sum rate against SNR", sdma, active, config_path,
                         chosen);
        register_command(app, "capacity", "Millimeter-wave against low-frequency capacity", capacity, active,
                         config_path, chosen);
        register_command(app, "doppler", "Doppler spread and coherence time", doppler, active, config_path, chosen);
        register_command(app, "deploy-sim", "Iterative UAV discovery and repositioning", deploy, active, config_path,
                         chosen);

        CLI::App *run = app.add_subcommand("run", "Re-run an experiment from its JSON sidecar");
        run->add_option("sidecar", run_file, "Sidecar written by an earlier run")->required();
        add_output_flags(run, run_out);
        run->callback([&chosen] { chosen = "run"; });

        try {
            app.parse(argc, argv);
        } catch (const CLI::ParseError &e) {
            const int code = app.exit(e);
            return code == 0 ? 0 : kConfigError;
        }

        if (chosen == "run") {
            const json j = load_json(run_file, "run.sidecar");
            if (!j.is_object() || !j.contains("command") || !j.at("command").is_string())
                throw ConfigError("run.sidecar.command", "missing or not a string");
            return finish(j.at("command").get<std::string>(), j, run_out);
        }
        if (chosen == "pattern")
            return finish(chosen, to_json(pattern.cfg, chosen), pattern.out);
        if (chosen == "codebook-check")
            return finish(chosen, to_json(check.cfg, chosen), check.out);
        if (chosen == "complexity")
            return finish(chosen, to_json(complexity.cfg, chosen), complexity.out);
        if (chosen == "search-sim")
            return finish(chosen, to_json(search.cfg, chosen), search.out);
        if (chosen == "sdma-sim")
            return finish(chosen, to_json(sdma.cfg, chosen), sdma.out);
        if (chosen == "capacity")
            return finish(chosen, to_json(capacity.cfg, chosen), capacity.out);
        if (chosen == "doppler")
            return finish(chosen, to_json(doppler.cfg, chosen), doppler.out);
        if (chosen == "deploy-sim")
            return finish(chosen, to_json(deploy.cfg, chosen), deploy.out);
        return kConfigError;
    } catch (const ConfigError &e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const std::invalid_argument &e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kRuntimeError;
    }
}
