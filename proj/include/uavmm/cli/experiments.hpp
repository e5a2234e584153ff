// SPDX-License-Identifier: Apache-2.0

#ifndef UAVMM_CLI_EXPERIMENTS_HPP
#define UAVMM_CLI_EXPERIMENTS_HPP

#include <json.hpp>

#include <filesystem>
#include <string>

namespace uavmm::cli {

struct RunOutput {
    std::string csv;
    nlohmann::json resolved; // every field, defaults included; doubles as a config
};

// Fills defaults, validates (ConfigError) and runs one experiment.
RunOutput run_command(const std::string &command, const nlohmann::json &config);

// Writes <dir>/<stem>.csv and <dir>/<stem>.json. Throws std::runtime_error
// on I/O failure.
void write_outputs(const std::filesystem::path &dir, const std::string &stem, const RunOutput &out);

// Directory from UAVMM_OUT_DIR, else ".".
std::filesystem::path default_output_dir();

} // namespace uavmm::cli

#endif
