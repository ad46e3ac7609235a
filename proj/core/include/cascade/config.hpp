#pragma once

#include <string>
#include <vector>

#include "cascade/orchestrator.hpp"

namespace cascade {

// One experiment run: which policies to execute, where the inputs live, and
// the per-module config blocks.
struct RunConfig {
    RunMode mode = RunMode::Sim;
    int workers = 1;
    std::vector<std::string> policies;
    std::string dataset_path;
    std::string fixture_path;
    std::string out_dir = "out";
    std::string wire_log_path;

    std::string edge_backend = "scripted";        // scripted
    std::string asr_backend = "scripted";         // scripted
    std::string controller_backend = "scripted";  // scripted | local | remote
    std::string controller_url;                   // remote controller endpoint

    RunConfigs configs;
};

// Loads and validates a run-configuration file. Relative dataset/fixture
// paths resolve against the config file's directory. Errors carry file
// context.
RunConfig load_run_config(const std::string& path);

// Parses the JSON text directly (paths resolve against base_dir when given).
RunConfig parse_run_config(const std::string& text, const std::string& base_dir = "");

// Environment variable consulted for the remote controller endpoint when the
// config does not name one.
inline constexpr const char* kControllerUrlEnv = "CASCADE_CONTROLLER_URL";

}  // namespace cascade
