#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bergman/common.hpp"

namespace bergman {

/// One experiment invocation: command, specs, parameters, grids, output.
struct ExperimentConfig {
    std::string command;
    std::string weight;
    std::string nu;
    std::vector<std::string> symbols;
    double p = 2.0;
    int N = 1;
    std::optional<int> n;
    int M = 128;
    double gamma = 0.5;
    std::optional<double> lambda;
    double r = 1.0;
    std::vector<double> z;
    int grid_depth = 0;  // 0: module defaults
    double tol = 0.0;    // 0: module defaults
    std::string which = "all";
    double alpha = 0.0;
    std::string out;  // empty: stdout
    std::string format = "json";
    bool exploratory = false;

    friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Parses command-line style arguments (without the program name). A leading
/// positional token is the command; --config <path> loads a JSON config.
ExperimentConfig parse_config(const std::vector<std::string>& args);

nlohmann::ordered_json config_to_json(const ExperimentConfig& config);
/// Rejects unknown keys and out-of-range values.
ExperimentConfig config_from_json(const nlohmann::ordered_json& j);

struct RunResult {
    nlohmann::ordered_json report;  // {config, reports, summary, provenance}
    int exit_code = 0;              // 0 pass/report, 3 failed verdict
};

/// Dispatches the configured command. Throws on invalid input; verdict
/// failures are reported through the exit code, not exceptions.
RunResult run(const ExperimentConfig& config);

/// Serializes a report deterministically: identical configs and library
/// version produce byte-identical output.
std::string render_report(const nlohmann::ordered_json& report,
                          const std::string& format);
void emit(const nlohmann::ordered_json& report, const std::string& format,
          const std::string& path);

}  // namespace bergman
