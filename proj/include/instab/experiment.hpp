#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "instab/maps.hpp"
#include "instab/report.hpp"

namespace instab {

enum class ExperimentKind {
    Simulate,
    VerifyBound,
    CertifyInstability,
    CertifyStability,
    RemainderProfile,
    Cone,
    Sandwich,
    CharSolver,
};

const char* experiment_kind_name(ExperimentKind k);

struct ExperimentConfig {
    std::string name;
    ExperimentKind kind = ExperimentKind::Simulate;
    bool expect_fail = false;
    nlohmann::json body;  // validated kind-specific fields
};

struct RunConfig {
    std::string out_dir = "out";
    std::vector<ExperimentConfig> experiments;
};

/// Parses and validates a full run configuration. Unknown keys are rejected;
/// JSON syntax errors carry line and column.
RunConfig parse_run_config(const std::string& json_text);

MapSpec map_from_json(const nlohmann::json& j, const std::string& path);
AlphaProfile alpha_from_json(const nlohmann::json& j, const std::string& path);

struct ExperimentOutput {
    std::string name;
    BoundReport report;
    std::string data_csv;
    nlohmann::json extra;
    bool expect_fail = false;
    bool outcome_ok = false;  // verdict consistent with the expectation
};

ExperimentOutput run_experiment(const ExperimentConfig& cfg);

/// Runs every experiment (jobs > 1 runs them concurrently), writing
/// <out>/<name>/data.csv, <out>/<name>/report.json and <out>/summary.json.
/// Returns 0 when every outcome matches its expectation, 2 otherwise.
int run_all(const RunConfig& cfg, const std::string& out_override, std::size_t jobs);

} // namespace instab
