#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "graspq/dataset.hpp"
#include "graspq/execution.hpp"
#include "graspq/learn.hpp"

namespace graspq {

// Everything a subcommand can consume; the CLI fills the relevant subset.
struct RunConfig {
    std::string input;
    std::string output;
    std::string objects_path;
    std::string thresholds_path;
    std::string model_path;
    std::string report_path;
    std::string csv_path;
    std::vector<std::string> report_inputs;

    std::uint64_t seed = 0;
    bool strict = false;
    SplitMode split_mode = SplitMode::cluster;
    bool stratified = true;
    double test_fraction = 0.3;
    LabelScheme scheme = LabelScheme::ternary;
    std::vector<std::string> metrics;  // empty or {"all"} selects all seven
    ModelKind model = ModelKind::knn;
    int folds = kDefaultFolds;
    int cone_edges = 8;
    std::optional<double> torque_scale;
    bool force_space = false;  // 3-D force hull instead of the 6-D wrench hull
    Execution exec = Execution::parallel;

    std::string preset = "separable";
    std::size_t count = 600;

    // Grid overrides; empty means the built-in defaults.
    std::vector<int> grid_k;
    std::vector<std::string> grid_depth;  // integers or "none"
    std::vector<int> grid_leaf;
};

std::vector<std::string> resolve_metrics(const std::vector<std::string>& requested);

int cmd_compute_metrics(const RunConfig& cfg);
int cmd_label(const RunConfig& cfg);
int cmd_train(const RunConfig& cfg);
int cmd_evaluate(const RunConfig& cfg);
int cmd_report(const RunConfig& cfg);
int cmd_synth(const RunConfig& cfg);

}  // namespace graspq
