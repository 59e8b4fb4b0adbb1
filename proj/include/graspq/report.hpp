#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "graspq/dataset.hpp"
#include "graspq/learn.hpp"

namespace graspq {

// The reported Std is this and nothing else; the flag travels with every
// report so the interpretation is visible in the artifact itself.
inline constexpr const char* kStdDefinition =
    "population std of held-out fold accuracy over cross-validation folds on the training split";

struct ReportEntry {
    std::string row_label;   // table row, e.g. "$Q_{D1}$" or "Classification Trees"
    std::string regime;      // column group, e.g. "3-categories scale"
    std::string label_scheme;
    std::string model;
    std::vector<std::string> metrics;
    int folds = 0;
    std::uint64_t seed = 0;
    std::string hyperparameters;
    double train_mean = 0.0;
    double train_std = 0.0;
    double test_accuracy = 0.0;
    std::vector<std::vector<std::size_t>> confusion;  // may be empty
    std::string std_definition = kStdDefinition;

    bool operator==(const ReportEntry&) const = default;
};

std::vector<ReportEntry> load_report(const std::filesystem::path& path);
void save_report(const std::vector<ReportEntry>& entries, const std::filesystem::path& path);

// Aligned text table: rows in first-appearance order, one column group per
// regime, cells "Train $\pm$ Std & Test". Duplicate (row, regime) pairs are
// a SchemaError.
std::string render_table(const std::vector<ReportEntry>& entries);
std::string render_csv(const std::vector<ReportEntry>& entries);

std::string metric_display(const std::string& name);  // "q_a1" -> "$Q_{A1}$"
std::string model_display(ModelKind kind);
std::string regime_display(LabelScheme scheme);

// Row label for a trained configuration: the metric symbol when a single
// metric is used, the classifier name for the full set, a join otherwise.
std::string row_label_for(const std::vector<std::string>& metrics, ModelKind kind);

}  // namespace graspq
