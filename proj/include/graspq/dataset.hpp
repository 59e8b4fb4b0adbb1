#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "graspq/grasp.hpp"
#include "graspq/matrix.hpp"
#include "graspq/metrics.hpp"

namespace graspq {

enum class Outcome { stable, unstable };

// One recorded execution of a grasp. `context` is carried verbatim
// (object variant, gravity tag, free-form notes) and never interpreted.
struct ExecutionOutcome {
    Outcome outcome = Outcome::unstable;
    nlohmann::ordered_json context = nlohmann::ordered_json::object();

    bool operator==(const ExecutionOutcome& o) const {
        return outcome == o.outcome && context == o.context;
    }
};

// Class codes are the on-disk label encoding; they are written into model
// files, so renumbering them breaks saved models.
enum class BinaryLabel : int { unstable = 0, stable = 1 };
enum class TernaryLabel : int { robust = 0, fragile = 1, futile = 2 };

const char* to_string(Outcome o);
const char* to_string(BinaryLabel l);
const char* to_string(TernaryLabel l);

struct GraspRecord {
    std::string grasp_id;
    std::string cluster_id;
    std::string robot;
    std::string object;

    // Geometric payload; optional when a precomputed quality vector is present.
    std::optional<std::vector<Contact>> contacts;
    std::optional<HandPosture> posture;
    std::optional<Matrix> jacobian;

    // Metric values in kMetricNames order; inner optionals mark metrics that
    // could not be computed (e.g. q_d2 without a Jacobian).
    std::optional<std::array<std::optional<double>, kMetricCount>> quality;

    std::vector<ExecutionOutcome> executions;
    std::optional<BinaryLabel> binary_label;
    std::optional<TernaryLabel> ternary_label;

    bool operator==(const GraspRecord& o) const;
};

struct Dataset {
    std::vector<GraspRecord> records;
    std::array<const char*, kMetricCount> feature_order = kMetricNames;
    std::string source;  // provenance only, not serialized
};

Dataset load_dataset(const std::filesystem::path& path);
void save_dataset(const Dataset& ds, const std::filesystem::path& path);

// Single-record JSON (one dataset line) in the canonical field order.
nlohmann::ordered_json record_to_json(const GraspRecord& r);
GraspRecord record_from_json(const nlohmann::ordered_json& j);

// Objects side file: one JSON document holding every referenced ObjectModel.
using ObjectMap = std::map<std::string, std::shared_ptr<const ObjectModel>>;
ObjectMap load_objects(const std::filesystem::path& path);
void save_objects(const ObjectMap& objects, const std::filesystem::path& path);

// Resolves a record's geometric payload against the object table.
GraspInstance make_instance(const GraspRecord& r, const ObjectMap& objects);

BinaryLabel binary_label(const GraspRecord& r);
TernaryLabel ternary_label(const std::vector<const GraspRecord*>& cluster);

// Labels every record that has executions (binary per record, ternary per
// cluster); returns the grasp_ids of records excluded for having none.
std::vector<std::string> apply_labels(Dataset& ds);

enum class LabelScheme { binary, ternary };
enum class SplitMode { record, cluster };
const char* to_string(LabelScheme s);

struct SplitOptions {
    double test_fraction = 0.3;
    std::uint64_t seed = 0;
    bool stratified = true;
    SplitMode mode = SplitMode::cluster;
    LabelScheme scheme = LabelScheme::ternary;  // stratification classes
};

std::pair<Dataset, Dataset> split(const Dataset& ds, const SplitOptions& opt);

struct FeatureMatrix {
    Matrix x;
    std::vector<int> labels;  // class codes per LabelScheme encoding
    std::vector<std::string> metric_names;
};

FeatureMatrix feature_matrix(const Dataset& ds, const std::vector<std::string>& selected,
                             LabelScheme scheme);

// Class code of a record under a scheme; throws InvalidInput if unlabeled.
int class_code(const GraspRecord& r, LabelScheme scheme);
int class_count(LabelScheme scheme);
std::string class_name(LabelScheme scheme, int code);

}  // namespace graspq
