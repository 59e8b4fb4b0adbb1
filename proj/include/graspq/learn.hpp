#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "graspq/dataset.hpp"
#include "graspq/execution.hpp"
#include "graspq/matrix.hpp"

namespace graspq {

double zero_one_score(const std::vector<int>& predictions, const std::vector<int>& labels);

// Vote-tie rule for kNN. Distance ties always break toward the lower
// training-row index first.
enum class TieRule { smallest_code, nearest_neighbor };

struct KnnModel {
    int k = 1;
    Matrix x;              // training features, one row per sample
    std::vector<int> labels;
    int classes = 0;
    TieRule tie_rule = TieRule::smallest_code;
};

KnnModel knn_fit(const Matrix& x, const std::vector<int>& labels, int k,
                 TieRule tie_rule = TieRule::smallest_code);
int knn_predict(const KnnModel& m, const std::vector<double>& q);
std::vector<int> knn_predict_batch(const KnnModel& m, const Matrix& queries,
                                   Execution exec = Execution::serial);

// feature < 0 marks a leaf; children index into TreeModel::nodes.
struct TreeNode {
    int feature = -1;
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    int cls = -1;
    std::vector<std::size_t> counts;  // per-class sample counts, leaves only

    bool operator==(const TreeNode&) const = default;
};

struct TreeModel {
    std::vector<TreeNode> nodes;  // root at index 0
    std::optional<int> max_depth;
    int min_samples_leaf = 1;
    int classes = 0;
};

TreeModel tree_fit(const Matrix& x, const std::vector<int>& labels,
                   std::optional<int> max_depth = std::nullopt, int min_samples_leaf = 1);
int tree_predict(const TreeModel& m, const std::vector<double>& q);
int tree_depth(const TreeModel& m);

enum class ModelKind { knn, tree };
const char* to_string(ModelKind k);

// One hyperparameter cell; `kind` selects which fields apply.
struct ModelSpec {
    ModelKind kind = ModelKind::knn;
    int k = 5;
    TieRule tie_rule = TieRule::smallest_code;
    std::optional<int> max_depth;
    int min_samples_leaf = 1;

    bool operator==(const ModelSpec&) const = default;
    std::string describe() const;
};

// TreeModel first: it is default-constructible, so a fresh variant is an
// empty tree rather than an invalid kNN model.
using Model = std::variant<TreeModel, KnnModel>;

Model fit_model(const ModelSpec& spec, const Matrix& x, const std::vector<int>& labels);
int predict(const Model& m, const std::vector<double>& q);
std::vector<int> predict_batch(const Model& m, const Matrix& queries,
                               Execution exec = Execution::serial);

// Small conventional grids; the CLI exposes per-flag overrides.
std::vector<ModelSpec> default_grid(ModelKind kind);
inline constexpr int kDefaultFolds = 5;

// Shuffled stratified fold assignment, one fold index per row. Fold sizes
// differ by at most 1 globally and per class.
std::vector<int> stratified_folds(const std::vector<int>& labels, int folds,
                                  std::uint64_t seed);

struct CvScore {
    double mean = 0.0;
    double std_dev = 0.0;                 // population std over folds
    std::vector<double> fold_accuracies;
};

CvScore cross_validate(const Matrix& x, const std::vector<int>& labels, int folds,
                       const ModelSpec& spec, std::uint64_t seed,
                       Execution exec = Execution::serial);

// Index of the maximum finite score; ties go to the earliest index. This is
// the whole grid-search selection rule, kept separate so it can be tested
// with injected scores.
std::size_t argmax_first(const std::vector<double>& scores);

struct GridCell {
    ModelSpec spec;
    bool ok = false;
    double mean = 0.0;
    double std_dev = 0.0;
    std::string error;
};

struct GridResult {
    ModelSpec best;
    double mean = 0.0;
    double std_dev = 0.0;
    std::vector<GridCell> cells;
    Model model;  // winner refit on the full training data
};

GridResult grid_search(const Matrix& x, const std::vector<int>& labels,
                       const std::vector<ModelSpec>& grid, int folds, std::uint64_t seed,
                       Execution exec = Execution::serial);

struct EvalResult {
    double accuracy = 0.0;
    std::vector<std::vector<std::size_t>> confusion;  // rows: true class, cols: predicted
    std::vector<int> predictions;
};

EvalResult evaluate(const Model& m, const Matrix& test_x, const std::vector<int>& test_labels,
                    int classes);

// Model file payload: parameters plus the metadata needed to apply the
// model to a freshly loaded dataset.
struct SavedModel {
    Model model;
    std::vector<std::string> feature_order;
    LabelScheme scheme = LabelScheme::ternary;

    ModelKind kind() const;
};

void save_model(const SavedModel& m, const std::filesystem::path& path);
SavedModel load_model(const std::filesystem::path& path);

}  // namespace graspq
