#include "graspq/learn.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <set>

#include <json.hpp>

#include "graspq/error.hpp"
#include "graspq/rng.hpp"

namespace graspq {

using nlohmann::ordered_json;

double zero_one_score(const std::vector<int>& predictions, const std::vector<int>& labels) {
    if (predictions.size() != labels.size())
        throw InvalidInput("prediction/label length mismatch");
    if (predictions.empty()) throw InvalidInput("nothing to score");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < predictions.size(); ++i)
        if (predictions[i] == labels[i]) ++hits;
    return static_cast<double>(hits) / static_cast<double>(predictions.size());
}

namespace {

int infer_classes(const std::vector<int>& labels) {
    int classes = 0;
    for (int l : labels) {
        if (l < 0) throw InvalidInput("negative class code");
        classes = std::max(classes, l + 1);
    }
    return classes;
}

std::vector<double> row_of(const Matrix& m, std::size_t i) {
    std::vector<double> r(m.cols());
    for (std::size_t j = 0; j < m.cols(); ++j) r[j] = m(i, j);
    return r;
}

}  // namespace

KnnModel knn_fit(const Matrix& x, const std::vector<int>& labels, int k, TieRule tie_rule) {
    if (labels.size() != x.rows()) throw InvalidInput("kNN: row/label count mismatch");
    if (!x.all_finite()) throw InvalidInput("kNN: non-finite feature");
    if (k < 1) throw InvalidInput("kNN: k must be >= 1");
    if (static_cast<std::size_t>(k) > x.rows())
        throw InvalidInput("kNN: k exceeds the number of training rows");
    return KnnModel{k, x, labels, infer_classes(labels), tie_rule};
}

int knn_predict(const KnnModel& m, const std::vector<double>& q) {
    if (q.size() != m.x.cols()) throw InvalidInput("kNN: query dimension mismatch");
    std::vector<std::pair<double, std::size_t>> order(m.x.rows());
    for (std::size_t i = 0; i < m.x.rows(); ++i) {
        double d2 = 0.0;
        for (std::size_t j = 0; j < m.x.cols(); ++j) {
            const double d = m.x(i, j) - q[j];
            d2 += d * d;
        }
        order[i] = {d2, i};
    }
    // Pair comparison breaks distance ties toward the lower row index.
    std::sort(order.begin(), order.end());
    std::vector<int> votes(m.classes, 0);
    for (int n = 0; n < m.k; ++n) ++votes[static_cast<std::size_t>(m.labels[order[n].second])];
    int best = 0;
    for (int c = 1; c < m.classes; ++c)
        if (votes[c] > votes[best]) best = c;
    if (m.tie_rule == TieRule::nearest_neighbor) {
        for (int n = 0; n < m.k; ++n) {
            const int c = m.labels[order[n].second];
            if (votes[c] == votes[best]) return c;  // earliest neighbor among tied classes
        }
    }
    return best;  // smallest class code among ties
}

std::vector<int> knn_predict_batch(const KnnModel& m, const Matrix& queries, Execution exec) {
    if (queries.cols() != m.x.cols()) throw InvalidInput("kNN: query dimension mismatch");
    std::vector<int> out(queries.rows(), 0);
    if (exec == Execution::parallel) {
        const long n = static_cast<long>(queries.rows());
#pragma omp parallel for schedule(static)
        for (long i = 0; i < n; ++i)
            out[i] = knn_predict(m, row_of(queries, static_cast<std::size_t>(i)));
    } else {
        for (std::size_t i = 0; i < queries.rows(); ++i) out[i] = knn_predict(m, row_of(queries, i));
    }
    return out;
}

namespace {

double gini(const std::vector<std::size_t>& counts, std::size_t total) {
    if (total == 0) return 0.0;
    double g = 1.0;
    for (std::size_t c : counts) {
        const double p = static_cast<double>(c) / static_cast<double>(total);
        g -= p * p;
    }
    return g;
}

int majority(const std::vector<std::size_t>& counts) {
    std::size_t idx = 0;
    for (std::size_t c = 1; c < counts.size(); ++c)
        if (counts[c] > counts[idx]) idx = c;  // tie keeps the smaller class code
    return static_cast<int>(idx);
}

struct TreeBuilder {
    const Matrix& x;
    const std::vector<int>& labels;
    std::optional<int> max_depth;
    int min_samples_leaf;
    int classes;
    std::vector<TreeNode> nodes;

    int build(const std::vector<std::size_t>& idx, int depth) {
        const int id = static_cast<int>(nodes.size());
        nodes.emplace_back();

        std::vector<std::size_t> counts(classes, 0);
        for (std::size_t i : idx) ++counts[static_cast<std::size_t>(labels[i])];
        const bool pure =
            *std::max_element(counts.begin(), counts.end()) == idx.size();
        const bool depth_stop = max_depth && depth >= *max_depth;

        int best_feature = -1;
        double best_threshold = 0.0;
        double best_impurity = std::numeric_limits<double>::infinity();
        if (!pure && !depth_stop &&
            idx.size() >= 2 * static_cast<std::size_t>(min_samples_leaf)) {
            const std::size_t n = idx.size();
            for (std::size_t f = 0; f < x.cols(); ++f) {
                std::vector<std::pair<double, int>> vals(n);
                for (std::size_t s = 0; s < n; ++s)
                    vals[s] = {x(idx[s], f), labels[idx[s]]};
                std::sort(vals.begin(), vals.end(),
                          [](const auto& a, const auto& b) { return a.first < b.first; });
                std::vector<std::size_t> left(classes, 0);
                std::vector<std::size_t> right = counts;
                for (std::size_t s = 0; s + 1 < n; ++s) {
                    ++left[static_cast<std::size_t>(vals[s].second)];
                    --right[static_cast<std::size_t>(vals[s].second)];
                    if (vals[s].first == vals[s + 1].first) continue;
                    const std::size_t nl = s + 1;
                    const std::size_t nr = n - nl;
                    if (nl < static_cast<std::size_t>(min_samples_leaf) ||
                        nr < static_cast<std::size_t>(min_samples_leaf))
                        continue;
                    const double impurity = (static_cast<double>(nl) * gini(left, nl) +
                                             static_cast<double>(nr) * gini(right, nr)) /
                                            static_cast<double>(n);
                    // Strict < keeps the first (feature, threshold) on ties.
                    if (impurity < best_impurity) {
                        best_impurity = impurity;
                        best_feature = static_cast<int>(f);
                        best_threshold = 0.5 * (vals[s].first + vals[s + 1].first);
                    }
                }
            }
        }

        if (best_feature < 0) {
            nodes[id].cls = majority(counts);
            nodes[id].counts = std::move(counts);
            return id;
        }

        std::vector<std::size_t> li;
        std::vector<std::size_t> ri;
        for (std::size_t i : idx) {
            if (x(i, static_cast<std::size_t>(best_feature)) <= best_threshold)
                li.push_back(i);
            else
                ri.push_back(i);
        }
        nodes[id].feature = best_feature;
        nodes[id].threshold = best_threshold;
        const int l = build(li, depth + 1);
        const int r = build(ri, depth + 1);
        nodes[id].left = l;
        nodes[id].right = r;
        return id;
    }
};

}  // namespace

TreeModel tree_fit(const Matrix& x, const std::vector<int>& labels, std::optional<int> max_depth,
                   int min_samples_leaf) {
    if (labels.size() != x.rows()) throw InvalidInput("tree: row/label count mismatch");
    if (!x.all_finite()) throw InvalidInput("tree: non-finite feature");
    if (min_samples_leaf < 1) throw InvalidInput("tree: min_samples_leaf must be >= 1");
    if (max_depth && *max_depth < 0) throw InvalidInput("tree: negative max_depth");
    TreeBuilder b{x, labels, max_depth, min_samples_leaf, infer_classes(labels), {}};
    std::vector<std::size_t> idx(x.rows());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    b.build(idx, 0);
    return TreeModel{std::move(b.nodes), max_depth, min_samples_leaf, b.classes};
}

int tree_predict(const TreeModel& m, const std::vector<double>& q) {
    if (m.nodes.empty()) throw InvalidInput("tree: empty model");
    int at = 0;
    while (m.nodes[static_cast<std::size_t>(at)].feature >= 0) {
        const TreeNode& n = m.nodes[static_cast<std::size_t>(at)];
        if (static_cast<std::size_t>(n.feature) >= q.size())
            throw InvalidInput("tree: query dimension mismatch");
        at = q[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right;
    }
    return m.nodes[static_cast<std::size_t>(at)].cls;
}

namespace {

int depth_below(const TreeModel& m, int at) {
    const TreeNode& n = m.nodes[static_cast<std::size_t>(at)];
    if (n.feature < 0) return 0;
    return 1 + std::max(depth_below(m, n.left), depth_below(m, n.right));
}

}  // namespace

int tree_depth(const TreeModel& m) {
    if (m.nodes.empty()) return 0;
    return depth_below(m, 0);
}

const char* to_string(ModelKind k) { return k == ModelKind::knn ? "knn" : "tree"; }

std::string ModelSpec::describe() const {
    char buf[96];
    if (kind == ModelKind::knn) {
        std::snprintf(buf, sizeof(buf), "knn(k=%d%s)", k,
                      tie_rule == TieRule::nearest_neighbor ? " tie=nearest_neighbor" : "");
    } else if (max_depth) {
        std::snprintf(buf, sizeof(buf), "tree(max_depth=%d min_samples_leaf=%d)", *max_depth,
                      min_samples_leaf);
    } else {
        std::snprintf(buf, sizeof(buf), "tree(max_depth=none min_samples_leaf=%d)",
                      min_samples_leaf);
    }
    return buf;
}

Model fit_model(const ModelSpec& spec, const Matrix& x, const std::vector<int>& labels) {
    if (spec.kind == ModelKind::knn) return knn_fit(x, labels, spec.k, spec.tie_rule);
    return tree_fit(x, labels, spec.max_depth, spec.min_samples_leaf);
}

int predict(const Model& m, const std::vector<double>& q) {
    return std::visit([&](const auto& model) {
        using T = std::decay_t<decltype(model)>;
        if constexpr (std::is_same_v<T, KnnModel>)
            return knn_predict(model, q);
        else
            return tree_predict(model, q);
    }, m);
}

std::vector<int> predict_batch(const Model& m, const Matrix& queries, Execution exec) {
    if (const auto* knn = std::get_if<KnnModel>(&m)) return knn_predict_batch(*knn, queries, exec);
    const auto& tree = std::get<TreeModel>(m);
    std::vector<int> out(queries.rows(), 0);
    if (exec == Execution::parallel) {
        const long n = static_cast<long>(queries.rows());
#pragma omp parallel for schedule(static)
        for (long i = 0; i < n; ++i)
            out[i] = tree_predict(tree, row_of(queries, static_cast<std::size_t>(i)));
    } else {
        for (std::size_t i = 0; i < queries.rows(); ++i) out[i] = tree_predict(tree, row_of(queries, i));
    }
    return out;
}

std::vector<ModelSpec> default_grid(ModelKind kind) {
    std::vector<ModelSpec> grid;
    if (kind == ModelKind::knn) {
        for (int k : {1, 3, 5, 7, 9, 11}) {
            ModelSpec s;
            s.kind = ModelKind::knn;
            s.k = k;
            grid.push_back(s);
        }
        return grid;
    }
    const std::optional<int> depths[] = {2, 3, 4, 5, 6, 8, 10, std::nullopt};
    for (const auto& d : depths)
        for (int leaf : {1, 2, 5}) {
            ModelSpec s;
            s.kind = ModelKind::tree;
            s.max_depth = d;
            s.min_samples_leaf = leaf;
            grid.push_back(s);
        }
    return grid;
}

std::vector<int> stratified_folds(const std::vector<int>& labels, int folds,
                                  std::uint64_t seed) {
    const std::size_t n = labels.size();
    if (folds < 1) throw InvalidInput("folds must be >= 1");
    if (static_cast<std::size_t>(folds) > n) throw InvalidInput("more folds than rows");
    const int classes = infer_classes(labels);
    std::vector<std::vector<std::size_t>> by_class(classes);
    for (std::size_t i = 0; i < n; ++i) by_class[static_cast<std::size_t>(labels[i])].push_back(i);
    Rng rng(seed);
    std::vector<int> fold(n, 0);
    // One round-robin counter continuing across classes keeps global fold
    // sizes within +-1 as well as per-class sizes.
    std::size_t counter = 0;
    for (int c = 0; c < classes; ++c) {
        auto& idx = by_class[static_cast<std::size_t>(c)];
        rng.shuffle(idx);
        for (std::size_t i : idx) fold[i] = static_cast<int>(counter++ % folds);
    }
    return fold;
}

CvScore cross_validate(const Matrix& x, const std::vector<int>& labels, int folds,
                       const ModelSpec& spec, std::uint64_t seed, Execution exec) {
    if (labels.size() != x.rows()) throw InvalidInput("CV: row/label count mismatch");
    if (folds < 2) throw InvalidInput("CV: need at least 2 folds");
    if (static_cast<std::size_t>(folds) > x.rows()) throw InvalidInput("CV: more folds than rows");
    const std::vector<int> assignment = stratified_folds(labels, folds, seed);

    std::vector<double> acc(folds, 0.0);
    std::vector<std::string> errors(folds);
    auto run_fold = [&](int f) {
        std::vector<std::size_t> train;
        std::vector<std::size_t> test;
        for (std::size_t i = 0; i < assignment.size(); ++i)
            (assignment[i] == f ? test : train).push_back(i);
        Matrix tx(train.size(), x.cols());
        std::vector<int> tl(train.size());
        for (std::size_t i = 0; i < train.size(); ++i) {
            for (std::size_t j = 0; j < x.cols(); ++j) tx(i, j) = x(train[i], j);
            tl[i] = labels[train[i]];
        }
        const Model model = fit_model(spec, tx, tl);
        std::vector<int> pred(test.size());
        std::vector<int> truth(test.size());
        for (std::size_t i = 0; i < test.size(); ++i) {
            pred[i] = predict(model, row_of(x, test[i]));
            truth[i] = labels[test[i]];
        }
        acc[static_cast<std::size_t>(f)] = zero_one_score(pred, truth);
    };

    if (exec == Execution::parallel) {
#pragma omp parallel for schedule(dynamic)
        for (int f = 0; f < folds; ++f) {
            try {
                run_fold(f);
            } catch (const std::exception& e) {
                errors[static_cast<std::size_t>(f)] = e.what();
            }
        }
        for (int f = 0; f < folds; ++f)
            if (!errors[static_cast<std::size_t>(f)].empty())
                throw InvalidInput("fold " + std::to_string(f) + ": " +
                                   errors[static_cast<std::size_t>(f)]);
    } else {
        for (int f = 0; f < folds; ++f) run_fold(f);
    }

    CvScore score;
    score.fold_accuracies = acc;
    for (double a : acc) score.mean += a;
    score.mean /= static_cast<double>(folds);
    double var = 0.0;
    for (double a : acc) var += (a - score.mean) * (a - score.mean);
    score.std_dev = std::sqrt(var / static_cast<double>(folds));
    return score;
}

std::size_t argmax_first(const std::vector<double>& scores) {
    std::size_t best = scores.size();
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (!std::isfinite(scores[i])) continue;
        if (best == scores.size() || scores[i] > scores[best]) best = i;
    }
    if (best == scores.size()) throw InvalidInput("no finite scores");
    return best;
}

GridResult grid_search(const Matrix& x, const std::vector<int>& labels,
                       const std::vector<ModelSpec>& grid, int folds, std::uint64_t seed,
                       Execution exec) {
    if (grid.empty()) throw InvalidInput("empty hyperparameter grid");
    std::vector<GridCell> cells(grid.size());
    const long n = static_cast<long>(grid.size());
    auto run_cell = [&](long i) {
        GridCell& cell = cells[static_cast<std::size_t>(i)];
        cell.spec = grid[static_cast<std::size_t>(i)];
        try {
            // Same seed everywhere: every cell sees the same fold partition.
            const CvScore s = cross_validate(x, labels, folds, cell.spec, seed);
            cell.mean = s.mean;
            cell.std_dev = s.std_dev;
            cell.ok = true;
        } catch (const std::exception& e) {
            cell.error = e.what();
        }
    };
    if (exec == Execution::parallel) {
#pragma omp parallel for schedule(dynamic)
        for (long i = 0; i < n; ++i) run_cell(i);
    } else {
        for (long i = 0; i < n; ++i) run_cell(i);
    }

    std::vector<double> means(cells.size(), -std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < cells.size(); ++i)
        if (cells[i].ok) means[i] = cells[i].mean;
    std::size_t winner = 0;
    try {
        winner = argmax_first(means);
    } catch (const InvalidInput&) {
        throw InvalidInput("every grid cell failed; first error: " + cells.front().error);
    }

    GridResult result;
    result.best = cells[winner].spec;
    result.mean = cells[winner].mean;
    result.std_dev = cells[winner].std_dev;
    result.cells = std::move(cells);
    result.model = fit_model(result.best, x, labels);
    return result;
}

EvalResult evaluate(const Model& m, const Matrix& test_x, const std::vector<int>& test_labels,
                    int classes) {
    if (test_labels.size() != test_x.rows()) throw InvalidInput("eval: row/label count mismatch");
    if (classes < 1) throw InvalidInput("eval: need at least one class");
    for (int l : test_labels)
        if (l < 0 || l >= classes) throw InvalidInput("eval: label outside class range");
    EvalResult r;
    r.confusion.assign(static_cast<std::size_t>(classes),
                       std::vector<std::size_t>(static_cast<std::size_t>(classes), 0));
    r.predictions.resize(test_x.rows());
    for (std::size_t i = 0; i < test_x.rows(); ++i) {
        const int p = predict(m, row_of(test_x, i));
        if (p < 0 || p >= classes) throw InvalidInput("eval: prediction outside class range");
        r.predictions[i] = p;
        ++r.confusion[static_cast<std::size_t>(test_labels[i])][static_cast<std::size_t>(p)];
    }
    r.accuracy = zero_one_score(r.predictions, test_labels);
    return r;
}

ModelKind SavedModel::kind() const {
    return std::holds_alternative<KnnModel>(model) ? ModelKind::knn : ModelKind::tree;
}

namespace {

ordered_json label_encoding_json(LabelScheme scheme) {
    ordered_json j = ordered_json::object();
    for (int c = 0; c < class_count(scheme); ++c) j[class_name(scheme, c)] = c;
    return j;
}

ordered_json matrix_to_json(const Matrix& m) {
    ordered_json rows = ordered_json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        ordered_json row = ordered_json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

Matrix matrix_from_json(const ordered_json& j) {
    if (!j.is_array() || j.empty()) throw ParseError("matrix must be a non-empty array of rows");
    std::vector<std::vector<double>> rows;
    for (const auto& jr : j) {
        if (!jr.is_array() || jr.empty() || (!rows.empty() && jr.size() != rows.front().size()))
            throw ParseError("matrix rows must be non-empty and rectangular");
        std::vector<double> row;
        for (const auto& v : jr) {
            if (!v.is_number()) throw ParseError("matrix entries must be numbers");
            row.push_back(v.get<double>());
        }
        rows.push_back(std::move(row));
    }
    Matrix m(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
    return m;
}

std::vector<int> ints_from_json(const ordered_json& j, const char* what) {
    if (!j.is_array()) throw ParseError(std::string(what) + " must be an array");
    std::vector<int> out;
    for (const auto& v : j) {
        if (!v.is_number_integer()) throw ParseError(std::string(what) + " must hold integers");
        out.push_back(v.get<int>());
    }
    return out;
}

}  // namespace

void save_model(const SavedModel& m, const std::filesystem::path& path) {
    ordered_json j = ordered_json::object();
    j["version"] = 1;
    j["kind"] = to_string(m.kind());
    j["feature_order"] = m.feature_order;
    j["label_encoding"] = label_encoding_json(m.scheme);
    ordered_json hp = ordered_json::object();
    ordered_json params = ordered_json::object();
    if (const auto* knn = std::get_if<KnnModel>(&m.model)) {
        hp["k"] = knn->k;
        hp["tie_rule"] =
            knn->tie_rule == TieRule::nearest_neighbor ? "nearest_neighbor" : "smallest_code";
        params["classes"] = knn->classes;
        params["x"] = matrix_to_json(knn->x);
        params["labels"] = knn->labels;
    } else {
        const auto& tree = std::get<TreeModel>(m.model);
        if (tree.max_depth)
            hp["max_depth"] = *tree.max_depth;
        else
            hp["max_depth"] = nullptr;
        hp["min_samples_leaf"] = tree.min_samples_leaf;
        params["classes"] = tree.classes;
        ordered_json nodes = ordered_json::array();
        for (const TreeNode& n : tree.nodes) {
            ordered_json jn = ordered_json::object();
            if (n.feature >= 0) {
                jn["feature"] = n.feature;
                jn["threshold"] = n.threshold;
                jn["left"] = n.left;
                jn["right"] = n.right;
            } else {
                jn["class"] = n.cls;
                jn["counts"] = n.counts;
            }
            nodes.push_back(std::move(jn));
        }
        params["nodes"] = std::move(nodes);
    }
    j["hyperparameters"] = std::move(hp);
    j["parameters"] = std::move(params);
    std::ofstream out(path);
    if (!out) throw Error("cannot write model file: " + path.string());
    out << j.dump(2) << '\n';
}

SavedModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open model file: " + path.string());
    ordered_json j;
    try {
        j = ordered_json::parse(in);
    } catch (const std::exception& e) {
        throw ParseError(std::string("model file: invalid JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("version") || !j.at("version").is_number_integer())
        throw ParseError("model file has no integer version field");
    if (j.at("version").get<int>() != 1)
        throw UnsupportedModelVersion("model version " + j.at("version").dump() +
                                      " not supported (expected 1)");
    for (const char* key : {"kind", "feature_order", "label_encoding", "hyperparameters",
                            "parameters"})
        if (!j.contains(key)) throw ParseError(std::string("model file missing '") + key + "'");

    SavedModel m;
    if (!j.at("feature_order").is_array() || j.at("feature_order").empty())
        throw ParseError("feature_order must be a non-empty array");
    std::set<std::string> seen;
    for (const auto& v : j.at("feature_order")) {
        if (!v.is_string()) throw ParseError("feature_order entries must be strings");
        const std::string name = v.get<std::string>();
        if (metric_index(name) < 0) throw ParseError("feature_order has unknown metric " + name);
        if (!seen.insert(name).second) throw ParseError("feature_order repeats " + name);
        m.feature_order.push_back(name);
    }
    bool scheme_found = false;
    for (LabelScheme s : {LabelScheme::binary, LabelScheme::ternary}) {
        if (j.at("label_encoding") == label_encoding_json(s)) {
            m.scheme = s;
            scheme_found = true;
            break;
        }
    }
    if (!scheme_found) throw ParseError("label_encoding matches no known scheme");
    const int classes_expected = class_count(m.scheme);

    const std::string kind = j.at("kind").is_string() ? j.at("kind").get<std::string>() : "";
    const auto& hp = j.at("hyperparameters");
    const auto& params = j.at("parameters");
    if (!hp.is_object() || !params.is_object())
        throw ParseError("hyperparameters/parameters must be objects");
    if (!params.contains("classes") || !params.at("classes").is_number_integer())
        throw ParseError("parameters.classes must be an integer");
    const int classes = params.at("classes").get<int>();
    if (classes != classes_expected)
        throw ParseError("parameters.classes disagrees with label_encoding");

    if (kind == "knn") {
        if (!hp.contains("k") || !hp.at("k").is_number_integer())
            throw ParseError("kNN model needs integer hyperparameter k");
        TieRule tie = TieRule::smallest_code;
        if (hp.contains("tie_rule")) {
            const std::string t =
                hp.at("tie_rule").is_string() ? hp.at("tie_rule").get<std::string>() : "";
            if (t == "nearest_neighbor")
                tie = TieRule::nearest_neighbor;
            else if (t != "smallest_code")
                throw ParseError("unknown tie_rule: " + t);
        }
        if (!params.contains("x") || !params.contains("labels"))
            throw ParseError("kNN model needs parameters x and labels");
        Matrix x = matrix_from_json(params.at("x"));
        std::vector<int> labels = ints_from_json(params.at("labels"), "labels");
        for (int l : labels)
            if (l < 0 || l >= classes) throw ParseError("label outside class range");
        if (x.cols() != m.feature_order.size())
            throw ParseError("training matrix width disagrees with feature_order");
        KnnModel knn = knn_fit(x, labels, hp.at("k").get<int>(), tie);
        knn.classes = classes;  // keep encoding width even if a class is absent
        m.model = std::move(knn);
        return m;
    }
    if (kind != "tree") throw ParseError("unknown model kind: " + kind);

    TreeModel tree;
    tree.classes = classes;
    if (hp.contains("max_depth") && !hp.at("max_depth").is_null()) {
        if (!hp.at("max_depth").is_number_integer())
            throw ParseError("max_depth must be an integer or null");
        tree.max_depth = hp.at("max_depth").get<int>();
    }
    if (!hp.contains("min_samples_leaf") || !hp.at("min_samples_leaf").is_number_integer())
        throw ParseError("tree model needs integer min_samples_leaf");
    tree.min_samples_leaf = hp.at("min_samples_leaf").get<int>();
    if (!params.contains("nodes") || !params.at("nodes").is_array() || params.at("nodes").empty())
        throw ParseError("tree model needs a non-empty nodes array");
    const auto& jnodes = params.at("nodes");
    const int node_count = static_cast<int>(jnodes.size());
    for (int i = 0; i < node_count; ++i) {
        const auto& jn = jnodes[static_cast<std::size_t>(i)];
        if (!jn.is_object()) throw ParseError("tree node must be an object");
        TreeNode n;
        if (jn.contains("feature")) {
            for (const char* key : {"feature", "threshold", "left", "right"})
                if (!jn.contains(key)) throw ParseError("split node missing " + std::string(key));
            if (!jn.at("feature").is_number_integer() || !jn.at("threshold").is_number() ||
                !jn.at("left").is_number_integer() || !jn.at("right").is_number_integer())
                throw ParseError("split node field types are wrong");
            n.feature = jn.at("feature").get<int>();
            n.threshold = jn.at("threshold").get<double>();
            n.left = jn.at("left").get<int>();
            n.right = jn.at("right").get<int>();
            if (n.feature < 0 || static_cast<std::size_t>(n.feature) >= m.feature_order.size())
                throw ParseError("split node feature index out of range");
            // Children must point forward: guarantees the walk terminates.
            if (n.left <= i || n.right <= i || n.left >= node_count || n.right >= node_count)
                throw ParseError("split node child index out of range");
            if (!std::isfinite(n.threshold)) throw ParseError("split threshold is non-finite");
        } else {
            if (!jn.contains("class") || !jn.at("class").is_number_integer())
                throw ParseError("leaf node needs an integer class");
            n.cls = jn.at("class").get<int>();
            if (n.cls < 0 || n.cls >= classes) throw ParseError("leaf class out of range");
            if (!jn.contains("counts") || !jn.at("counts").is_array() ||
                jn.at("counts").size() != static_cast<std::size_t>(classes))
                throw ParseError("leaf node needs a counts array of class size");
            for (const auto& c : jn.at("counts")) {
                if (!c.is_number_integer() || c.get<long long>() < 0)
                    throw ParseError("leaf counts must be non-negative integers");
                n.counts.push_back(c.get<std::size_t>());
            }
        }
        tree.nodes.push_back(std::move(n));
    }
    m.model = std::move(tree);
    return m;
}

}  // namespace graspq
