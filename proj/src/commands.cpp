#include "graspq/commands.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>

#include "graspq/error.hpp"
#include "graspq/metrics_batch.hpp"
#include "graspq/report.hpp"
#include "graspq/synth.hpp"
#include "graspq/thresholds.hpp"

namespace graspq {

namespace fs = std::filesystem;

namespace {

// Outputs land under their final name only if writing succeeded.
template <typename Writer>
void atomic_write(const fs::path& path, Writer&& writer) {
    fs::path tmp = path;
    tmp += ".tmp";
    writer(tmp);
    fs::rename(tmp, path);
}

void write_text(const fs::path& path, const std::string& text) {
    atomic_write(path, [&](const fs::path& tmp) {
        std::ofstream out(tmp);
        if (!out) throw Error("cannot write " + tmp.string());
        out << text;
    });
}

void require(const std::string& value, const char* flag) {
    if (value.empty()) throw InvalidInput(std::string("missing required option ") + flag);
}

void print_counters(const ClampCounters& c) {
    std::printf("%-8s %8s %11s %8s\n", "metric", "clamped", "degenerate", "missing");
    for (int i = 0; i < kMetricCount; ++i)
        std::printf("%-8s %8ld %11ld %8ld\n", kMetricNames[i], c.clamped[i], c.degenerate[i],
                    c.missing[i]);
    if (c.failed > 0) std::printf("failed records: %ld\n", c.failed);
}

void print_confusion(const std::vector<std::vector<std::size_t>>& confusion,
                     LabelScheme scheme) {
    std::printf("confusion (rows: true, cols: predicted):\n");
    std::printf("%-10s", "");
    for (int c = 0; c < class_count(scheme); ++c)
        std::printf(" %9s", class_name(scheme, c).c_str());
    std::printf("\n");
    for (int t = 0; t < class_count(scheme); ++t) {
        std::printf("%-10s", class_name(scheme, t).c_str());
        for (int p = 0; p < class_count(scheme); ++p)
            std::printf(" %9zu", confusion[static_cast<std::size_t>(t)][static_cast<std::size_t>(p)]);
        std::printf("\n");
    }
}

}  // namespace

std::vector<std::string> resolve_metrics(const std::vector<std::string>& requested) {
    std::vector<std::string> out;
    if (requested.empty() || (requested.size() == 1 && requested.front() == "all")) {
        for (const char* name : kMetricNames) out.emplace_back(name);
        return out;
    }
    std::set<std::string> seen;
    for (const std::string& name : requested) {
        if (metric_index(name) < 0) throw InvalidInput("unknown metric: " + name);
        if (!seen.insert(name).second) throw InvalidInput("metric listed twice: " + name);
        out.push_back(name);
    }
    return out;
}

int cmd_compute_metrics(const RunConfig& cfg) {
    require(cfg.input, "--input");
    require(cfg.output, "--output");
    Dataset ds = load_dataset(cfg.input);
    ObjectMap objects;
    if (!cfg.objects_path.empty()) objects = load_objects(cfg.objects_path);

    MetricOptions opt;
    opt.cone_edges = cfg.cone_edges;
    opt.torque_scale = cfg.torque_scale;
    opt.wrench_space = cfg.force_space ? WrenchSpace::force_3d : WrenchSpace::full_6d;

    std::vector<std::size_t> todo;
    std::vector<GraspInstance> grasps;
    std::vector<std::pair<std::string, std::string>> failures;  // grasp_id, error
    std::size_t passthrough = 0;
    for (std::size_t i = 0; i < ds.records.size(); ++i) {
        GraspRecord& r = ds.records[i];
        if (r.quality) {
            ++passthrough;
            continue;
        }
        try {
            grasps.push_back(make_instance(r, objects));
            todo.push_back(i);
        } catch (const Error& e) {
            failures.emplace_back(r.grasp_id, e.what());
        }
    }

    std::vector<BatchItem> items = compute_quality_batch(grasps, opt, cfg.exec);

    ThresholdMap thresholds;
    bool loaded_thresholds = false;
    if (!cfg.thresholds_path.empty() && fs::exists(cfg.thresholds_path)) {
        thresholds = load_thresholds(cfg.thresholds_path);
        loaded_thresholds = true;
    } else {
        thresholds = calibrate_thresholds(items);
    }
    apply_thresholds(items, thresholds);
    if (!cfg.thresholds_path.empty() && !loaded_thresholds)
        atomic_write(cfg.thresholds_path,
                     [&](const fs::path& tmp) { save_thresholds(thresholds, tmp); });

    for (std::size_t k = 0; k < todo.size(); ++k) {
        const BatchItem& item = items[k];
        GraspRecord& r = ds.records[todo[k]];
        if (!item.quality) {
            failures.emplace_back(r.grasp_id, item.error);
            continue;
        }
        std::array<std::optional<double>, kMetricCount> q;
        for (int m = 0; m < kMetricCount; ++m) q[m] = item.quality->m[m].value;
        r.quality = q;
    }

    if (passthrough > 0)
        std::printf("warning: %zu record(s) already carried quality vectors; left untouched\n",
                    passthrough);
    for (const auto& [id, why] : failures) std::printf("failed: %s: %s\n", id.c_str(), why.c_str());
    print_counters(tally(items));
    for (const auto& [name, range] : thresholds)
        std::printf("threshold %s: lo=%.17g hi=%.17g (%s)\n", name.c_str(), range.first,
                    range.second, loaded_thresholds ? "loaded" : "calibrated");

    if (cfg.strict && !failures.empty()) {
        std::printf("strict mode: %zu record(s) failed, not writing output\n", failures.size());
        return 1;
    }
    atomic_write(cfg.output, [&](const fs::path& tmp) { save_dataset(ds, tmp); });
    std::printf("wrote %s (%zu records)\n", cfg.output.c_str(), ds.records.size());
    return 0;
}

int cmd_label(const RunConfig& cfg) {
    require(cfg.input, "--input");
    require(cfg.output, "--output");
    Dataset ds = load_dataset(cfg.input);
    const std::vector<std::string> excluded = apply_labels(ds);

    std::array<std::size_t, 3> ternary{};
    std::array<std::size_t, 2> binary{};
    for (const GraspRecord& r : ds.records) {
        ++ternary[static_cast<std::size_t>(*r.ternary_label)];
        ++binary[static_cast<std::size_t>(*r.binary_label)];
    }
    std::printf("ternary: robust=%zu fragile=%zu futile=%zu\n", ternary[0], ternary[1],
                ternary[2]);
    std::printf("binary: unstable=%zu stable=%zu\n", binary[0], binary[1]);
    if (!excluded.empty()) {
        std::printf("excluded (no executions):");
        for (const std::string& id : excluded) std::printf(" %s", id.c_str());
        std::printf("\n");
    }
    if (cfg.strict && !excluded.empty()) {
        std::printf("strict mode: %zu record(s) excluded, not writing output\n", excluded.size());
        return 1;
    }
    atomic_write(cfg.output, [&](const fs::path& tmp) { save_dataset(ds, tmp); });
    std::printf("wrote %s (%zu records)\n", cfg.output.c_str(), ds.records.size());
    return 0;
}

namespace {

std::vector<ModelSpec> build_grid(const RunConfig& cfg) {
    if (cfg.model == ModelKind::knn) {
        if (cfg.grid_k.empty()) return default_grid(ModelKind::knn);
        std::vector<ModelSpec> grid;
        for (int k : cfg.grid_k) {
            if (k < 1) throw InvalidInput("grid k values must be >= 1");
            ModelSpec s;
            s.kind = ModelKind::knn;
            s.k = k;
            grid.push_back(s);
        }
        return grid;
    }
    if (cfg.grid_depth.empty() && cfg.grid_leaf.empty()) return default_grid(ModelKind::tree);
    std::vector<std::optional<int>> depths;
    if (cfg.grid_depth.empty()) {
        depths = {2, 3, 4, 5, 6, 8, 10, std::nullopt};
    } else {
        for (const std::string& d : cfg.grid_depth) {
            if (d == "none") {
                depths.push_back(std::nullopt);
            } else {
                try {
                    depths.push_back(std::stoi(d));
                } catch (const std::exception&) {
                    throw InvalidInput("grid depth must be an integer or 'none': " + d);
                }
                if (*depths.back() < 0) throw InvalidInput("grid depth must be >= 0");
            }
        }
    }
    std::vector<int> leaves = cfg.grid_leaf.empty() ? std::vector<int>{1, 2, 5} : cfg.grid_leaf;
    for (int l : leaves)
        if (l < 1) throw InvalidInput("grid min_samples_leaf must be >= 1");
    std::vector<ModelSpec> grid;
    for (const auto& d : depths)
        for (int l : leaves) {
            ModelSpec s;
            s.kind = ModelKind::tree;
            s.max_depth = d;
            s.min_samples_leaf = l;
            grid.push_back(s);
        }
    return grid;
}

void check_train_classes(const std::vector<int>& all, const std::vector<int>& train,
                         LabelScheme scheme) {
    std::set<int> have(train.begin(), train.end());
    for (int c : std::set<int>(all.begin(), all.end()))
        if (!have.count(c))
            throw StratificationError(
                "class '" + class_name(scheme, c) +
                "' is missing from the training split; keep stratified splitting enabled or "
                "try another seed");
}

}  // namespace

int cmd_train(const RunConfig& cfg) {
    require(cfg.input, "--input");
    require(cfg.model_path, "--model-out");
    const std::vector<std::string> metrics = resolve_metrics(cfg.metrics);
    Dataset ds = load_dataset(cfg.input);

    SplitOptions sopt;
    sopt.test_fraction = cfg.test_fraction;
    sopt.seed = cfg.seed;
    sopt.stratified = cfg.stratified;
    sopt.mode = cfg.split_mode;
    sopt.scheme = cfg.scheme;
    const auto [train_ds, test_ds] = split(ds, sopt);

    const FeatureMatrix all = feature_matrix(ds, metrics, cfg.scheme);
    const FeatureMatrix train = feature_matrix(train_ds, metrics, cfg.scheme);
    const FeatureMatrix test = feature_matrix(test_ds, metrics, cfg.scheme);
    check_train_classes(all.labels, train.labels, cfg.scheme);

    const std::vector<ModelSpec> grid = build_grid(cfg);
    const GridResult gr = grid_search(train.x, train.labels, grid, cfg.folds, cfg.seed, cfg.exec);
    const EvalResult ev = evaluate(gr.model, test.x, test.labels, class_count(cfg.scheme));

    SavedModel sm{gr.model, metrics, cfg.scheme};
    atomic_write(cfg.model_path, [&](const fs::path& tmp) { save_model(sm, tmp); });

    ReportEntry entry;
    entry.row_label = row_label_for(metrics, cfg.model);
    entry.regime = regime_display(cfg.scheme);
    entry.label_scheme = to_string(cfg.scheme);
    entry.model = to_string(cfg.model);
    entry.metrics = metrics;
    entry.folds = cfg.folds;
    entry.seed = cfg.seed;
    entry.hyperparameters = gr.best.describe();
    entry.train_mean = gr.mean;
    entry.train_std = gr.std_dev;
    entry.test_accuracy = ev.accuracy;
    entry.confusion = ev.confusion;
    if (!cfg.report_path.empty())
        atomic_write(cfg.report_path,
                     [&](const fs::path& tmp) { save_report({entry}, tmp); });

    std::printf("train %zu records, test %zu records\n", train_ds.records.size(),
                test_ds.records.size());
    std::size_t skipped = 0;
    for (const GridCell& cell : gr.cells)
        if (!cell.ok) ++skipped;
    if (skipped > 0) std::printf("grid cells skipped: %zu\n", skipped);
    std::printf("best %s: cv %.4f +- %.4f, test %.4f\n", gr.best.describe().c_str(), gr.mean,
                gr.std_dev, ev.accuracy);
    print_confusion(ev.confusion, cfg.scheme);
    std::fputs(render_table({entry}).c_str(), stdout);
    std::printf("wrote %s\n", cfg.model_path.c_str());
    if (!cfg.report_path.empty()) std::printf("wrote %s\n", cfg.report_path.c_str());
    return 0;
}

int cmd_evaluate(const RunConfig& cfg) {
    require(cfg.input, "--input");
    require(cfg.model_path, "--model");
    const SavedModel sm = load_model(cfg.model_path);
    Dataset ds = load_dataset(cfg.input);
    const FeatureMatrix fm = feature_matrix(ds, sm.feature_order, sm.scheme);
    const EvalResult ev = evaluate(sm.model, fm.x, fm.labels, class_count(sm.scheme));
    std::printf("%s on %zu records: accuracy %.4f\n", to_string(sm.kind()), ds.records.size(),
                ev.accuracy);
    print_confusion(ev.confusion, sm.scheme);
    return 0;
}

int cmd_report(const RunConfig& cfg) {
    if (cfg.report_inputs.empty()) throw InvalidInput("report needs at least one report file");
    std::vector<ReportEntry> entries;
    for (const std::string& path : cfg.report_inputs) {
        const std::vector<ReportEntry> part = load_report(path);
        entries.insert(entries.end(), part.begin(), part.end());
    }
    const std::string table = render_table(entries);
    std::fputs(table.c_str(), stdout);
    if (!cfg.output.empty()) write_text(cfg.output, table);
    if (!cfg.csv_path.empty()) write_text(cfg.csv_path, render_csv(entries));
    return 0;
}

int cmd_synth(const RunConfig& cfg) {
    require(cfg.output, "--output");
    SynthOptions opt;
    opt.spec = parse_preset(cfg.preset);
    opt.count = cfg.count;
    opt.seed = cfg.seed;
    const SynthResult result = generate(opt);
    const std::string objects_path =
        cfg.objects_path.empty() ? cfg.output + ".objects.json" : cfg.objects_path;
    atomic_write(cfg.output, [&](const fs::path& tmp) { save_dataset(result.dataset, tmp); });
    atomic_write(objects_path, [&](const fs::path& tmp) { save_objects(result.objects, tmp); });
    std::printf("wrote %s (%zu records) and %s\n", cfg.output.c_str(),
                result.dataset.records.size(), objects_path.c_str());
    return 0;
}

}  // namespace graspq
