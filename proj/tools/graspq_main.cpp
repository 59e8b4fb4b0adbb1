#include <cstdio>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "graspq/commands.hpp"
#include "graspq/error.hpp"

using graspq::RunConfig;

int main(int argc, char** argv) {
    CLI::App app{"grasp quality metrics, labeling and success prediction"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config", "", "config file; command-line flags override file values");

    RunConfig cfg;
    bool serial = false;

    app.add_option("--seed", cfg.seed, "seed for every randomized step")
        ->capture_default_str();
    app.add_flag("--strict", cfg.strict, "exit nonzero when any record fails or is excluded");
    app.add_option("--split-mode", cfg.split_mode,
                   "record: plain random split; cluster: clusters stay on one side")
        ->transform(CLI::CheckedTransformer(
            std::map<std::string, graspq::SplitMode>{{"record", graspq::SplitMode::record},
                                                     {"cluster", graspq::SplitMode::cluster}}))
        ->default_str("cluster");
    app.add_flag("--stratified,!--no-stratified", cfg.stratified,
                 "preserve label proportions across the split")
        ->capture_default_str();
    app.add_option("--label-scheme", cfg.scheme, "binary or ternary labels")
        ->transform(CLI::CheckedTransformer(
            std::map<std::string, graspq::LabelScheme>{{"binary", graspq::LabelScheme::binary},
                                                       {"ternary", graspq::LabelScheme::ternary}}))
        ->default_str("ternary");
    app.add_option("--metrics", cfg.metrics, "comma list of metric names, or 'all'")
        ->delimiter(',');
    app.add_option("--model", cfg.model, "classifier kind")
        ->transform(CLI::CheckedTransformer(
            std::map<std::string, graspq::ModelKind>{{"knn", graspq::ModelKind::knn},
                                                     {"tree", graspq::ModelKind::tree}}))
        ->default_str("knn");
    app.add_option("--folds", cfg.folds, "cross-validation folds")->capture_default_str();
    app.add_option("--test-fraction", cfg.test_fraction, "held-out fraction for the test split")
        ->capture_default_str();
    app.add_option("--cone-edges", cfg.cone_edges, "friction cone discretization")
        ->capture_default_str();
    app.add_option("--torque-scale", cfg.torque_scale,
                   "torque scaling rho; defaults to the object's distance_max");
    app.add_flag("--force-space", cfg.force_space,
                 "hull over 3-D contact forces instead of 6-D wrenches");
    app.add_flag("--serial", serial, "disable parallel execution");

    CLI::App* compute = app.add_subcommand("compute-metrics", "fill quality vectors");
    compute->add_option("--input", cfg.input, "dataset in (JSON lines)")->required();
    compute->add_option("--output", cfg.output, "dataset out")->required();
    compute->add_option("--objects", cfg.objects_path, "objects JSON for geometric records");
    compute->add_option("--thresholds", cfg.thresholds_path,
                        "thresholds file: loaded if present, else calibrated and written");

    CLI::App* label = app.add_subcommand("label", "derive binary and ternary labels");
    label->add_option("--input", cfg.input, "dataset in")->required();
    label->add_option("--output", cfg.output, "dataset out")->required();

    CLI::App* train = app.add_subcommand("train", "split, grid-search, fit and evaluate");
    train->add_option("--input", cfg.input, "labeled dataset with quality vectors")->required();
    train->add_option("--model-out", cfg.model_path, "model file out")->required();
    train->add_option("--report-out", cfg.report_path, "report JSON out");
    train->add_option("--grid-k", cfg.grid_k, "kNN grid override, comma list")->delimiter(',');
    train->add_option("--grid-depth", cfg.grid_depth,
                      "tree depth grid override, integers or 'none'")
        ->delimiter(',');
    train->add_option("--grid-leaf", cfg.grid_leaf, "tree min_samples_leaf grid override")
        ->delimiter(',');

    CLI::App* evaluate = app.add_subcommand("evaluate", "apply a saved model to a dataset");
    evaluate->add_option("--input", cfg.input, "labeled dataset with quality vectors")->required();
    evaluate->add_option("--model", cfg.model_path, "model file in")->required();

    CLI::App* report = app.add_subcommand("report", "render result tables");
    report->add_option("reports", cfg.report_inputs, "report JSON files")->required();
    report->add_option("--out", cfg.output, "text table out");
    report->add_option("--csv", cfg.csv_path, "CSV out");

    CLI::App* synth = app.add_subcommand("synth", "generate a synthetic dataset");
    synth->add_option("--output", cfg.output, "dataset out")->required();
    synth->add_option("--objects-out", cfg.objects_path,
                      "objects JSON out (default: <output>.objects.json)");
    synth->add_option("--preset", cfg.preset, "ideal | separable | noisy(<0..1>)")
        ->capture_default_str();
    synth->add_option("--count", cfg.count, "number of records")->capture_default_str();

    CLI11_PARSE(app, argc, argv);
    cfg.exec = serial ? graspq::Execution::serial : graspq::Execution::parallel;

    try {
        if (compute->parsed()) return graspq::cmd_compute_metrics(cfg);
        if (label->parsed()) return graspq::cmd_label(cfg);
        if (train->parsed()) return graspq::cmd_train(cfg);
        if (evaluate->parsed()) return graspq::cmd_evaluate(cfg);
        if (report->parsed()) return graspq::cmd_report(cfg);
        if (synth->parsed()) return graspq::cmd_synth(cfg);
    } catch (const graspq::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return 2;
    }
    return 0;
}
