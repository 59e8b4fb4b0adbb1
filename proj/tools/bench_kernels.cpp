#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <vector>

#include "graspq/learn.hpp"
#include "graspq/metrics_batch.hpp"
#include "graspq/rng.hpp"
#include "graspq/synth.hpp"

using namespace graspq;

namespace {

double ms_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
}

bool same_batch(const std::vector<BatchItem>& a, const std::vector<BatchItem>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].quality.has_value() != b[i].quality.has_value()) return false;
        if (!a[i].quality) continue;
        for (int m = 0; m < kMetricCount; ++m)
            if (a[i].quality->m[m].value != b[i].quality->m[m].value) return false;
    }
    return true;
}

}  // namespace

int main(int argc, char** argv) {
    const std::size_t grasp_count = argc > 1 ? std::strtoul(argv[1], nullptr, 10) : 400;
    const std::size_t knn_rows = argc > 2 ? std::strtoul(argv[2], nullptr, 10) : 4000;

    SynthOptions opt;
    opt.spec = parse_preset("separable");
    opt.count = grasp_count;
    opt.seed = 7;
    const SynthResult synth = generate(opt);
    std::vector<GraspInstance> grasps;
    for (const GraspRecord& r : synth.dataset.records)
        grasps.push_back(make_instance(r, synth.objects));

    MetricOptions mopt;
    auto t0 = std::chrono::steady_clock::now();
    const auto serial = compute_quality_batch(grasps, mopt, Execution::serial);
    const double t_serial = ms_since(t0);
    t0 = std::chrono::steady_clock::now();
    const auto parallel = compute_quality_batch(grasps, mopt, Execution::parallel);
    const double t_parallel = ms_since(t0);
    std::printf("metrics batch, %zu grasps: serial %.1f ms, parallel %.1f ms (x%.2f), %s\n",
                grasps.size(), t_serial, t_parallel, t_serial / t_parallel,
                same_batch(serial, parallel) ? "identical" : "MISMATCH");

    Rng rng(11);
    Matrix x(knn_rows, static_cast<std::size_t>(kMetricCount));
    std::vector<int> labels(knn_rows);
    for (std::size_t i = 0; i < knn_rows; ++i) {
        for (std::size_t j = 0; j < x.cols(); ++j) x(i, j) = rng.uniform01();
        labels[i] = static_cast<int>(rng.below(3));
    }
    const std::size_t query_count = knn_rows / 2;
    Matrix queries(query_count, x.cols());
    for (std::size_t i = 0; i < query_count; ++i)
        for (std::size_t j = 0; j < queries.cols(); ++j) queries(i, j) = rng.uniform01();

    const KnnModel knn = knn_fit(x, labels, 5);
    t0 = std::chrono::steady_clock::now();
    const auto pred_serial = knn_predict_batch(knn, queries, Execution::serial);
    const double k_serial = ms_since(t0);
    t0 = std::chrono::steady_clock::now();
    const auto pred_parallel = knn_predict_batch(knn, queries, Execution::parallel);
    const double k_parallel = ms_since(t0);
    std::printf("knn batch, %zu rows x %zu queries: serial %.1f ms, parallel %.1f ms (x%.2f), %s\n",
                knn_rows, query_count, k_serial, k_parallel, k_serial / k_parallel,
                pred_serial == pred_parallel ? "identical" : "MISMATCH");
    return 0;
}
