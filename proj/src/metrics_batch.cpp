#include "graspq/metrics_batch.hpp"

#include <cmath>

#include "graspq/error.hpp"

namespace graspq {

namespace {

BatchItem compute_one(const GraspInstance& g, const MetricOptions& opt) {
    BatchItem item;
    try {
        item.quality = quality_vector(g, opt);
    } catch (const std::exception& e) {
        item.error = e.what();
    }
    return item;
}

}  // namespace

std::vector<BatchItem> compute_quality_batch(std::span<const GraspInstance> grasps,
                                             const MetricOptions& opt, Execution exec) {
    std::vector<BatchItem> out(grasps.size());
    if (exec == Execution::parallel) {
        const long n = static_cast<long>(grasps.size());
#pragma omp parallel for schedule(dynamic)
        for (long i = 0; i < n; ++i) out[i] = compute_one(grasps[i], opt);
    } else {
        for (std::size_t i = 0; i < grasps.size(); ++i) out[i] = compute_one(grasps[i], opt);
    }
    return out;
}

ClampCounters tally(std::span<const BatchItem> items) {
    ClampCounters c;
    for (const BatchItem& item : items) {
        if (!item.quality) {
            ++c.failed;
            continue;
        }
        for (int i = 0; i < kMetricCount; ++i) {
            const MetricValue& v = item.quality->m[i];
            if (v.clamped) ++c.clamped[i];
            if (v.degenerate) ++c.degenerate[i];
            if (!v.value) ++c.missing[i];
        }
    }
    return c;
}

std::map<std::string, std::pair<double, double>> calibrate_thresholds(
    std::span<const BatchItem> items) {
    std::map<std::string, std::pair<double, double>> out;
    for (int i = 0; i < kMetricCount; ++i) {
        bool seen = false;
        double lo = 0.0, hi = 0.0;
        for (const BatchItem& item : items) {
            if (!item.quality) continue;
            const MetricValue& v = item.quality->m[i];
            if (!v.unnormalized || !v.value) continue;
            if (!seen) {
                lo = hi = *v.value;
                seen = true;
            } else {
                lo = std::min(lo, *v.value);
                hi = std::max(hi, *v.value);
            }
        }
        if (!seen) continue;
        if (hi <= lo + 1e-12) hi = lo + 1.0;  // constant column: map to 0
        out[kMetricNames[i]] = {lo, hi};
    }
    return out;
}

void apply_thresholds(std::vector<BatchItem>& items,
                      const std::map<std::string, std::pair<double, double>>& thresholds) {
    for (BatchItem& item : items) {
        if (!item.quality) continue;
        for (int i = 0; i < kMetricCount; ++i) {
            MetricValue& v = item.quality->m[i];
            if (!v.unnormalized) continue;
            const auto it = thresholds.find(kMetricNames[i]);
            if (!v.value) {
                v.unnormalized = false;
                continue;
            }
            if (it == thresholds.end())
                throw MissingNormalization(std::string("no thresholds for metric '") +
                                           kMetricNames[i] + "'");
            const double raw = *v.value;
            v.value = normalize_q_a1(raw, it->second.first, it->second.second);
            if (raw < it->second.first || raw > it->second.second) v.clamped = true;
            v.unnormalized = false;
            item.quality->meta.thresholds[kMetricNames[i]] = it->second;
        }
        item.quality->normalized = true;
    }
}

}  // namespace graspq
