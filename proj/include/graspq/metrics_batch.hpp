#pragma once

#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "graspq/execution.hpp"
#include "graspq/metrics.hpp"

namespace graspq {

struct BatchItem {
    std::optional<QualityVector> quality;
    std::string error;  // empty on success
};

std::vector<BatchItem> compute_quality_batch(std::span<const GraspInstance> grasps,
                                             const MetricOptions& opt,
                                             Execution exec = Execution::parallel);

struct ClampCounters {
    std::array<long, 7> clamped{};
    std::array<long, 7> degenerate{};
    std::array<long, 7> missing{};
    long failed = 0;
};

ClampCounters tally(std::span<const BatchItem> items);

// Thresholds for metrics flagged `unnormalized`: dataset min/max per
// metric. Collapsed ranges (hi <= lo + eps) widen to (lo, lo + 1) so the
// shared value maps to 0.
std::map<std::string, std::pair<double, double>> calibrate_thresholds(
    std::span<const BatchItem> items);

// Applies thresholds to every `unnormalized` metric value and marks the
// vectors normalized. Metrics still lacking thresholds throw
// MissingNormalization.
void apply_thresholds(std::vector<BatchItem>& items,
                      const std::map<std::string, std::pair<double, double>>& thresholds);

}  // namespace graspq
