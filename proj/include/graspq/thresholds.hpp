#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <utility>

namespace graspq {

using ThresholdMap = std::map<std::string, std::pair<double, double>>;

// Flat text, one `metric_name lo hi` per line, '#' comments and blank
// lines allowed.
ThresholdMap load_thresholds(const std::filesystem::path& path);
void save_thresholds(const ThresholdMap& thresholds, const std::filesystem::path& path);

}  // namespace graspq
