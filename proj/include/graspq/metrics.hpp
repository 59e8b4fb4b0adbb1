#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>

#include "graspq/grasp.hpp"

namespace graspq {

// Canonical feature order. Everything downstream (feature matrices, model
// files, reports) uses this order.
inline constexpr std::array<const char*, 7> kMetricNames = {"q_a1", "q_b1", "q_b2", "q_b3",
                                                            "q_c2", "q_d1", "q_d2"};
inline constexpr int kMetricCount = 7;

int metric_index(const std::string& name);  // -1 if unknown

enum class WrenchSpace { full_6d, force_3d };

struct MetricOptions {
    int cone_edges = 8;
    std::optional<double> torque_scale;  // default: object distance_max
    WrenchSpace wrench_space = WrenchSpace::full_6d;
};

// Per-metric flags. `unnormalized` marks raw values (smallest singular
// value; hull volume when the object carries no volume_max) that still want
// threshold normalization.
struct MetricValue {
    std::optional<double> value;
    bool degenerate = false;
    bool clamped = false;
    bool missing_input = false;
    bool unnormalized = false;
};

struct QualityMeta {
    std::string contact_model = "point_contact_with_friction";
    double torque_scale = 0.0;
    int cone_edges = 0;
    WrenchSpace wrench_space = WrenchSpace::full_6d;
    std::optional<double> theta_max;  // explicit override; otherwise (n_f-2)*180
    // Thresholds applied by normalization, metric name -> (lo, hi).
    std::map<std::string, std::pair<double, double>> thresholds;
};

struct QualityVector {
    std::array<MetricValue, 7> m;  // kMetricNames order
    bool normalized = false;
    QualityMeta meta;

    const MetricValue& operator[](int i) const { return m[i]; }
    MetricValue& operator[](int i) { return m[i]; }
};

// The seven metrics. Scalar entry points throw on unusable input
// (MissingJacobian, MissingNormalization, ...); quality_vector instead
// records missing/degenerate per metric so every grasp still gets a
// feature vector.

// Smallest singular value of the grasp map, taken over the 6 wrench
// dimensions: with fewer than 6 force inputs (3n < 6) the map cannot span
// wrench space and the value is 0.
double q_a1(const GraspInstance& g, const MetricOptions& opt = {});
// 1 - |centroid - com| / distance_max, clamped to [0, 1].
double q_b1(const GraspInstance& g);
// Contact polygon area / area_max, clamped. Fewer than 3 contacts -> 0.
double q_b2(const GraspInstance& g);
// 1 - sum |theta_i - mean| / theta_max. Degenerate polygons -> 0.
double q_b3(const GraspInstance& g);
// Wrench-space hull volume / volume_max, clamped. Degenerate hull -> 0.
double q_c2(const GraspInstance& g, const MetricOptions& opt = {});
// 1 - (1/n_q) sum ((y_i - a_i) / (a_i - limit))^2 with the limit on the
// same side as y_i, clamped.
double q_d1(const HandPosture& posture);
// sigma_min / sigma_max of G*J; 0 when G*J vanishes.
double q_d2(const GraspInstance& g, const MetricOptions& opt = {});

QualityVector quality_vector(const GraspInstance& g, const MetricOptions& opt = {});

// (raw - lo) / (hi - lo) clamped to [0, 1]. Throws InvalidThresholds when
// hi <= lo.
double normalize_q_a1(double raw, double lo, double hi);

struct MetricStat {
    double mean = 0.0;
    double stddev = 0.0;
    int samples = 0;
};

// Gaussian position noise on the contacts, quality vector recomputed per
// trial; per-metric mean and population std over trials. Deterministic
// given (seed, input) and independent of execution order: trial i draws
// from Rng::derive(seed, i).
std::array<MetricStat, 7> perturbation_stability(const GraspInstance& g, double sigma_pos,
                                                 int trials, std::uint64_t seed,
                                                 const MetricOptions& opt = {});

}  // namespace graspq
