#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "graspq/matrix.hpp"
#include "graspq/vec3.hpp"

namespace graspq {

// One contact: position in the object frame, inward unit normal (pointing
// into the object), Coulomb friction coefficient.
struct Contact {
    Vec3 position;
    Vec3 normal;
    double friction_mu = 0.0;

    bool operator==(const Contact&) const = default;
};

void validate_contact(const Contact& c);  // |normal| = 1 within 1e-9, mu >= 0

// Per-object normalization constants. Absent values are auto-derived from
// the surface samples where a geometric derivation exists (distance_max,
// area_max); volume_max has no geometric analog and falls back to the
// dataset-calibration path; theta_max defaults to the per-polygon rule
// (n_f - 2) * 180 used by the polygon-shape metric.
struct NormConstants {
    std::optional<double> distance_max;  // m
    std::optional<double> area_max;      // m^2
    std::optional<double> volume_max;    // wrench-volume units
    std::optional<double> theta_max;     // degrees
};

struct ObjectModel {
    std::string name;
    Vec3 center_of_mass;
    std::vector<Vec3> surface_points;
    std::optional<double> mass;  // kg, informational
    NormConstants norm_constants;
};

// distance_max: given, or the farthest surface sample from the com.
double resolved_distance_max(const ObjectModel& obj);
// area_max: given, or the largest triangle over a capped deterministic
// subsample of the surface points.
double resolved_area_max(const ObjectModel& obj);

// Joint posture with limits. `mid` is the rest configuration a_i, inside
// [y_min, y_max]; defaults to the range midpoint. A rest value sitting
// exactly on a limit passes validation; the posture metric raises
// DegenerateRange when that limit is the one selected for the joint.
struct HandPosture {
    std::vector<double> y;
    std::vector<double> y_min;
    std::vector<double> y_max;
    std::vector<double> mid;

    bool operator==(const HandPosture&) const = default;
};

HandPosture make_posture(std::vector<double> y, std::vector<double> y_min,
                         std::vector<double> y_max,
                         std::optional<std::vector<double>> mid = std::nullopt);
void validate_posture(const HandPosture& p);

struct GraspInstance {
    std::string grasp_id;
    std::vector<Contact> contacts;
    HandPosture posture;
    std::optional<Matrix> hand_jacobian;  // 3n x n_q, supplied with the data
    std::shared_ptr<const ObjectModel> object;
};

void validate_grasp(const GraspInstance& g);

}  // namespace graspq
