#include "graspq/grasp.hpp"

#include <algorithm>
#include <cmath>

#include "graspq/error.hpp"

namespace graspq {

void validate_contact(const Contact& c) {
    if (!c.position.finite() || !c.normal.finite() || !std::isfinite(c.friction_mu))
        throw InvalidInput("contact: non-finite field");
    const double n = c.normal.norm();
    if (n == 0.0) throw InvalidInput("contact: zero-norm normal");
    if (std::abs(n - 1.0) > 1e-9) throw InvalidInput("contact: normal is not unit length");
    if (c.friction_mu < 0.0) throw InvalidInput("contact: negative friction coefficient");
}

double resolved_distance_max(const ObjectModel& obj) {
    if (obj.norm_constants.distance_max) {
        if (*obj.norm_constants.distance_max <= 0.0)
            throw InvalidInput("object '" + obj.name + "': distance_max must be > 0");
        return *obj.norm_constants.distance_max;
    }
    if (obj.surface_points.empty())
        throw MissingNormalization("object '" + obj.name +
                                   "': no distance_max and no surface points to derive it");
    double best = 0.0;
    for (const Vec3& p : obj.surface_points)
        best = std::max(best, (p - obj.center_of_mass).norm());
    if (best <= 0.0)
        throw MissingNormalization("object '" + obj.name + "': degenerate surface points");
    return best;
}

double resolved_area_max(const ObjectModel& obj) {
    if (obj.norm_constants.area_max) {
        if (*obj.norm_constants.area_max <= 0.0)
            throw InvalidInput("object '" + obj.name + "': area_max must be > 0");
        return *obj.norm_constants.area_max;
    }
    const std::size_t n = obj.surface_points.size();
    if (n < 3)
        throw MissingNormalization("object '" + obj.name +
                                   "': no area_max and fewer than 3 surface points");
    // Largest triangle over a capped even-stride subsample. O(m^3) with
    // m <= 60 keeps this exact enough for a normalization bound.
    const std::size_t cap = 60;
    std::vector<Vec3> pts;
    if (n <= cap) {
        pts = obj.surface_points;
    } else {
        pts.reserve(cap);
        for (std::size_t i = 0; i < cap; ++i) pts.push_back(obj.surface_points[i * n / cap]);
    }
    double best = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j)
            for (std::size_t k = j + 1; k < pts.size(); ++k) {
                const double a = 0.5 * (pts[j] - pts[i]).cross(pts[k] - pts[i]).norm();
                best = std::max(best, a);
            }
    if (best <= 0.0)
        throw MissingNormalization("object '" + obj.name + "': collinear surface points");
    return best;
}

HandPosture make_posture(std::vector<double> y, std::vector<double> y_min,
                         std::vector<double> y_max, std::optional<std::vector<double>> mid) {
    HandPosture p;
    p.y = std::move(y);
    p.y_min = std::move(y_min);
    p.y_max = std::move(y_max);
    if (mid) {
        p.mid = std::move(*mid);
    } else {
        p.mid.resize(p.y_min.size());
        for (std::size_t i = 0; i < p.mid.size(); ++i) p.mid[i] = 0.5 * (p.y_min[i] + p.y_max[i]);
    }
    validate_posture(p);
    return p;
}

void validate_posture(const HandPosture& p) {
    const std::size_t n = p.y.size();
    if (n == 0) throw InvalidInput("posture: no joints");
    if (p.y_min.size() != n || p.y_max.size() != n || p.mid.size() != n)
        throw InvalidInput("posture: mismatched joint list lengths");
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(p.y[i]) || !std::isfinite(p.y_min[i]) || !std::isfinite(p.y_max[i]) ||
            !std::isfinite(p.mid[i]))
            throw InvalidInput("posture: non-finite joint value");
        if (!(p.y_min[i] < p.y_max[i]))
            throw InvalidInput("posture: joint " + std::to_string(i) + " has y_min >= y_max");
        if (!(p.y_min[i] <= p.mid[i] && p.mid[i] <= p.y_max[i]))
            throw InvalidInput("posture: joint " + std::to_string(i) +
                               " rest value outside its limits");
    }
}

void validate_grasp(const GraspInstance& g) {
    if (g.contacts.empty()) throw InvalidInput("grasp '" + g.grasp_id + "': no contacts");
    for (const Contact& c : g.contacts) validate_contact(c);
    validate_posture(g.posture);
    if (!g.object) throw InvalidInput("grasp '" + g.grasp_id + "': no object model");
    if (g.hand_jacobian) {
        if (g.hand_jacobian->rows() != 3 * g.contacts.size())
            throw InvalidInput("grasp '" + g.grasp_id + "': jacobian must have 3n rows");
        if (g.hand_jacobian->cols() != g.posture.y.size())
            throw InvalidInput("grasp '" + g.grasp_id + "': jacobian must have n_q columns");
    }
}

}  // namespace graspq
