#pragma once

// Grasp construction helpers shared by the test binaries.

#include <cmath>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "graspq/grasp.hpp"

namespace fixtures {

inline std::shared_ptr<const graspq::ObjectModel> make_object(
    graspq::Vec3 com = {}, std::optional<double> distance_max = 1.0,
    std::optional<double> area_max = 1.0, std::optional<double> volume_max = std::nullopt,
    std::vector<graspq::Vec3> surface = {}) {
    auto obj = std::make_shared<graspq::ObjectModel>();
    obj->name = "test_object";
    obj->center_of_mass = com;
    obj->surface_points = std::move(surface);
    obj->norm_constants.distance_max = distance_max;
    obj->norm_constants.area_max = area_max;
    obj->norm_constants.volume_max = volume_max;
    return obj;
}

inline graspq::HandPosture mid_posture(std::size_t joints = 2) {
    std::vector<double> y(joints, 0.5), lo(joints, 0.0), hi(joints, 1.0);
    return graspq::make_posture(y, lo, hi);
}

inline graspq::GraspInstance make_grasp(std::vector<graspq::Contact> contacts,
                                        std::shared_ptr<const graspq::ObjectModel> obj,
                                        std::optional<graspq::Matrix> jacobian = std::nullopt,
                                        graspq::HandPosture posture = mid_posture()) {
    graspq::GraspInstance g;
    g.grasp_id = "test_grasp";
    g.contacts = std::move(contacts);
    g.posture = std::move(posture);
    g.hand_jacobian = std::move(jacobian);
    g.object = std::move(obj);
    return g;
}

// Regular triangle of contacts on a circle of `radius` in the z = 0 plane
// around the com, normals pointing at the com: the analytic optimum for the
// polygon metrics when paired with a mid-range posture.
inline graspq::GraspInstance ideal_triangle_grasp(double radius = 0.5, double mu = 0.8) {
    std::vector<graspq::Contact> contacts;
    for (int i = 0; i < 3; ++i) {
        const double a = 2.0 * M_PI * i / 3.0;
        const graspq::Vec3 pos{radius * std::cos(a), radius * std::sin(a), 0.0};
        contacts.push_back({pos, (-pos).normalized(), mu});
    }
    return make_grasp(std::move(contacts), make_object({}, 1.0, 1.0), std::nullopt,
                      mid_posture(3));
}

}  // namespace fixtures
