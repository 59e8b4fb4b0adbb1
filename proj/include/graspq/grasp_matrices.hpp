#pragma once

#include "graspq/grasp.hpp"
#include "graspq/hull.hpp"
#include "graspq/polygon.hpp"

namespace graspq {

// Contact frame: z is the inward normal, x/y completed deterministically
// (global axis least aligned with the normal, orthogonalized) so runs are
// reproducible across platforms.
struct ContactFrame {
    Vec3 x, y, z;
};

ContactFrame contact_frame(const Vec3& normal);

// Grasp map G (6 x 3n): per contact the 6x3 block [R ; S(c - com) R / rho]
// mapping contact-frame forces to object wrenches, point contact with
// friction, torques about the center of mass. rho divides the torque rows
// so force and torque are commensurate; it defaults to the object's
// distance_max.
Matrix grasp_map(const GraspInstance& g);
Matrix grasp_map(const GraspInstance& g, double torque_scale);

// G_J = G * J (6 x n_q). Throws MissingJacobian when the grasp carries no
// Jacobian, InvalidInput on a dimension mismatch.
Matrix grasp_jacobian_product(const GraspInstance& g);
Matrix grasp_jacobian_product(const GraspInstance& g, double torque_scale);

// Contacts ordered counterclockwise about the best-fit-plane normal
// (angular sort about the centroid). One or two contacts come back as a
// degenerate polygon, not an error: two-finger pinches are real grasps.
Polygon3D contact_polygon(const GraspInstance& g);

// Discretized grasp wrench space generators: each contact's friction cone
// becomes cone_edges unit force directions, mapped through that contact's
// G block to 6D wrenches; the union over contacts is returned. mu = 0
// contributes the single normal-force wrench.
PointCloudD wrench_set(const GraspInstance& g, int cone_edges);
PointCloudD wrench_set(const GraspInstance& g, int cone_edges, double torque_scale);

}  // namespace graspq
