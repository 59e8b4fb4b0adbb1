#include "graspq/grasp_matrices.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "graspq/error.hpp"

namespace graspq {

ContactFrame contact_frame(const Vec3& normal) {
    const double n = normal.norm();
    if (n == 0.0 || !normal.finite()) throw InvalidInput("contact frame: zero-norm normal");
    ContactFrame f;
    f.z = normal / n;
    // Seed x from the global axis least aligned with z; ties go to the
    // lower axis index.
    const double a[3] = {std::abs(f.z.x), std::abs(f.z.y), std::abs(f.z.z)};
    int k = 0;
    if (a[1] < a[k]) k = 1;
    if (a[2] < a[k]) k = 2;
    Vec3 seed{k == 0 ? 1.0 : 0.0, k == 1 ? 1.0 : 0.0, k == 2 ? 1.0 : 0.0};
    f.x = (seed - f.z * seed.dot(f.z)).normalized();
    f.y = f.z.cross(f.x);
    return f;
}

namespace {

// 6x3 block for one contact: rows 0-2 force, rows 3-5 torque / rho.
void fill_block(Matrix& g, std::size_t col0, const Contact& c, const Vec3& com, double rho) {
    const ContactFrame f = contact_frame(c.normal);
    const Vec3 cols[3] = {f.x, f.y, f.z};
    const Vec3 r = c.position - com;
    for (int j = 0; j < 3; ++j) {
        const Vec3& axis = cols[j];
        g(0, col0 + j) = axis.x;
        g(1, col0 + j) = axis.y;
        g(2, col0 + j) = axis.z;
        const Vec3 torque = r.cross(axis) / rho;
        g(3, col0 + j) = torque.x;
        g(4, col0 + j) = torque.y;
        g(5, col0 + j) = torque.z;
    }
}

}  // namespace

Matrix grasp_map(const GraspInstance& g) { return grasp_map(g, resolved_distance_max(*g.object)); }

Matrix grasp_map(const GraspInstance& g, double torque_scale) {
    if (g.contacts.empty()) throw InvalidInput("grasp map: no contacts");
    if (!(torque_scale > 0.0)) throw InvalidInput("grasp map: torque scale must be > 0");
    for (const Contact& c : g.contacts) validate_contact(c);
    Matrix m(6, 3 * g.contacts.size());
    for (std::size_t i = 0; i < g.contacts.size(); ++i)
        fill_block(m, 3 * i, g.contacts[i], g.object->center_of_mass, torque_scale);
    return m;
}

Matrix grasp_jacobian_product(const GraspInstance& g) {
    return grasp_jacobian_product(g, resolved_distance_max(*g.object));
}

Matrix grasp_jacobian_product(const GraspInstance& g, double torque_scale) {
    if (!g.hand_jacobian) throw MissingJacobian("grasp '" + g.grasp_id + "' has no hand Jacobian");
    const Matrix gm = grasp_map(g, torque_scale);
    if (gm.cols() != g.hand_jacobian->rows())
        throw InvalidInput("grasp '" + g.grasp_id + "': jacobian rows must equal 3n");
    return gm * *g.hand_jacobian;
}

Polygon3D contact_polygon(const GraspInstance& g) {
    if (g.contacts.empty()) throw InvalidInput("contact polygon: no contacts");
    std::vector<Vec3> pos;
    pos.reserve(g.contacts.size());
    for (const Contact& c : g.contacts) pos.push_back(c.position);
    if (pos.size() < 3) return Polygon3D{std::move(pos)};

    const PlaneFrame frame = best_fit_plane(pos);
    struct Entry {
        double angle, radius;
        std::size_t index;
    };
    std::vector<Entry> order(pos.size());
    for (std::size_t i = 0; i < pos.size(); ++i) {
        const Vec3 d = pos[i] - frame.origin;
        order[i] = {std::atan2(d.dot(frame.v), d.dot(frame.u)), d.norm(), i};
    }
    std::sort(order.begin(), order.end(), [](const Entry& a, const Entry& b) {
        if (a.angle != b.angle) return a.angle < b.angle;
        if (a.radius != b.radius) return a.radius < b.radius;
        return a.index < b.index;
    });
    Polygon3D poly;
    poly.vertices.reserve(pos.size());
    for (const Entry& e : order) poly.vertices.push_back(pos[e.index]);
    return poly;
}

PointCloudD wrench_set(const GraspInstance& g, int cone_edges) {
    return wrench_set(g, cone_edges, resolved_distance_max(*g.object));
}

PointCloudD wrench_set(const GraspInstance& g, int cone_edges, double torque_scale) {
    if (cone_edges < 3) throw InvalidInput("wrench set: cone_edges must be >= 3");
    const Matrix gm = grasp_map(g, torque_scale);
    PointCloudD cloud;
    cloud.dim = 6;
    for (std::size_t i = 0; i < g.contacts.size(); ++i) {
        const double mu = g.contacts[i].friction_mu;
        std::vector<std::array<double, 3>> dirs;
        if (mu == 0.0) {
            dirs.push_back({0.0, 0.0, 1.0});
        } else {
            const double inv = 1.0 / std::sqrt(1.0 + mu * mu);
            for (int j = 0; j < cone_edges; ++j) {
                const double phi = 2.0 * M_PI * j / cone_edges;
                dirs.push_back({mu * std::cos(phi) * inv, mu * std::sin(phi) * inv, inv});
            }
        }
        for (const auto& f : dirs) {
            std::vector<double> w(6, 0.0);
            for (int row = 0; row < 6; ++row)
                for (int k = 0; k < 3; ++k) w[row] += gm(row, 3 * i + k) * f[k];
            cloud.points.push_back(std::move(w));
        }
    }
    return cloud;
}

}  // namespace graspq
