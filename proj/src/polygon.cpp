#include "graspq/polygon.hpp"

#include <cmath>

#include "graspq/error.hpp"
#include "graspq/svd.hpp"

namespace graspq {

namespace {

Vec3 from_array(const std::array<double, 3>& a) { return {a[0], a[1], a[2]}; }

// Deterministic sign: largest-magnitude component positive, first such on ties.
Vec3 fix_sign(const Vec3& v) {
    double best = std::abs(v.x);
    double comp = v.x;
    if (std::abs(v.y) > best) {
        best = std::abs(v.y);
        comp = v.y;
    }
    if (std::abs(v.z) > best) comp = v.z;
    return comp < 0.0 ? -v : v;
}

struct Projected {
    PlaneFrame frame;
    std::vector<double> xs, ys;
    double scale;  // bounding-box diagonal of the projected points
};

Projected project(std::span<const Vec3> pts) {
    Projected p;
    p.frame = best_fit_plane(pts);
    p.xs.reserve(pts.size());
    p.ys.reserve(pts.size());
    double xmin = 0, xmax = 0, ymin = 0, ymax = 0;
    bool first = true;
    for (const Vec3& v : pts) {
        const Vec3 d = v - p.frame.origin;
        const double x = d.dot(p.frame.u);
        const double y = d.dot(p.frame.v);
        p.xs.push_back(x);
        p.ys.push_back(y);
        if (first) {
            xmin = xmax = x;
            ymin = ymax = y;
            first = false;
        } else {
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    }
    p.scale = std::hypot(xmax - xmin, ymax - ymin);
    return p;
}

double signed_area(const std::vector<double>& xs, const std::vector<double>& ys) {
    const std::size_t n = xs.size();
    double a = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = (i + 1) % n;
        a += xs[i] * ys[j] - xs[j] * ys[i];
    }
    return 0.5 * a;
}

}  // namespace

PlaneFrame best_fit_plane(std::span<const Vec3> points) {
    if (points.empty()) throw DegenerateInput("plane fit: empty point set");
    for (const Vec3& v : points)
        if (!v.finite()) throw InvalidInput("plane fit: non-finite point");

    Vec3 mean{};
    for (const Vec3& v : points) mean = mean + v;
    mean = mean / static_cast<double>(points.size());

    std::array<std::array<double, 3>, 3> cov{};
    for (const Vec3& v : points) {
        const Vec3 d = v - mean;
        const double c[3] = {d.x, d.y, d.z};
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) cov[i][j] += c[i] * c[j];
    }

    const SymEig3 eig = eigen_sym3(cov);
    PlaneFrame f;
    f.origin = mean;
    f.normal = fix_sign(from_array(eig.vectors[2]).normalized());
    f.u = fix_sign(from_array(eig.vectors[0]).normalized());
    // Re-orthogonalize in case of eigenvector sign flips, keep right-handed.
    f.u = (f.u - f.normal * f.u.dot(f.normal)).normalized();
    if (f.u.norm2() < 0.5) {
        // Degenerate (all points equal): pick any frame.
        f.normal = {0, 0, 1};
        f.u = {1, 0, 0};
    }
    f.v = f.normal.cross(f.u);
    for (const Vec3& v : points)
        f.max_deviation = std::max(f.max_deviation, std::abs((v - mean).dot(f.normal)));
    return f;
}

double polygon_area(const Polygon3D& poly) {
    if (poly.vertices.size() < 3) throw DegenerateInput("polygon area: fewer than 3 vertices");
    const Projected p = project(poly.vertices);
    return std::abs(signed_area(p.xs, p.ys));
}

Vec3 polygon_centroid(const Polygon3D& poly) {
    if (poly.vertices.empty()) throw DegenerateInput("polygon centroid: empty vertex list");
    Vec3 mean{};
    for (const Vec3& v : poly.vertices) mean = mean + v;
    mean = mean / static_cast<double>(poly.vertices.size());
    if (poly.vertices.size() < 3) return mean;

    const Projected p = project(poly.vertices);
    const double a = signed_area(p.xs, p.ys);
    if (std::abs(a) <= 1e-12 * p.scale * p.scale) return mean;  // collinear fallback

    const std::size_t n = p.xs.size();
    double cx = 0.0, cy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = (i + 1) % n;
        const double w = p.xs[i] * p.ys[j] - p.xs[j] * p.ys[i];
        cx += (p.xs[i] + p.xs[j]) * w;
        cy += (p.ys[i] + p.ys[j]) * w;
    }
    cx /= 6.0 * a;
    cy /= 6.0 * a;
    return p.frame.origin + p.frame.u * cx + p.frame.v * cy;
}

std::vector<double> polygon_internal_angles(const Polygon3D& poly) {
    const std::size_t n = poly.vertices.size();
    if (n < 3) throw DegenerateInput("internal angles: fewer than 3 vertices");
    const Projected p = project(poly.vertices);
    if (p.scale <= 0.0) throw DegenerateInput("internal angles: coincident vertices");

    // Interior angle = 180 - signed turn, with turns taken in CCW orientation.
    const double orient = signed_area(p.xs, p.ys) >= 0.0 ? 1.0 : -1.0;

    std::vector<double> angles(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t prev = (i + n - 1) % n;
        const std::size_t next = (i + 1) % n;
        const double ax = p.xs[i] - p.xs[prev];
        const double ay = p.ys[i] - p.ys[prev];
        const double bx = p.xs[next] - p.xs[i];
        const double by = p.ys[next] - p.ys[i];
        const double la = std::hypot(ax, ay);
        const double lb = std::hypot(bx, by);
        if (la <= 1e-15 * p.scale || lb <= 1e-15 * p.scale)
            throw DegenerateInput("internal angles: zero-length edge");
        const double cross = ax * by - ay * bx;
        const double dot = ax * bx + ay * by;
        if (std::abs(cross) <= 1e-12 * la * lb)
            throw DegenerateInput("internal angles: collinear adjacent edges");
        const double turn = std::atan2(orient * cross, dot);
        angles[i] = 180.0 - turn * 180.0 / M_PI;
    }
    return angles;
}

}  // namespace graspq
