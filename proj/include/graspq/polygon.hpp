#pragma once

#include <span>
#include <vector>

#include "graspq/vec3.hpp"

namespace graspq {

// Planar polygon embedded in 3D. Real contact points are never exactly
// coplanar, so every operation first projects the vertices onto their
// least-squares plane and works in 2D from there.
struct Polygon3D {
    std::vector<Vec3> vertices;
};

// Default coplanarity tolerance (meters).
inline constexpr double kPlaneEps = 1e-6;

struct PlaneFrame {
    Vec3 origin;   // vertex mean
    Vec3 u, v;     // in-plane orthonormal basis, (u, v, normal) right-handed
    Vec3 normal;   // unit; sign fixed so the largest-magnitude component is positive
    double max_deviation = 0.0;  // largest out-of-plane distance
};

// Least-squares plane of a point set (covariance eigenvectors).
PlaneFrame best_fit_plane(std::span<const Vec3> points);

// Area (m^2) of the projected polygon via the shoelace formula.
// Throws DegenerateInput for fewer than 3 vertices.
double polygon_area(const Polygon3D& poly);

// Area-weighted centroid; falls back to the vertex mean when the projected
// area vanishes (collinear or duplicate vertices). Throws DegenerateInput
// on an empty vertex list.
Vec3 polygon_centroid(const Polygon3D& poly);

// One internal angle per vertex, degrees, in vertex order. For a simple
// polygon they sum to (n-2)*180. Throws DegenerateInput on zero-length
// edges or collinear adjacent edges.
std::vector<double> polygon_internal_angles(const Polygon3D& poly);

}  // namespace graspq
