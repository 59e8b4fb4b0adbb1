#pragma once

#include <cstddef>
#include <vector>

namespace graspq {

// Point set in R^d. Wrench sets use d = 6 (force + torque) or d = 3
// (force only); the hull code itself is dimension-generic.
struct PointCloudD {
    std::size_t dim = 0;
    std::vector<std::vector<double>> points;
};

// d-dimensional Lebesgue measure of the convex hull, by incremental
// (beneath-beyond) construction with simplicial facets. Affinely dependent
// input - fewer than d+1 points, or all points in a lower-dimensional flat -
// yields 0 rather than an error: single-finger and opposed-pinch wrench
// sets are legitimately degenerate and must score 0.
// Throws InvalidInput for dim < 2, dimension mismatches, or non-finite
// coordinates.
double convex_hull_volume(const PointCloudD& cloud);

}  // namespace graspq
