#pragma once

#include <array>
#include <vector>

#include "graspq/matrix.hpp"

namespace graspq {

// Singular values of m, sorted descending, min(rows, cols) of them.
// One-sided Jacobi; plenty for the 6 x 3n matrices the metrics build.
// Throws InvalidInput on non-finite entries.
std::vector<double> svd_singular_values(const Matrix& m);

struct SymEig3 {
    std::array<double, 3> values;            // descending
    std::array<std::array<double, 3>, 3> vectors;  // vectors[i] pairs with values[i], orthonormal
};

// Eigen-decomposition of a symmetric 3x3 via cyclic Jacobi rotations.
// Used for least-squares plane fitting.
SymEig3 eigen_sym3(const std::array<std::array<double, 3>, 3>& a);

}  // namespace graspq
