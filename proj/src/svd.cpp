#include "graspq/svd.hpp"

#include <algorithm>
#include <cmath>

namespace graspq {

bool Matrix::all_finite() const {
    for (double v : data_)
        if (!std::isfinite(v)) return false;
    return true;
}

std::vector<double> svd_singular_values(const Matrix& m) {
    if (!m.all_finite()) throw InvalidInput("svd: non-finite matrix entry");

    // Work on a tall copy so the Jacobi sweep runs over min(rows, cols) columns.
    Matrix a = m.rows() >= m.cols() ? m : m.transposed();
    const std::size_t r = a.rows();
    const std::size_t c = a.cols();

    const double tol = 1e-14;
    const int max_sweeps = 100;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        bool rotated = false;
        for (std::size_t p = 0; p + 1 < c; ++p) {
            for (std::size_t q = p + 1; q < c; ++q) {
                double alpha = 0.0, beta = 0.0, gamma = 0.0;
                for (std::size_t i = 0; i < r; ++i) {
                    alpha += a(i, p) * a(i, p);
                    beta += a(i, q) * a(i, q);
                    gamma += a(i, p) * a(i, q);
                }
                if (std::abs(gamma) <= tol * std::sqrt(alpha * beta) || gamma == 0.0) continue;
                rotated = true;
                const double zeta = (beta - alpha) / (2.0 * gamma);
                const double t = (zeta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double cs = 1.0 / std::sqrt(1.0 + t * t);
                const double sn = cs * t;
                for (std::size_t i = 0; i < r; ++i) {
                    const double vp = a(i, p);
                    const double vq = a(i, q);
                    a(i, p) = cs * vp - sn * vq;
                    a(i, q) = sn * vp + cs * vq;
                }
            }
        }
        if (!rotated) break;
    }

    std::vector<double> sigma(c);
    for (std::size_t j = 0; j < c; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < r; ++i) s += a(i, j) * a(i, j);
        sigma[j] = std::sqrt(s);
    }
    std::sort(sigma.begin(), sigma.end(), std::greater<double>());
    return sigma;
}

SymEig3 eigen_sym3(const std::array<std::array<double, 3>, 3>& in) {
    std::array<std::array<double, 3>, 3> a = in;
    std::array<std::array<double, 3>, 3> v = {{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};

    for (int sweep = 0; sweep < 60; ++sweep) {
        double off = std::abs(a[0][1]) + std::abs(a[0][2]) + std::abs(a[1][2]);
        if (off == 0.0) break;
        for (int p = 0; p < 2; ++p) {
            for (int q = p + 1; q < 3; ++q) {
                if (std::abs(a[p][q]) <= 1e-300) continue;
                const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(1.0 + theta * theta));
                const double cs = 1.0 / std::sqrt(1.0 + t * t);
                const double sn = cs * t;
                for (int k = 0; k < 3; ++k) {
                    const double akp = a[k][p];
                    const double akq = a[k][q];
                    a[k][p] = cs * akp - sn * akq;
                    a[k][q] = sn * akp + cs * akq;
                }
                for (int k = 0; k < 3; ++k) {
                    const double apk = a[p][k];
                    const double aqk = a[q][k];
                    a[p][k] = cs * apk - sn * aqk;
                    a[q][k] = sn * apk + cs * aqk;
                }
                for (int k = 0; k < 3; ++k) {
                    const double vkp = v[k][p];
                    const double vkq = v[k][q];
                    v[k][p] = cs * vkp - sn * vkq;
                    v[k][q] = sn * vkp + cs * vkq;
                }
            }
        }
    }

    SymEig3 out;
    std::array<int, 3> order = {0, 1, 2};
    std::array<double, 3> diag = {a[0][0], a[1][1], a[2][2]};
    std::sort(order.begin(), order.end(), [&](int i, int j) { return diag[i] > diag[j]; });
    for (int i = 0; i < 3; ++i) {
        out.values[i] = diag[order[i]];
        for (int k = 0; k < 3; ++k) out.vectors[i][k] = v[k][order[i]];
    }
    return out;
}

}  // namespace graspq
