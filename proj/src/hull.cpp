#include "graspq/hull.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "graspq/error.hpp"

namespace graspq {

namespace {

using Point = std::vector<double>;

double dot(const Point& a, const Point& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double vnorm(const Point& a) { return std::sqrt(dot(a, a)); }

void axpy(Point& y, double alpha, const Point& x) {
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += alpha * x[i];
}

// Component of v orthogonal to an orthonormal basis.
Point residual(const Point& v, const std::vector<Point>& basis) {
    Point r = v;
    for (const Point& b : basis) axpy(r, -dot(r, b), b);
    return r;
}

struct Facet {
    std::vector<int> verts;  // d vertex indices
    Point normal;            // unit outward
    double offset = 0.0;     // normal . x = offset on the facet plane
};

// Hyperplane through d points: orthonormalize the edge vectors, then take
// the coordinate axis with the largest residual as the normal seed.
bool facet_plane(const std::vector<Point>& pts, const std::vector<int>& verts, std::size_t d,
                 double eps, Point& normal, double& offset) {
    std::vector<Point> basis;
    basis.reserve(d - 1);
    for (std::size_t j = 1; j < d; ++j) {
        Point e(d);
        for (std::size_t k = 0; k < d; ++k) e[k] = pts[verts[j]][k] - pts[verts[0]][k];
        Point r = residual(e, basis);
        const double n = vnorm(r);
        if (n <= eps) return false;
        for (double& v : r) v /= n;
        basis.push_back(std::move(r));
    }
    double best_norm = -1.0;
    Point best;
    for (std::size_t k = 0; k < d; ++k) {
        Point axis(d, 0.0);
        axis[k] = 1.0;
        Point r = residual(axis, basis);
        const double n = vnorm(r);
        if (n > best_norm) {
            best_norm = n;
            best = std::move(r);
        }
    }
    if (best_norm <= 1e-8) return false;
    for (double& v : best) v /= best_norm;
    normal = std::move(best);
    offset = dot(normal, pts[verts[0]]);
    return true;
}

// |det| of the d x d matrix whose columns are (pts[verts[i]] - apex),
// via in-place Gaussian elimination with partial pivoting.
double simplex_det(const std::vector<Point>& pts, const std::vector<int>& verts,
                   const Point& apex, std::size_t d) {
    std::vector<Point> m(d, Point(d));
    for (std::size_t j = 0; j < d; ++j)
        for (std::size_t i = 0; i < d; ++i) m[i][j] = pts[verts[j]][i] - apex[i];
    double det = 1.0;
    for (std::size_t col = 0; col < d; ++col) {
        std::size_t piv = col;
        for (std::size_t i = col + 1; i < d; ++i)
            if (std::abs(m[i][col]) > std::abs(m[piv][col])) piv = i;
        if (m[piv][col] == 0.0) return 0.0;
        if (piv != col) std::swap(m[piv], m[col]);
        det *= m[col][col];
        for (std::size_t i = col + 1; i < d; ++i) {
            const double f = m[i][col] / m[col][col];
            for (std::size_t j = col; j < d; ++j) m[i][j] -= f * m[col][j];
        }
    }
    return std::abs(det);
}

}  // namespace

double convex_hull_volume(const PointCloudD& cloud) {
    const std::size_t d = cloud.dim;
    if (d < 2) throw InvalidInput("hull: dimension must be >= 2");
    for (const Point& p : cloud.points) {
        if (p.size() != d) throw InvalidInput("hull: point dimension mismatch");
        for (double v : p)
            if (!std::isfinite(v)) throw InvalidInput("hull: non-finite coordinate");
    }
    const std::size_t n = cloud.points.size();
    if (n < d + 1) return 0.0;
    const std::vector<Point>& pts = cloud.points;

    double scale = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
        double lo = pts[0][k], hi = pts[0][k];
        for (const Point& p : pts) {
            lo = std::min(lo, p[k]);
            hi = std::max(hi, p[k]);
        }
        scale = std::max(scale, hi - lo);
    }
    if (scale <= 0.0) return 0.0;  // all points coincide
    const double eps_aff = 1e-9 * scale;
    const double eps_vis = 1e-10 * scale;

    // Initial simplex: greedily add the point with the largest residual
    // off the current affine span. Affinely dependent input bails out here.
    std::vector<int> simplex = {0};
    std::vector<Point> basis;
    while (simplex.size() < d + 1) {
        int best = -1;
        double best_norm = eps_aff;
        Point best_res;
        for (std::size_t i = 0; i < n; ++i) {
            Point e(d);
            for (std::size_t k = 0; k < d; ++k) e[k] = pts[i][k] - pts[simplex[0]][k];
            Point r = residual(e, basis);
            const double nn = vnorm(r);
            if (nn > best_norm) {
                best_norm = nn;
                best = static_cast<int>(i);
                best_res = std::move(r);
            }
        }
        if (best < 0) return 0.0;
        for (double& v : best_res) v /= best_norm;
        basis.push_back(std::move(best_res));
        simplex.push_back(best);
    }

    Point interior(d, 0.0);
    for (int idx : simplex) axpy(interior, 1.0 / (d + 1.0), pts[idx]);

    std::vector<Facet> facets;
    for (std::size_t skip = 0; skip <= d; ++skip) {
        Facet f;
        for (std::size_t j = 0; j <= d; ++j)
            if (j != skip) f.verts.push_back(simplex[j]);
        if (!facet_plane(pts, f.verts, d, eps_aff * 1e-3, f.normal, f.offset))
            throw InvalidInput("hull: degenerate initial simplex facet");
        if (dot(f.normal, interior) > f.offset) {
            for (double& v : f.normal) v = -v;
            f.offset = -f.offset;
        }
        facets.push_back(std::move(f));
    }

    std::vector<bool> used(n, false);
    for (int idx : simplex) used[idx] = true;

    for (std::size_t p = 0; p < n; ++p) {
        if (used[p]) continue;
        std::vector<int> visible;
        for (std::size_t f = 0; f < facets.size(); ++f)
            if (dot(facets[f].normal, pts[p]) > facets[f].offset + eps_vis)
                visible.push_back(static_cast<int>(f));
        if (visible.empty()) continue;

        // Horizon = ridges that occur exactly once among the visible facets.
        std::map<std::vector<int>, int> ridge_count;
        for (int f : visible) {
            const std::vector<int>& verts = facets[f].verts;
            for (std::size_t skip = 0; skip < d; ++skip) {
                std::vector<int> ridge;
                ridge.reserve(d - 1);
                for (std::size_t j = 0; j < d; ++j)
                    if (j != skip) ridge.push_back(verts[j]);
                std::sort(ridge.begin(), ridge.end());
                ++ridge_count[ridge];
            }
        }

        std::vector<Facet> fresh;
        bool ok = true;
        for (const auto& [ridge, count] : ridge_count) {
            if (count != 1) continue;
            Facet f;
            f.verts = ridge;
            f.verts.push_back(static_cast<int>(p));
            if (!facet_plane(pts, f.verts, d, eps_aff * 1e-3, f.normal, f.offset)) {
                ok = false;
                break;
            }
            if (dot(f.normal, interior) > f.offset) {
                for (double& v : f.normal) v = -v;
                f.offset = -f.offset;
            }
            fresh.push_back(std::move(f));
        }
        if (!ok) continue;  // near-degenerate cone; point is eps-close to the hull anyway

        std::vector<Facet> kept;
        kept.reserve(facets.size() - visible.size() + fresh.size());
        std::size_t vi = 0;
        for (std::size_t f = 0; f < facets.size(); ++f) {
            if (vi < visible.size() && static_cast<int>(f) == visible[vi]) {
                ++vi;
                continue;
            }
            kept.push_back(std::move(facets[f]));
        }
        for (Facet& f : fresh) kept.push_back(std::move(f));
        facets = std::move(kept);
    }

    double dfact = 1.0;
    for (std::size_t k = 2; k <= d; ++k) dfact *= static_cast<double>(k);
    double volume = 0.0;
    for (const Facet& f : facets) volume += simplex_det(pts, f.verts, interior, d);
    return volume / dfact;
}

}  // namespace graspq
