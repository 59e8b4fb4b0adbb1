#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "graspq/error.hpp"
#include "graspq/hull.hpp"
#include "graspq/polygon.hpp"
#include "graspq/rng.hpp"
#include "graspq/svd.hpp"
#include "oracles.hpp"

using namespace graspq;

namespace {

Matrix random_matrix(std::size_t r, std::size_t c, Rng& rng) {
    Matrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) m(i, j) = rng.uniform(-1.0, 1.0);
    return m;
}

// Random rotation from a normalized quaternion.
void random_rotation(Rng& rng, Vec3& rx, Vec3& ry, Vec3& rz) {
    double q[4];
    double n = 0.0;
    for (double& v : q) {
        v = rng.normal();
        n += v * v;
    }
    n = std::sqrt(n);
    for (double& v : q) v /= n;
    const double w = q[0], x = q[1], y = q[2], z = q[3];
    rx = {1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)};
    ry = {2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)};
    rz = {2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)};
}

Vec3 rotate(const Vec3& v, const Vec3& rx, const Vec3& ry, const Vec3& rz) {
    return {rx.dot(v), ry.dot(v), rz.dot(v)};
}

// Convex planar polygon: points on a tilted ellipse, ascending angle.
std::vector<Vec3> random_convex_polygon(std::size_t n, Rng& rng) {
    Vec3 rx, ry, rz;
    random_rotation(rng, rx, ry, rz);
    const Vec3 center{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
    const double a = rng.uniform(0.5, 2.0), b = rng.uniform(0.5, 2.0);
    std::vector<double> ang(n);
    for (double& t : ang) t = rng.uniform(0.0, 2.0 * M_PI);
    std::sort(ang.begin(), ang.end());
    std::vector<Vec3> v;
    for (double t : ang) {
        const Vec3 local{a * std::cos(t), b * std::sin(t), 0.0};
        v.push_back(center + rotate(local, rx, ry, rz));
    }
    return v;
}

}  // namespace

TEST_CASE("svd: identity") {
    const auto s = svd_singular_values(Matrix::identity(3));
    REQUIRE(s.size() == 3);
    for (double v : s) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("svd: diagonal matrix returns its entries sorted") {
    Matrix m(3, 3);
    m(0, 0) = 3.0;
    m(1, 1) = 2.0;
    m(2, 2) = 1.0;
    const auto s = svd_singular_values(m);
    CHECK(s[0] == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(s[1] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(s[2] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("svd: random 4x3 matches the characteristic-polynomial eigen oracle") {
    Rng rng(101);
    for (int rep = 0; rep < 25; ++rep) {
        const Matrix m = random_matrix(4, 3, rng);
        const auto s = svd_singular_values(m);
        const auto expect = oracle::singular_values(m);
        REQUIRE(s.size() == 3);
        REQUIRE(expect.size() == 3);
        for (int i = 0; i < 3; ++i) CHECK(std::abs(s[i] - expect[i]) < 1e-9 * (1.0 + expect[0]));
    }
}

TEST_CASE("svd: transpose has the same singular values") {
    Rng rng(102);
    for (int rep = 0; rep < 10; ++rep) {
        const Matrix m = random_matrix(2 + rep % 5, 2 + (rep * 3) % 7, rng);
        const auto a = svd_singular_values(m);
        const auto b = svd_singular_values(m.transposed());
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) < 1e-9);
    }
}

TEST_CASE("svd: scaling the matrix scales every singular value") {
    Rng rng(103);
    const Matrix m = random_matrix(5, 4, rng);
    const double c = 3.25;
    const auto s1 = svd_singular_values(m);
    const auto s2 = svd_singular_values(m * c);
    for (std::size_t i = 0; i < s1.size(); ++i)
        CHECK(s2[i] == doctest::Approx(c * s1[i]).epsilon(1e-12));
}

TEST_CASE("svd: rejects non-finite entries") {
    Matrix m(2, 2);
    m(0, 0) = std::nan("");
    CHECK_THROWS_AS(svd_singular_values(m), InvalidInput);
}

TEST_CASE("eigen_sym3: matches oracle and satisfies A v = lambda v") {
    Rng rng(104);
    for (int rep = 0; rep < 20; ++rep) {
        Matrix m(3, 3);
        for (int i = 0; i < 3; ++i)
            for (int j = i; j < 3; ++j) m(i, j) = m(j, i) = rng.uniform(-1.0, 1.0);
        std::array<std::array<double, 3>, 3> a{};
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) a[i][j] = m(i, j);
        const SymEig3 e = eigen_sym3(a);
        const auto expect = oracle::sym_eigenvalues(m);
        REQUIRE(expect.size() == 3);
        for (int i = 0; i < 3; ++i) {
            CHECK(std::abs(e.values[i] - expect[i]) < 1e-9);
            for (int r = 0; r < 3; ++r) {
                double av = 0.0;
                for (int c = 0; c < 3; ++c) av += a[r][c] * e.vectors[i][c];
                CHECK(std::abs(av - e.values[i] * e.vectors[i][r]) < 1e-9);
            }
        }
    }
}

TEST_CASE("polygon_area: right triangle with unit legs") {
    Polygon3D t{{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}}};
    CHECK(polygon_area(t) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("polygon_area: collinear vertices give zero") {
    Polygon3D t{{{0, 0, 0}, {1, 1, 1}, {2, 2, 2}}};
    CHECK(polygon_area(t) == doctest::Approx(0.0));
}

TEST_CASE("polygon_area: fewer than 3 vertices is degenerate") {
    CHECK_THROWS_AS(polygon_area(Polygon3D{{{0, 0, 0}, {1, 0, 0}}}), DegenerateInput);
}

TEST_CASE("polygon_area: random planar hexagons match fan triangulation") {
    Rng rng(105);
    for (int rep = 0; rep < 20; ++rep) {
        const auto v = random_convex_polygon(6, rng);
        CHECK(polygon_area(Polygon3D{v}) == doctest::Approx(oracle::fan_area(v)).epsilon(1e-9));
    }
}

TEST_CASE("polygon_area: invariant under rigid transforms") {
    Rng rng(106);
    const auto v = random_convex_polygon(5, rng);
    Vec3 rx, ry, rz;
    random_rotation(rng, rx, ry, rz);
    const Vec3 t{0.7, -1.3, 2.9};
    std::vector<Vec3> moved;
    for (const Vec3& p : v) moved.push_back(rotate(p, rx, ry, rz) + t);
    CHECK(polygon_area(Polygon3D{moved}) ==
          doctest::Approx(polygon_area(Polygon3D{v})).epsilon(1e-9));
}

TEST_CASE("polygon_centroid: equilateral triangle centered on the origin") {
    const double r = 1.0;
    std::vector<Vec3> v;
    for (int i = 0; i < 3; ++i) {
        const double a = 2.0 * M_PI * i / 3.0;
        v.push_back({r * std::cos(a), r * std::sin(a), 0.0});
    }
    const Vec3 c = polygon_centroid(Polygon3D{v});
    CHECK(c.norm() < 1e-12);
}

TEST_CASE("polygon_centroid: unit square") {
    Polygon3D sq{{{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}}};
    const Vec3 c = polygon_centroid(sq);
    CHECK(c.x == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(c.y == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(std::abs(c.z) < 1e-12);
}

TEST_CASE("polygon_centroid: irregular quads match the triangulation oracle") {
    Rng rng(107);
    for (int rep = 0; rep < 20; ++rep) {
        const auto v = random_convex_polygon(4, rng);
        const Vec3 got = polygon_centroid(Polygon3D{v});
        const Vec3 expect = oracle::fan_centroid(v);
        CHECK((got - expect).norm() < 1e-9);
    }
}

TEST_CASE("polygon_internal_angles: equilateral triangle") {
    std::vector<Vec3> v;
    for (int i = 0; i < 3; ++i) {
        const double a = 2.0 * M_PI * i / 3.0;
        v.push_back({std::cos(a), std::sin(a), 0.0});
    }
    for (double ang : polygon_internal_angles(Polygon3D{v}))
        CHECK(ang == doctest::Approx(60.0).epsilon(1e-9));
}

TEST_CASE("polygon_internal_angles: unit square") {
    Polygon3D sq{{{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}}};
    for (double ang : polygon_internal_angles(sq)) CHECK(ang == doctest::Approx(90.0).epsilon(1e-9));
}

TEST_CASE("polygon_internal_angles: 3-4-5 right triangle matches the acos oracle") {
    const std::vector<Vec3> v{{0, 0, 0}, {4, 0, 0}, {0, 3, 0}};
    const auto angles = polygon_internal_angles(Polygon3D{v});
    const auto expect = oracle::internal_angles_deg(v);
    REQUIRE(angles.size() == 3);
    CHECK(angles[0] == doctest::Approx(90.0).epsilon(1e-9));
    CHECK(angles[1] == doctest::Approx(std::atan2(3.0, 4.0) * 180.0 / M_PI).epsilon(1e-9));
    CHECK(angles[2] == doctest::Approx(std::atan2(4.0, 3.0) * 180.0 / M_PI).epsilon(1e-9));
    for (int i = 0; i < 3; ++i) CHECK(angles[i] == doctest::Approx(expect[i]).epsilon(1e-9));
}

TEST_CASE("polygon_internal_angles: sum to (n-2)*180 on random convex polygons") {
    Rng rng(108);
    for (std::size_t n = 3; n <= 8; ++n) {
        const auto v = random_convex_polygon(n, rng);
        double sum = 0.0;
        for (double a : polygon_internal_angles(Polygon3D{v})) sum += a;
        CHECK(sum == doctest::Approx((static_cast<double>(n) - 2.0) * 180.0).epsilon(1e-9));
    }
}

TEST_CASE("hull: unit d-simplex volume is 1/d! for d = 2..6") {
    double factorial = 1.0;
    for (std::size_t d = 2; d <= 6; ++d) {
        factorial *= static_cast<double>(d);
        PointCloudD cloud;
        cloud.dim = d;
        cloud.points.emplace_back(d, 0.0);
        for (std::size_t i = 0; i < d; ++i) {
            std::vector<double> p(d, 0.0);
            p[i] = 1.0;
            cloud.points.push_back(std::move(p));
        }
        CHECK(convex_hull_volume(cloud) == doctest::Approx(1.0 / factorial).epsilon(1e-9));
    }
}

TEST_CASE("hull: adding an interior point changes nothing") {
    Rng rng(109);
    PointCloudD cloud;
    cloud.dim = 4;
    for (int i = 0; i < 10; ++i) {
        std::vector<double> p(4);
        for (double& x : p) x = rng.uniform(0.0, 1.0);
        cloud.points.push_back(std::move(p));
    }
    const double before = convex_hull_volume(cloud);
    std::vector<double> mean(4, 0.0);
    for (const auto& p : cloud.points)
        for (int c = 0; c < 4; ++c) mean[c] += p[c] / 10.0;
    cloud.points.push_back(mean);
    CHECK(convex_hull_volume(cloud) == doctest::Approx(before).epsilon(1e-9));
}

TEST_CASE("hull: random 4D point sets match the Monte Carlo membership oracle") {
    Rng rng(110);
    for (int rep = 0; rep < 20; ++rep) {
        PointCloudD cloud;
        cloud.dim = 4;
        for (int i = 0; i < 8; ++i) {
            std::vector<double> p(4);
            for (double& x : p) x = rng.uniform(0.0, 1.0);
            cloud.points.push_back(std::move(p));
        }
        const double vol = convex_hull_volume(cloud);
        const double mc = oracle::mc_hull_volume(cloud, 1000000, 1000 + rep);
        REQUIRE(vol > 0.0);
        CHECK(std::abs(vol - mc) / vol < 0.02);
    }
}

TEST_CASE("hull: permutation and rigid invariance, scaling by c^d") {
    Rng rng(111);
    PointCloudD cloud;
    cloud.dim = 3;
    for (int i = 0; i < 12; ++i) {
        std::vector<double> p(3);
        for (double& x : p) x = rng.uniform(-1.0, 1.0);
        cloud.points.push_back(std::move(p));
    }
    const double base = convex_hull_volume(cloud);
    REQUIRE(base > 0.0);

    PointCloudD shuffled = cloud;
    std::vector<std::size_t> order(shuffled.points.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    rng.shuffle(order);
    for (std::size_t i = 0; i < order.size(); ++i) shuffled.points[i] = cloud.points[order[i]];
    CHECK(convex_hull_volume(shuffled) == doctest::Approx(base).epsilon(1e-9));

    Vec3 rx, ry, rz;
    random_rotation(rng, rx, ry, rz);
    PointCloudD moved = cloud;
    for (auto& p : moved.points) {
        const Vec3 v{p[0], p[1], p[2]};
        const Vec3 r = rotate(v, rx, ry, rz) + Vec3{0.3, -0.8, 1.1};
        p = {r.x, r.y, r.z};
    }
    CHECK(convex_hull_volume(moved) == doctest::Approx(base).epsilon(1e-9));

    const double c = 1.75;
    PointCloudD scaled = cloud;
    for (auto& p : scaled.points)
        for (double& x : p) x *= c;
    CHECK(convex_hull_volume(scaled) == doctest::Approx(base * c * c * c).epsilon(1e-9));
}

TEST_CASE("hull: volume grows weakly when points are added") {
    Rng rng(112);
    PointCloudD cloud;
    cloud.dim = 3;
    for (int i = 0; i < 5; ++i) {
        std::vector<double> p(3);
        for (double& x : p) x = rng.uniform(-1.0, 1.0);
        cloud.points.push_back(std::move(p));
    }
    double prev = convex_hull_volume(cloud);
    for (int i = 0; i < 10; ++i) {
        std::vector<double> p(3);
        for (double& x : p) x = rng.uniform(-1.0, 1.0);
        cloud.points.push_back(std::move(p));
        const double now = convex_hull_volume(cloud);
        CHECK(now >= prev - 1e-12);
        prev = now;
    }
}

TEST_CASE("hull: affinely dependent input scores zero") {
    PointCloudD flat;
    flat.dim = 3;
    flat.points = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0}, {0.5, 0.5, 0}};
    CHECK(convex_hull_volume(flat) == 0.0);

    PointCloudD few;
    few.dim = 4;
    few.points = {{0, 0, 0, 0}, {1, 0, 0, 0}, {0, 1, 0, 0}};
    CHECK(convex_hull_volume(few) == 0.0);
}

TEST_CASE("hull: input validation") {
    PointCloudD bad;
    bad.dim = 1;
    bad.points = {{0.0}, {1.0}};
    CHECK_THROWS_AS(convex_hull_volume(bad), InvalidInput);

    PointCloudD mismatch;
    mismatch.dim = 3;
    mismatch.points = {{0, 0, 0}, {1, 1}};
    CHECK_THROWS_AS(convex_hull_volume(mismatch), InvalidInput);

    PointCloudD nan_cloud;
    nan_cloud.dim = 2;
    nan_cloud.points = {{0, 0}, {1, 0}, {std::nan(""), 1}};
    CHECK_THROWS_AS(convex_hull_volume(nan_cloud), InvalidInput);
}
