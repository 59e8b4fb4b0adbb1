#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <memory>

#include "graspq/error.hpp"
#include "graspq/grasp_matrices.hpp"
#include "graspq/metrics.hpp"
#include "graspq/rng.hpp"
#include "graspq/svd.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace graspq;
using fixtures::ideal_triangle_grasp;
using fixtures::make_grasp;
using fixtures::make_object;
using fixtures::mid_posture;

namespace {

MetricOptions unit_scale() {
    MetricOptions o;
    o.torque_scale = 1.0;
    return o;
}

Vec3 random_unit(Rng& rng) {
    Vec3 v{rng.normal(), rng.normal(), rng.normal()};
    while (v.norm() < 1e-6) v = {rng.normal(), rng.normal(), rng.normal()};
    return v.normalized();
}

GraspInstance random_three_contact_grasp(Rng& rng, bool with_jacobian = false) {
    std::vector<Contact> contacts;
    for (int i = 0; i < 3; ++i)
        contacts.push_back({{rng.uniform(-0.8, 0.8), rng.uniform(-0.8, 0.8),
                             rng.uniform(-0.8, 0.8)},
                            random_unit(rng), rng.uniform(0.3, 1.0)});
    std::optional<Matrix> j;
    std::size_t joints = 3;
    if (with_jacobian) {
        joints = 4;
        Matrix m(9, joints);
        for (double& v : m.data()) v = rng.uniform(-1.0, 1.0);
        j = std::move(m);
    }
    return make_grasp(std::move(contacts), make_object({}, 1.0, 1.0, 1.0), std::move(j),
                      mid_posture(joints));
}

// Rotates contacts, normals and the com by the quaternion-derived rotation.
GraspInstance rotate_grasp(const GraspInstance& g, const Vec3& rx, const Vec3& ry,
                           const Vec3& rz) {
    GraspInstance out = g;
    const auto rot = [&](const Vec3& v) { return Vec3{rx.dot(v), ry.dot(v), rz.dot(v)}; };
    for (Contact& c : out.contacts) {
        c.position = rot(c.position);
        c.normal = rot(c.normal).normalized();
    }
    auto obj = std::make_shared<ObjectModel>(*g.object);
    obj->center_of_mass = rot(obj->center_of_mass);
    out.object = obj;
    return out;
}

}  // namespace

TEST_CASE("q_a1: orthonormal-row map has smallest singular value 1") {
    Matrix m(6, 9);
    for (int i = 0; i < 6; ++i) m(i, i) = 1.0;
    const auto s = svd_singular_values(m);
    CHECK(s.back() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("q_a1: single contact cannot span wrench space") {
    const auto g = make_grasp({{{0, 0, 0}, {0, 0, 1}, 0.5}}, make_object());
    CHECK(q_a1(g, unit_scale()) == 0.0);
    const QualityVector qv = quality_vector(g, unit_scale());
    CHECK(*qv.m[0].value == 0.0);
    CHECK(qv.m[0].degenerate);
    CHECK(qv.m[0].unnormalized);
}

TEST_CASE("q_a1: random grasps match the eigen oracle on G") {
    Rng rng(301);
    for (int rep = 0; rep < 10; ++rep) {
        const auto g = random_three_contact_grasp(rng);
        const Matrix gm = grasp_map(g, 1.0);
        const auto sigma = oracle::singular_values(gm);
        REQUIRE(sigma.size() == 6);
        CHECK(std::abs(q_a1(g, unit_scale()) - sigma.back()) < 1e-9 * (1.0 + sigma.front()));
    }
}

TEST_CASE("q_b1: centroid on the com scores 1") {
    CHECK(q_b1(ideal_triangle_grasp()) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("q_b1: centroid at distance_max scores 0, at a quarter 0.75") {
    // Equilateral triangle centered at (d, 0, 0), com at the origin.
    const auto at_distance = [](double d) {
        std::vector<Contact> contacts;
        for (int i = 0; i < 3; ++i) {
            const double a = 2.0 * M_PI * i / 3.0;
            const Vec3 pos{d + 0.1 * std::cos(a), 0.1 * std::sin(a), 0.0};
            contacts.push_back({pos, {0, 0, 1}, 0.5});
        }
        return make_grasp(std::move(contacts), make_object({}, 1.0, 1.0));
    };
    CHECK(q_b1(at_distance(1.0)) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(q_b1(at_distance(0.25)) == doctest::Approx(0.75).epsilon(1e-12));

    // Past distance_max the raw value goes negative and clamps to 0.
    const QualityVector qv = quality_vector(at_distance(1.5), unit_scale());
    CHECK(*qv.m[1].value == 0.0);
    CHECK(qv.m[1].clamped);
}

TEST_CASE("q_b2: degenerate, boundary and linear cases") {
    const auto pinch = make_grasp(
        {{{0.3, 0, 0}, {-1, 0, 0}, 0.5}, {{-0.3, 0, 0}, {1, 0, 0}, 0.5}}, make_object());
    CHECK(q_b2(pinch) == 0.0);

    // Right triangle with unit legs: area 1/2.
    const std::vector<Contact> tri{{{0, 0, 0}, {0, 0, 1}, 0.5},
                                   {{1, 0, 0}, {0, 0, 1}, 0.5},
                                   {{0, 1, 0}, {0, 0, 1}, 0.5}};
    CHECK(q_b2(make_grasp(tri, make_object({}, 1.0, 0.5))) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(q_b2(make_grasp(tri, make_object({}, 1.0, 1.0))) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("q_b3: regular polygons score 1") {
    CHECK(q_b3(ideal_triangle_grasp()) == doctest::Approx(1.0).epsilon(1e-12));
    const std::vector<Contact> square{{{0, 0, 0}, {0, 0, 1}, 0.5},
                                      {{1, 0, 0}, {0, 0, 1}, 0.5},
                                      {{1, 1, 0}, {0, 0, 1}, 0.5},
                                      {{0, 1, 0}, {0, 0, 1}, 0.5}};
    CHECK(q_b3(make_grasp(square, make_object())) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("q_b3: 3-4-5 triangle against the hand angle sum") {
    const std::vector<Contact> tri{{{0, 0, 0}, {0, 0, 1}, 0.5},
                                   {{4, 0, 0}, {0, 0, 1}, 0.5},
                                   {{0, 3, 0}, {0, 0, 1}, 0.5}};
    // Angles 90 / 53.13 / 36.87 about a mean of 60: total deviation is
    // exactly twice the largest one, 60 degrees; theta_max defaults to 180.
    CHECK(q_b3(make_grasp(tri, make_object({}, 10.0, 10.0))) ==
          doctest::Approx(1.0 - 60.0 / 180.0).epsilon(1e-9));

    // An explicit theta_max override rescales the deviation term.
    auto obj = std::make_shared<ObjectModel>(*make_object({}, 10.0, 10.0));
    obj->norm_constants.theta_max = 360.0;
    CHECK(q_b3(make_grasp(tri, obj)) == doctest::Approx(1.0 - 60.0 / 360.0).epsilon(1e-9));
}

TEST_CASE("q_b3: fewer than 3 contacts or collinear contacts score 0") {
    const auto pinch = make_grasp(
        {{{0.3, 0, 0}, {-1, 0, 0}, 0.5}, {{-0.3, 0, 0}, {1, 0, 0}, 0.5}}, make_object());
    CHECK(q_b3(pinch) == 0.0);
    const auto line = make_grasp({{{0, 0, 0}, {0, 0, 1}, 0.5},
                                  {{0.2, 0, 0}, {0, 0, 1}, 0.5},
                                  {{0.4, 0, 0}, {0, 0, 1}, 0.5}},
                                 make_object());
    CHECK(q_b3(line) == 0.0);
    const QualityVector qv = quality_vector(line, unit_scale());
    CHECK(qv.m[3].degenerate);
}

TEST_CASE("q_c2: single frictionless contact is a degenerate hull") {
    const auto g =
        make_grasp({{{0.5, 0, 0}, {-1, 0, 0}, 0.0}}, make_object({}, 1.0, 1.0, 1.0));
    CHECK(q_c2(g, unit_scale()) == 0.0);
    const QualityVector qv = quality_vector(g, unit_scale());
    CHECK(qv.m[4].degenerate);
}

TEST_CASE("q_c2: missing volume_max throws on the scalar path, raw value in the vector") {
    const auto g = ideal_triangle_grasp();
    CHECK_THROWS_AS(q_c2(g, unit_scale()), MissingNormalization);
    const QualityVector qv = quality_vector(g, unit_scale());
    REQUIRE(qv.m[4].value);
    CHECK(*qv.m[4].value > 0.0);
    CHECK(qv.m[4].unnormalized);
}

TEST_CASE("q_c2: hull volume equal to volume_max scores 1") {
    auto g = ideal_triangle_grasp();
    const double raw = *quality_vector(g, unit_scale()).m[4].value;
    REQUIRE(raw > 0.0);
    auto obj = std::make_shared<ObjectModel>(*g.object);
    obj->norm_constants.volume_max = raw;
    g.object = obj;
    CHECK(q_c2(g, unit_scale()) == doctest::Approx(1.0).epsilon(1e-12));

    // A far smaller bound clamps at 1 and says so.
    obj = std::make_shared<ObjectModel>(*g.object);
    obj->norm_constants.volume_max = raw / 10.0;
    g.object = obj;
    const QualityVector qv = quality_vector(g, unit_scale());
    CHECK(*qv.m[4].value == 1.0);
    CHECK(qv.m[4].clamped);
}

TEST_CASE("q_c2: force-space hull matches the Monte Carlo oracle") {
    auto g = ideal_triangle_grasp(0.5, 1.0);  // mu = 1
    MetricOptions opt = unit_scale();
    opt.cone_edges = 6;
    opt.wrench_space = WrenchSpace::force_3d;
    const double raw = *quality_vector(g, opt).m[4].value;

    PointCloudD cloud = wrench_set(g, 6, 1.0);
    for (auto& p : cloud.points) p.resize(3);
    cloud.dim = 3;
    const double mc = oracle::mc_hull_volume(cloud, 400000, 33);
    REQUIRE(raw > 0.0);
    CHECK(std::abs(raw - mc) / raw < 0.02);
}

TEST_CASE("q_d1: mid-range joints score 1, joints on a limit score 0") {
    CHECK(q_d1(make_posture({0.5, 0.5}, {0.0, 0.0}, {1.0, 1.0})) == 1.0);
    CHECK(q_d1(make_posture({1.0, 1.0}, {0.0, 0.0}, {1.0, 1.0})) == 0.0);
    CHECK(q_d1(make_posture({0.0, 0.0}, {0.0, 0.0}, {1.0, 1.0})) == 0.0);
}

TEST_CASE("q_d1: halfway toward the limit scores 0.75") {
    // y = a + 0.5 (y_max - a) on every joint.
    CHECK(q_d1(make_posture({0.75, 0.75, 0.75}, {0.0, 0.0, 0.0}, {1.0, 1.0, 1.0})) ==
          doctest::Approx(0.75).epsilon(1e-12));
    // Same on the lower side.
    CHECK(q_d1(make_posture({0.25}, {0.0}, {1.0})) == doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("q_d1: rest value on the selected limit is a degenerate range") {
    const HandPosture p = make_posture({1.0}, {0.0}, {1.0}, std::vector<double>{1.0});
    CHECK_THROWS_AS(q_d1(p), DegenerateRange);
    // Deviating away from the on-limit rest value stays well-defined.
    const HandPosture ok = make_posture({0.5}, {0.0}, {1.0}, std::vector<double>{1.0});
    CHECK(q_d1(ok) == doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("q_d2: orthonormal columns score 1, rank deficiency scores 0") {
    const auto iso = make_grasp({{{0, 0, 0}, {0, 0, 1}, 0.5}}, make_object(),
                                Matrix::identity(3), mid_posture(3));
    CHECK(q_d2(iso, unit_scale()) == doctest::Approx(1.0).epsilon(1e-9));

    Matrix dup(3, 2);  // two identical columns
    dup(0, 0) = dup(0, 1) = 1.0;
    dup(1, 0) = dup(1, 1) = 0.5;
    const auto flat = make_grasp({{{0, 0, 0}, {0, 0, 1}, 0.5}}, make_object(), dup,
                                 mid_posture(2));
    CHECK(q_d2(flat, unit_scale()) == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("q_d2: zero product reports degenerate instead of dividing") {
    Matrix zero(3, 2);
    const auto g = make_grasp({{{0, 0, 0}, {0, 0, 1}, 0.5}}, make_object(), zero,
                              mid_posture(2));
    CHECK(q_d2(g, unit_scale()) == 0.0);
    CHECK(quality_vector(g, unit_scale()).m[6].degenerate);
}

TEST_CASE("q_d2: random grasps match the eigen oracle on G_J") {
    Rng rng(302);
    for (int rep = 0; rep < 10; ++rep) {
        const auto g = random_three_contact_grasp(rng, true);
        const auto sigma = oracle::singular_values(grasp_jacobian_product(g, 1.0));
        REQUIRE(sigma.size() == 4);
        CHECK(std::abs(q_d2(g, unit_scale()) - sigma.back() / sigma.front()) < 1e-9);
    }
}

TEST_CASE("q_d2: missing Jacobian") {
    const auto g = make_grasp({{{0, 0, 0}, {0, 0, 1}, 0.5}}, make_object());
    CHECK_THROWS_AS(q_d2(g, unit_scale()), MissingJacobian);
    const QualityVector qv = quality_vector(g, unit_scale());
    CHECK(!qv.m[6].value);
    CHECK(qv.m[6].missing_input);
}

TEST_CASE("quality_vector: degenerate single-contact composition") {
    const auto g = make_grasp({{{0.2, 0, 0}, {-1, 0, 0}, 0.5}}, make_object({}, 1.0, 1.0, 1.0));
    const QualityVector qv = quality_vector(g, unit_scale());
    CHECK(*qv.m[0].value == 0.0);
    CHECK(qv.m[0].degenerate);
    CHECK(*qv.m[1].value == doctest::Approx(0.8));
    CHECK(*qv.m[2].value == 0.0);
    CHECK(qv.m[2].degenerate);
    CHECK(*qv.m[3].value == 0.0);
    CHECK(qv.m[3].degenerate);
    CHECK(*qv.m[4].value == 0.0);
    CHECK(qv.m[4].degenerate);
    CHECK(*qv.m[5].value == 1.0);
    CHECK(!qv.m[6].value);
    CHECK(qv.m[6].missing_input);
}

TEST_CASE("quality_vector: ideal grasp pins the analytic optima") {
    const QualityVector qv = quality_vector(ideal_triangle_grasp(), unit_scale());
    CHECK(std::abs(*qv.m[1].value - 1.0) <= 1e-9);
    CHECK(std::abs(*qv.m[3].value - 1.0) <= 1e-9);
    CHECK(std::abs(*qv.m[5].value - 1.0) <= 1e-9);
}

TEST_CASE("quality_vector: components equal the individually computed metrics") {
    Rng rng(303);
    const auto g = random_three_contact_grasp(rng, true);
    const MetricOptions opt = unit_scale();
    const QualityVector qv = quality_vector(g, opt);
    CHECK(*qv.m[0].value == q_a1(g, opt));
    CHECK(*qv.m[1].value == q_b1(g));
    CHECK(*qv.m[2].value == q_b2(g));
    CHECK(*qv.m[3].value == q_b3(g));
    CHECK(*qv.m[4].value == q_c2(g, opt));
    CHECK(*qv.m[5].value == q_d1(g.posture));
    CHECK(*qv.m[6].value == q_d2(g, opt));
}

TEST_CASE("quality_vector: pure function, bitwise repeatable") {
    Rng rng(304);
    const auto g = random_three_contact_grasp(rng, true);
    const QualityVector a = quality_vector(g, unit_scale());
    const QualityVector b = quality_vector(g, unit_scale());
    for (int i = 0; i < kMetricCount; ++i) {
        REQUIRE(a.m[i].value.has_value() == b.m[i].value.has_value());
        if (a.m[i].value) CHECK(*a.m[i].value == *b.m[i].value);
    }
    CHECK(a.meta.torque_scale == b.meta.torque_scale);
    CHECK(a.meta.cone_edges == b.meta.cone_edges);
}

TEST_CASE("quality_vector: metric failures carry the metric name") {
    // Posture rest value parked on the selected limit: q_d1 must fail and
    // say which metric raised.
    auto g = make_grasp({{{0.2, 0, 0}, {-1, 0, 0}, 0.5}}, make_object({}, 1.0, 1.0, 1.0),
                        std::nullopt,
                        make_posture({1.0}, {0.0}, {1.0}, std::vector<double>{1.0}));
    try {
        quality_vector(g, unit_scale());
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).rfind("q_d1:", 0) == 0);
    }
}

TEST_CASE("metrics: bounded metrics stay in [0, 1] on random grasps") {
    Rng rng(305);
    for (int rep = 0; rep < 20; ++rep) {
        const auto g = random_three_contact_grasp(rng, true);
        const QualityVector qv = quality_vector(g, unit_scale());
        for (int i : {1, 2, 3, 4, 5, 6}) {
            REQUIRE(qv.m[i].value);
            CHECK(*qv.m[i].value >= 0.0);
            CHECK(*qv.m[i].value <= 1.0);
        }
        CHECK(*qv.m[0].value >= 0.0);  // raw sigma, nonnegative only
    }
}

TEST_CASE("metrics: rigid transforms leave the polygon and posture metrics alone") {
    Rng rng(306);
    const auto g = random_three_contact_grasp(rng);
    double quat[4];
    double n = 0.0;
    for (double& v : quat) {
        v = rng.normal();
        n += v * v;
    }
    n = std::sqrt(n);
    for (double& v : quat) v /= n;
    const double w = quat[0], x = quat[1], y = quat[2], z = quat[3];
    const Vec3 rx{1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)};
    const Vec3 ry{2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)};
    const Vec3 rz{2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)};

    GraspInstance moved = rotate_grasp(g, rx, ry, rz);
    const Vec3 t{0.375, -1.25, 2.0};
    for (Contact& c : moved.contacts) c.position = c.position + t;
    auto obj = std::make_shared<ObjectModel>(*moved.object);
    obj->center_of_mass = obj->center_of_mass + t;
    moved.object = obj;

    CHECK(q_b1(moved) == doctest::Approx(q_b1(g)).epsilon(1e-9));
    CHECK(q_b2(moved) == doctest::Approx(q_b2(g)).epsilon(1e-9));
    CHECK(q_b3(moved) == doctest::Approx(q_b3(g)).epsilon(1e-9));
    CHECK(q_d1(moved.posture) == q_d1(g.posture));
    // Singular values survive any rotation of the scene.
    CHECK(q_a1(moved, unit_scale()) == doctest::Approx(q_a1(g, unit_scale())).epsilon(1e-9));
}

TEST_CASE("metrics: quarter-turn rotation leaves the wrench hull volume alone") {
    // An axis-permuting rotation maps every discretized friction cone onto
    // itself (cone_edges divisible by 4), so even the raw hull volume must
    // agree, not just its limit.
    Rng rng(307);
    const auto g = random_three_contact_grasp(rng);
    const Vec3 rx{0, -1, 0}, ry{1, 0, 0}, rz{0, 0, 1};  // 90 degrees about z
    const GraspInstance moved = rotate_grasp(g, rx, ry, rz);
    const double a = *quality_vector(g, unit_scale()).m[4].value;
    const double b = *quality_vector(moved, unit_scale()).m[4].value;
    CHECK(b == doctest::Approx(a).epsilon(1e-9));
}

TEST_CASE("normalize_q_a1: boundary, midpoint, bad thresholds") {
    CHECK(normalize_q_a1(0.2, 0.2, 0.8) == 0.0);
    CHECK(normalize_q_a1(0.8, 0.2, 0.8) == 1.0);
    CHECK(normalize_q_a1(0.5, 0.2, 0.8) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(normalize_q_a1(-1.0, 0.2, 0.8) == 0.0);
    CHECK(normalize_q_a1(2.0, 0.2, 0.8) == 1.0);
    CHECK_THROWS_AS(normalize_q_a1(0.5, 0.8, 0.2), InvalidThresholds);
    CHECK_THROWS_AS(normalize_q_a1(0.5, 0.5, 0.5), InvalidThresholds);
}

TEST_CASE("perturbation_stability: zero noise has zero spread") {
    const auto g = ideal_triangle_grasp();
    const auto stats = perturbation_stability(g, 0.0, 8, 42, unit_scale());
    const QualityVector qv = quality_vector(g, unit_scale());
    for (int i = 0; i < kMetricCount; ++i) {
        if (!qv.m[i].value) continue;
        CHECK(stats[i].stddev == 0.0);
        CHECK(stats[i].mean == *qv.m[i].value);
    }
}

TEST_CASE("perturbation_stability: deterministic for a fixed seed") {
    const auto g = ideal_triangle_grasp();
    const auto a = perturbation_stability(g, 1e-3, 16, 7, unit_scale());
    const auto b = perturbation_stability(g, 1e-3, 16, 7, unit_scale());
    for (int i = 0; i < kMetricCount; ++i) {
        CHECK(a[i].mean == b[i].mean);
        CHECK(a[i].stddev == b[i].stddev);
        CHECK(a[i].samples == b[i].samples);
    }
    CHECK_THROWS_AS(perturbation_stability(g, 1e-3, 1, 7, unit_scale()), InvalidInput);
}

TEST_CASE("perturbation_stability: q_b1 spread grows with the noise level") {
    const auto g = ideal_triangle_grasp();
    const std::vector<double> sigmas{1e-4, 1e-3, 1e-2};
    std::vector<double> spread;
    for (double s : sigmas)
        spread.push_back(perturbation_stability(g, s, 48, 7, unit_scale())[1].stddev);
    CHECK(oracle::spearman(sigmas, spread) > 0.9);
}
