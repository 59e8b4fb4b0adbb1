#include "graspq/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "graspq/error.hpp"
#include "graspq/grasp_matrices.hpp"
#include "graspq/rng.hpp"
#include "graspq/svd.hpp"

namespace graspq {

int metric_index(const std::string& name) {
    for (int i = 0; i < kMetricCount; ++i)
        if (name == kMetricNames[i]) return i;
    return -1;
}

namespace {

double clamp01(double v, bool& clamped) {
    if (v < 0.0) {
        clamped = true;
        return 0.0;
    }
    if (v > 1.0) {
        clamped = true;
        return 1.0;
    }
    return v;
}

double resolve_torque_scale(const GraspInstance& g, const MetricOptions& opt) {
    if (opt.torque_scale) {
        if (!(*opt.torque_scale > 0.0)) throw InvalidInput("torque scale must be > 0");
        return *opt.torque_scale;
    }
    return resolved_distance_max(*g.object);
}

MetricValue eval_q_a1(const GraspInstance& g, const MetricOptions& opt) {
    MetricValue r;
    const Matrix gm = grasp_map(g, resolve_torque_scale(g, opt));
    const std::vector<double> sigma = svd_singular_values(gm);
    // The map acts on 6 wrench dimensions; with 3n < 6 inputs the missing
    // directions are unreachable, i.e. zero singular values.
    if (gm.cols() < 6) {
        r.value = 0.0;
        r.degenerate = true;
    } else {
        r.value = sigma.back();
    }
    r.unnormalized = true;  // raw sigma; thresholds applied downstream
    return r;
}

MetricValue eval_q_b1(const GraspInstance& g) {
    MetricValue r;
    const double dmax = resolved_distance_max(*g.object);
    const Polygon3D poly = contact_polygon(g);
    const Vec3 centroid =
        poly.vertices.size() >= 3 ? polygon_centroid(poly) : [&] {
            Vec3 mean{};
            for (const Vec3& v : poly.vertices) mean = mean + v;
            return mean / static_cast<double>(poly.vertices.size());
        }();
    const double dist = (centroid - g.object->center_of_mass).norm();
    r.value = clamp01(1.0 - dist / dmax, r.clamped);
    return r;
}

MetricValue eval_q_b2(const GraspInstance& g) {
    MetricValue r;
    const double amax = resolved_area_max(*g.object);
    const Polygon3D poly = contact_polygon(g);
    if (poly.vertices.size() < 3) {
        r.value = 0.0;
        r.degenerate = true;
        return r;
    }
    r.value = clamp01(polygon_area(poly) / amax, r.clamped);
    return r;
}

MetricValue eval_q_b3(const GraspInstance& g) {
    MetricValue r;
    const Polygon3D poly = contact_polygon(g);
    const std::size_t nf = poly.vertices.size();
    if (nf < 3) {
        r.value = 0.0;
        r.degenerate = true;
        return r;
    }
    std::vector<double> angles;
    try {
        angles = polygon_internal_angles(poly);
    } catch (const DegenerateInput&) {
        // Collinear contacts: no polygon shape to score.
        r.value = 0.0;
        r.degenerate = true;
        return r;
    }
    const double theta_max = g.object->norm_constants.theta_max
                                 ? *g.object->norm_constants.theta_max
                                 : (static_cast<double>(nf) - 2.0) * 180.0;
    const double mean = (static_cast<double>(nf) - 2.0) * 180.0 / static_cast<double>(nf);
    double dev = 0.0;
    for (double a : angles) dev += std::abs(a - mean);
    r.value = clamp01(1.0 - dev / theta_max, r.clamped);
    return r;
}

MetricValue eval_q_c2(const GraspInstance& g, const MetricOptions& opt) {
    MetricValue r;
    PointCloudD cloud = wrench_set(g, opt.cone_edges, resolve_torque_scale(g, opt));
    if (opt.wrench_space == WrenchSpace::force_3d) {
        for (auto& p : cloud.points) p.resize(3);
        cloud.dim = 3;
    }
    const double volume = convex_hull_volume(cloud);
    if (volume <= 0.0) r.degenerate = true;
    if (g.object->norm_constants.volume_max) {
        const double vmax = *g.object->norm_constants.volume_max;
        if (!(vmax > 0.0)) throw InvalidInput("object volume_max must be > 0");
        r.value = clamp01(volume / vmax, r.clamped);
    } else {
        r.value = volume;  // raw; thresholds applied downstream
        r.unnormalized = true;
    }
    return r;
}

MetricValue eval_q_d1(const HandPosture& p) {
    MetricValue r;
    validate_posture(p);
    const std::size_t nq = p.y.size();
    double sum = 0.0;
    for (std::size_t i = 0; i < nq; ++i) {
        // Limit on the same side as the deviation, so each in-range term
        // lands in [0, 1].
        const double limit = p.y[i] >= p.mid[i] ? p.y_max[i] : p.y_min[i];
        const double denom = p.mid[i] - limit;
        if (denom == 0.0) throw DegenerateRange("q_d1: rest value equals a joint limit");
        const double t = (p.y[i] - p.mid[i]) / denom;
        sum += t * t;
    }
    r.value = clamp01(1.0 - sum / static_cast<double>(nq), r.clamped);
    return r;
}

MetricValue eval_q_d2(const GraspInstance& g, const MetricOptions& opt) {
    MetricValue r;
    if (!g.hand_jacobian) {
        r.missing_input = true;
        return r;
    }
    const Matrix gj = grasp_jacobian_product(g, resolve_torque_scale(g, opt));
    const std::vector<double> sigma = svd_singular_values(gj);
    const double smax = sigma.front();
    if (smax <= 0.0) {
        r.value = 0.0;
        r.degenerate = true;
        return r;
    }
    r.value = sigma.back() / smax;
    return r;
}

}  // namespace

double q_a1(const GraspInstance& g, const MetricOptions& opt) { return *eval_q_a1(g, opt).value; }
double q_b1(const GraspInstance& g) { return *eval_q_b1(g).value; }
double q_b2(const GraspInstance& g) { return *eval_q_b2(g).value; }
double q_b3(const GraspInstance& g) { return *eval_q_b3(g).value; }

double q_c2(const GraspInstance& g, const MetricOptions& opt) {
    if (!g.object->norm_constants.volume_max)
        throw MissingNormalization("object '" + g.object->name + "' has no volume_max");
    return *eval_q_c2(g, opt).value;
}

double q_d1(const HandPosture& posture) { return *eval_q_d1(posture).value; }

double q_d2(const GraspInstance& g, const MetricOptions& opt) {
    if (!g.hand_jacobian) throw MissingJacobian("grasp '" + g.grasp_id + "' has no hand Jacobian");
    return *eval_q_d2(g, opt).value;
}

QualityVector quality_vector(const GraspInstance& g, const MetricOptions& opt) {
    validate_grasp(g);
    QualityVector qv;
    qv.meta.torque_scale = resolve_torque_scale(g, opt);
    qv.meta.cone_edges = opt.cone_edges;
    qv.meta.wrench_space = opt.wrench_space;
    qv.meta.theta_max = g.object->norm_constants.theta_max;

    const auto run = [&](int idx, auto&& fn) {
        try {
            qv.m[idx] = fn();
        } catch (const Error& e) {
            throw Error(std::string(kMetricNames[idx]) + ": " + e.what());
        }
    };
    run(0, [&] { return eval_q_a1(g, opt); });
    run(1, [&] { return eval_q_b1(g); });
    run(2, [&] { return eval_q_b2(g); });
    run(3, [&] { return eval_q_b3(g); });
    run(4, [&] { return eval_q_c2(g, opt); });
    run(5, [&] { return eval_q_d1(g.posture); });
    run(6, [&] { return eval_q_d2(g, opt); });
    return qv;
}

double normalize_q_a1(double raw, double lo, double hi) {
    if (!(hi > lo)) throw InvalidThresholds("normalization thresholds require hi > lo");
    double v = (raw - lo) / (hi - lo);
    if (v < 0.0) v = 0.0;
    if (v > 1.0) v = 1.0;
    return v;
}

std::array<MetricStat, 7> perturbation_stability(const GraspInstance& g, double sigma_pos,
                                                 int trials, std::uint64_t seed,
                                                 const MetricOptions& opt) {
    if (trials < 2) throw InvalidInput("perturbation_stability: trials must be >= 2");
    std::array<std::vector<double>, 7> samples;
    for (int t = 0; t < trials; ++t) {
        Rng rng = Rng::derive(seed, static_cast<std::uint64_t>(t));
        GraspInstance noisy = g;
        for (Contact& c : noisy.contacts) {
            c.position.x += rng.normal(0.0, sigma_pos);
            c.position.y += rng.normal(0.0, sigma_pos);
            c.position.z += rng.normal(0.0, sigma_pos);
        }
        const QualityVector qv = quality_vector(noisy, opt);
        for (int i = 0; i < kMetricCount; ++i)
            if (qv.m[i].value) samples[i].push_back(*qv.m[i].value);
    }
    std::array<MetricStat, 7> out;
    for (int i = 0; i < kMetricCount; ++i) {
        const auto& s = samples[i];
        out[i].samples = static_cast<int>(s.size());
        if (s.empty()) continue;
        // Identical samples (always the case for sigma_pos = 0) must report
        // an exact zero spread, not accumulation noise.
        if (std::all_of(s.begin(), s.end(), [&](double v) { return v == s.front(); })) {
            out[i].mean = s.front();
            continue;
        }
        const double n = static_cast<double>(s.size());
        double sum = 0.0;
        for (double v : s) sum += v;
        out[i].mean = sum / n;
        double sq = 0.0;
        for (double v : s) sq += (v - out[i].mean) * (v - out[i].mean);
        out[i].stddev = std::sqrt(sq / n);
    }
    return out;
}

}  // namespace graspq
