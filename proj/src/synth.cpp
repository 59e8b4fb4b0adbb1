#include "graspq/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "graspq/error.hpp"
#include "graspq/rng.hpp"

namespace graspq {

SynthSpec parse_preset(const std::string& text) {
    if (text == "ideal") return {SynthPreset::ideal, 0.0};
    if (text == "separable") return {SynthPreset::separable, 0.0};
    const std::string prefix = "noisy(";
    if (text.size() > prefix.size() + 1 && text.compare(0, prefix.size(), prefix) == 0 &&
        text.back() == ')') {
        const std::string num = text.substr(prefix.size(), text.size() - prefix.size() - 1);
        char* end = nullptr;
        const double v = std::strtod(num.c_str(), &end);
        if (end == num.c_str() + num.size() && std::isfinite(v) && v >= 0.0 && v <= 1.0)
            return {SynthPreset::noisy, v};
    }
    throw InvalidInput("unknown preset '" + text +
                       "' (expected ideal, separable or noisy(<0..1>))");
}

namespace {

constexpr double kRadius = 0.1;  // object size scale, metres

std::shared_ptr<const ObjectModel> make_object() {
    auto obj = std::make_shared<ObjectModel>();
    obj->name = "synth_block";
    obj->center_of_mass = Vec3{0.0, 0.0, 0.0};
    const double h = kRadius / std::sqrt(3.0);  // corners at distance kRadius
    for (int sx : {-1, 1})
        for (int sy : {-1, 1})
            for (int sz : {-1, 1}) obj->surface_points.push_back(Vec3{sx * h, sy * h, sz * h});
    obj->mass = 0.35;
    obj->norm_constants.distance_max = kRadius;
    // Headroom above the largest generated contact triangle, so q_b2 never
    // clamps: generated circumradius tops out near 0.55 * kRadius.
    obj->norm_constants.area_max = 3.0 * std::sqrt(3.0) / 4.0 * (0.6 * kRadius) * (0.6 * kRadius);
    return obj;
}

Vec3 random_unit(Rng& rng) {
    while (true) {
        const Vec3 v{rng.normal(), rng.normal(), rng.normal()};
        const double n = v.norm();
        if (n > 1e-6) return v / n;
    }
}

void plane_basis(const Vec3& w, Vec3& u, Vec3& v) {
    int least = 0;
    double best = std::abs(w[0]);
    for (int i = 1; i < 3; ++i)
        if (std::abs(w[i]) < best) {
            best = std::abs(w[i]);
            least = i;
        }
    Vec3 e{least == 0 ? 1.0 : 0.0, least == 1 ? 1.0 : 0.0, least == 2 ? 1.0 : 0.0};
    u = (e - w * e.dot(w)).normalized();
    v = w.cross(u);
}

struct ClassBands {
    double offset_lo, offset_hi;  // fraction of kRadius
    double dev_lo, dev_hi;        // fraction of joint half-range
};

ClassBands bands_for(TernaryLabel cls) {
    switch (cls) {
        case TernaryLabel::robust: return {0.00, 0.05, 0.00, 0.05};
        case TernaryLabel::fragile: return {0.40, 0.60, 0.60, 0.70};
        default: return {0.85, 0.95, 0.90, 0.95};
    }
}

Matrix random_jacobian(Rng& rng, std::size_t contacts, std::size_t joints) {
    Matrix j(3 * contacts, joints);
    for (std::size_t r = 0; r < j.rows(); ++r)
        for (std::size_t c = 0; c < j.cols(); ++c) j(r, c) = 0.1 * rng.normal();
    return j;
}

}  // namespace

SynthResult generate(const SynthOptions& opt) {
    SynthResult out;
    auto obj = make_object();
    out.objects.emplace(obj->name, obj);
    out.dataset.source = "synth";
    if (opt.count == 0) return out;

    Rng rng(opt.seed);
    const double noise = opt.spec.noise;
    const bool ideal = opt.spec.preset == SynthPreset::ideal;

    std::size_t made = 0;
    std::size_t cluster_no = 0;
    while (made < opt.count) {
        // First three clusters cover all classes so tiny datasets stay
        // three-class; afterwards 40/35/25.
        TernaryLabel cls;
        if (cluster_no < 3) {
            cls = static_cast<TernaryLabel>(cluster_no);
        } else {
            const double r = rng.uniform01();
            cls = r < 0.40 ? TernaryLabel::robust
                           : (r < 0.75 ? TernaryLabel::fragile : TernaryLabel::futile);
        }
        std::size_t size = 1 + rng.below(3);
        if (ideal) {
            cls = TernaryLabel::robust;
            size = 1;
        }
        size = std::min(size, opt.count - made);
        const ClassBands band = bands_for(cls);

        char cid[20];
        std::snprintf(cid, sizeof(cid), "c%04zu", cluster_no);
        const char* robot = cluster_no % 2 == 0 ? "apollo" : "tombatossals";

        for (std::size_t member = 0; member < size; ++member, ++made) {
            GraspRecord rec;
            char gid[20];
            std::snprintf(gid, sizeof(gid), "g%04zu", made);
            rec.grasp_id = gid;
            rec.cluster_id = cid;
            rec.robot = robot;
            rec.object = obj->name;

            Vec3 axis{0.0, 0.0, 1.0};
            double offset = 0.0;
            double rotation = 0.0;
            double jitter = 0.0;
            double circum = 0.5 * kRadius;
            if (!ideal) {
                axis = random_unit(rng);
                offset = rng.uniform(band.offset_lo, band.offset_hi);
                offset = std::clamp(offset + rng.uniform(-0.25 * noise, 0.25 * noise), 0.0, 0.97);
                rotation = rng.uniform(0.0, 2.0 * M_PI);
                jitter = 5.0 * M_PI / 180.0;
                circum *= 1.0 + rng.uniform(-0.1, 0.1);
            }
            Vec3 u, v;
            plane_basis(axis, u, v);
            const Vec3 center = axis * (offset * kRadius);
            std::vector<Contact> contacts;
            for (int k = 0; k < 3; ++k) {
                double a = rotation + k * 2.0 * M_PI / 3.0;
                if (!ideal) a += rng.uniform(-jitter, jitter);
                Contact c;
                c.position = center + (u * std::cos(a) + v * std::sin(a)) * circum;
                c.normal = (obj->center_of_mass - c.position).normalized();
                c.friction_mu = ideal ? 0.8 : 0.5 + rng.uniform(-0.2, 0.3);
                contacts.push_back(c);
            }
            rec.contacts = std::move(contacts);

            const std::size_t joints = 3;
            std::vector<double> y(joints, 0.5);
            if (!ideal) {
                double dev = rng.uniform(band.dev_lo, band.dev_hi);
                dev = std::clamp(dev + rng.uniform(-0.25 * noise, 0.25 * noise), 0.0, 0.98);
                for (std::size_t q = 0; q < joints; ++q) {
                    const double dq = std::clamp(dev + rng.uniform(-0.02, 0.02), 0.0, 0.98);
                    const double sign = rng.uniform01() < 0.5 ? -1.0 : 1.0;
                    y[q] = 0.5 + sign * dq * 0.5;
                }
            }
            rec.posture = make_posture(y, std::vector<double>(joints, 0.0),
                                       std::vector<double>(joints, 1.0));
            rec.jacobian = random_jacobian(rng, 3, joints);

            // Executions encode the ground truth; fragile clusters mix
            // outcomes across members (or within a singleton member).
            std::vector<Outcome> outcomes;
            if (cls == TernaryLabel::robust)
                outcomes = {Outcome::stable, Outcome::stable};
            else if (cls == TernaryLabel::futile)
                outcomes = {Outcome::unstable, Outcome::unstable};
            else if (size == 1)
                outcomes = {Outcome::stable, Outcome::unstable};
            else if (member % 2 == 0)
                outcomes = {Outcome::stable, Outcome::stable};
            else
                outcomes = {Outcome::unstable, Outcome::unstable};
            if (ideal) outcomes = {Outcome::stable};

            for (std::size_t e = 0; e < outcomes.size(); ++e) {
                ExecutionOutcome exec;
                exec.outcome = outcomes[e];
                if (noise > 0.0 && rng.uniform01() < noise)
                    exec.outcome =
                        exec.outcome == Outcome::stable ? Outcome::unstable : Outcome::stable;
                exec.context["object_variant"] = e % 2 == 0 ? "light" : "heavy";
                exec.context["gravity_orientation"] = "g" + std::to_string((made + e) % 4);
                rec.executions.push_back(std::move(exec));
            }
            out.dataset.records.push_back(std::move(rec));
        }
        ++cluster_no;
    }
    return out;
}

}  // namespace graspq
