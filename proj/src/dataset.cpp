#include "graspq/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "graspq/error.hpp"
#include "graspq/rng.hpp"

namespace graspq {

using nlohmann::ordered_json;

const char* to_string(Outcome o) { return o == Outcome::stable ? "stable" : "unstable"; }

const char* to_string(BinaryLabel l) {
    return l == BinaryLabel::stable ? "stable" : "unstable";
}

const char* to_string(TernaryLabel l) {
    switch (l) {
        case TernaryLabel::robust: return "robust";
        case TernaryLabel::fragile: return "fragile";
        default: return "futile";
    }
}

bool GraspRecord::operator==(const GraspRecord& o) const = default;

namespace {

ordered_json vec3_to_json(const Vec3& v) { return ordered_json::array({v.x, v.y, v.z}); }

Vec3 vec3_from_json(const ordered_json& j, const std::string& what) {
    if (!j.is_array() || j.size() != 3 || !j[0].is_number() || !j[1].is_number() ||
        !j[2].is_number())
        throw ParseError(what + " must be an array of 3 numbers");
    Vec3 v{j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
    if (!v.finite()) throw ParseError(what + " has a non-finite component");
    return v;
}

std::vector<double> doubles_from_json(const ordered_json& j, const std::string& what) {
    if (!j.is_array()) throw ParseError(what + " must be an array of numbers");
    std::vector<double> out;
    out.reserve(j.size());
    for (const auto& v : j) {
        if (!v.is_number()) throw ParseError(what + " must contain only numbers");
        const double d = v.get<double>();
        if (!std::isfinite(d)) throw ParseError(what + " has a non-finite value");
        out.push_back(d);
    }
    return out;
}

std::string string_field(const ordered_json& j, const char* key) {
    if (!j.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
    if (!j.at(key).is_string())
        throw ParseError(std::string("field '") + key + "' must be a string");
    return j.at(key).get<std::string>();
}

void check_keys(const ordered_json& j, const std::set<std::string>& allowed,
                const std::string& what) {
    for (const auto& item : j.items())
        if (!allowed.count(item.key()))
            throw ParseError("unknown field '" + item.key() + "' in " + what);
}

}  // namespace

ordered_json record_to_json(const GraspRecord& r) {
    ordered_json j = ordered_json::object();
    j["grasp_id"] = r.grasp_id;
    j["cluster_id"] = r.cluster_id;
    j["robot"] = r.robot;
    j["object"] = r.object;
    if (r.contacts) {
        ordered_json arr = ordered_json::array();
        for (const Contact& c : *r.contacts) {
            ordered_json jc = ordered_json::object();
            jc["position"] = vec3_to_json(c.position);
            jc["normal"] = vec3_to_json(c.normal);
            jc["mu"] = c.friction_mu;
            arr.push_back(std::move(jc));
        }
        j["contacts"] = std::move(arr);
    }
    if (r.jacobian) {
        ordered_json rows = ordered_json::array();
        for (std::size_t i = 0; i < r.jacobian->rows(); ++i) {
            ordered_json row = ordered_json::array();
            for (std::size_t k = 0; k < r.jacobian->cols(); ++k) row.push_back((*r.jacobian)(i, k));
            rows.push_back(std::move(row));
        }
        j["jacobian"] = std::move(rows);
    }
    if (r.posture) {
        ordered_json jp = ordered_json::object();
        jp["y"] = r.posture->y;
        jp["y_min"] = r.posture->y_min;
        jp["y_max"] = r.posture->y_max;
        jp["a"] = r.posture->mid;
        j["posture"] = std::move(jp);
    }
    if (r.quality) {
        ordered_json q = ordered_json::object();
        for (int m = 0; m < kMetricCount; ++m)
            if ((*r.quality)[m]) q[kMetricNames[m]] = *(*r.quality)[m];
        j["quality"] = std::move(q);
    }
    ordered_json ex = ordered_json::array();
    for (const ExecutionOutcome& e : r.executions) {
        ordered_json je = ordered_json::object();
        je["outcome"] = to_string(e.outcome);
        je["context"] = e.context;
        ex.push_back(std::move(je));
    }
    j["executions"] = std::move(ex);
    if (r.binary_label) j["binary_label"] = to_string(*r.binary_label);
    if (r.ternary_label) j["ternary_label"] = to_string(*r.ternary_label);
    return j;
}

GraspRecord record_from_json(const ordered_json& j) {
    if (!j.is_object()) throw ParseError("record must be a JSON object");
    check_keys(j,
               {"grasp_id", "cluster_id", "robot", "object", "contacts", "jacobian", "posture",
                "quality", "executions", "binary_label", "ternary_label"},
               "record");
    GraspRecord r;
    r.grasp_id = string_field(j, "grasp_id");
    if (r.grasp_id.empty()) throw ParseError("grasp_id must be non-empty");
    r.cluster_id = string_field(j, "cluster_id");
    if (r.cluster_id.empty()) throw ParseError("cluster_id must be non-empty");
    r.robot = string_field(j, "robot");
    r.object = string_field(j, "object");

    if (j.contains("contacts")) {
        const auto& arr = j.at("contacts");
        if (!arr.is_array() || arr.empty())
            throw ParseError("contacts must be a non-empty array");
        std::vector<Contact> contacts;
        contacts.reserve(arr.size());
        for (const auto& jc : arr) {
            if (!jc.is_object()) throw ParseError("contact must be an object");
            check_keys(jc, {"position", "normal", "mu"}, "contact");
            Contact c;
            if (!jc.contains("position") || !jc.contains("normal") || !jc.contains("mu"))
                throw ParseError("contact needs position, normal and mu");
            c.position = vec3_from_json(jc.at("position"), "contact position");
            c.normal = vec3_from_json(jc.at("normal"), "contact normal");
            if (!jc.at("mu").is_number()) throw ParseError("contact mu must be a number");
            c.friction_mu = jc.at("mu").get<double>();
            if (!std::isfinite(c.friction_mu) || c.friction_mu < 0.0)
                throw ParseError("contact mu must be finite and >= 0");
            contacts.push_back(c);
        }
        r.contacts = std::move(contacts);
    }

    if (j.contains("jacobian")) {
        const auto& rows = j.at("jacobian");
        if (!rows.is_array() || rows.empty())
            throw ParseError("jacobian must be a non-empty array of rows");
        std::vector<std::vector<double>> vals;
        vals.reserve(rows.size());
        for (const auto& row : rows) {
            vals.push_back(doubles_from_json(row, "jacobian row"));
            if (vals.back().empty() || vals.back().size() != vals.front().size())
                throw ParseError("jacobian rows must be non-empty and rectangular");
        }
        Matrix m(vals.size(), vals.front().size());
        for (std::size_t i = 0; i < vals.size(); ++i)
            for (std::size_t k = 0; k < vals[i].size(); ++k) m(i, k) = vals[i][k];
        r.jacobian = std::move(m);
    }

    if (j.contains("posture")) {
        const auto& jp = j.at("posture");
        if (!jp.is_object()) throw ParseError("posture must be an object");
        check_keys(jp, {"y", "y_min", "y_max", "a"}, "posture");
        if (!jp.contains("y") || !jp.contains("y_min") || !jp.contains("y_max"))
            throw ParseError("posture needs y, y_min and y_max");
        std::optional<std::vector<double>> mid;
        if (jp.contains("a")) mid = doubles_from_json(jp.at("a"), "posture a");
        r.posture = make_posture(doubles_from_json(jp.at("y"), "posture y"),
                                 doubles_from_json(jp.at("y_min"), "posture y_min"),
                                 doubles_from_json(jp.at("y_max"), "posture y_max"), mid);
    }

    if (j.contains("quality")) {
        const auto& q = j.at("quality");
        if (!q.is_object()) throw ParseError("quality must be an object");
        std::array<std::optional<double>, kMetricCount> vals;
        for (const auto& item : q.items()) {
            const int m = metric_index(item.key());
            if (m < 0) throw ParseError("unknown metric in quality: " + item.key());
            if (!item.value().is_number())
                throw ParseError("quality " + item.key() + " must be a number");
            const double v = item.value().get<double>();
            if (!std::isfinite(v)) throw ParseError("quality " + item.key() + " is non-finite");
            vals[m] = v;
        }
        r.quality = vals;
    }

    const bool has_geometry = r.contacts && r.posture;
    if (!has_geometry && !r.quality)
        throw ParseError("record needs contacts+posture or a precomputed quality vector");
    if (r.contacts.has_value() != r.posture.has_value())
        throw ParseError("contacts and posture must be given together");
    if (r.jacobian && !r.contacts) throw ParseError("jacobian given without contacts");

    if (j.contains("executions")) {
        const auto& ex = j.at("executions");
        if (!ex.is_array()) throw ParseError("executions must be an array");
        for (const auto& je : ex) {
            if (!je.is_object()) throw ParseError("execution must be an object");
            check_keys(je, {"outcome", "context"}, "execution");
            ExecutionOutcome e;
            const std::string out = string_field(je, "outcome");
            if (out == "stable")
                e.outcome = Outcome::stable;
            else if (out == "unstable")
                e.outcome = Outcome::unstable;
            else
                throw ParseError("execution outcome must be \"stable\" or \"unstable\"");
            if (je.contains("context")) {
                if (!je.at("context").is_object())
                    throw ParseError("execution context must be an object");
                e.context = je.at("context");
            }
            r.executions.push_back(std::move(e));
        }
    }

    if (j.contains("binary_label")) {
        const std::string s = string_field(j, "binary_label");
        if (s == "stable")
            r.binary_label = BinaryLabel::stable;
        else if (s == "unstable")
            r.binary_label = BinaryLabel::unstable;
        else
            throw ParseError("binary_label must be \"stable\" or \"unstable\"");
    }
    if (j.contains("ternary_label")) {
        const std::string s = string_field(j, "ternary_label");
        if (s == "robust")
            r.ternary_label = TernaryLabel::robust;
        else if (s == "fragile")
            r.ternary_label = TernaryLabel::fragile;
        else if (s == "futile")
            r.ternary_label = TernaryLabel::futile;
        else
            throw ParseError("ternary_label must be \"robust\", \"fragile\" or \"futile\"");
    }
    return r;
}

Dataset load_dataset(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(0, "cannot open dataset file: " + path.string());
    Dataset ds;
    ds.source = path.string();
    std::set<std::string> seen;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        GraspRecord rec;
        try {
            rec = record_from_json(ordered_json::parse(line));
        } catch (const Error& e) {
            throw ParseError(lineno, e.what());
        } catch (const std::exception& e) {
            throw ParseError(lineno, std::string("invalid JSON: ") + e.what());
        }
        if (!seen.insert(rec.grasp_id).second)
            throw DuplicateId("duplicate grasp_id '" + rec.grasp_id + "' at line " +
                              std::to_string(lineno));
        ds.records.push_back(std::move(rec));
    }
    return ds;
}

void save_dataset(const Dataset& ds, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write dataset file: " + path.string());
    for (const GraspRecord& r : ds.records) out << record_to_json(r).dump() << '\n';
}

ObjectMap load_objects(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(0, "cannot open objects file: " + path.string());
    ordered_json j;
    try {
        j = ordered_json::parse(in);
    } catch (const std::exception& e) {
        throw ParseError(std::string("objects file: invalid JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("objects") || !j.at("objects").is_array())
        throw ParseError("objects file must be {\"objects\": [...]}");
    ObjectMap out;
    for (const auto& jo : j.at("objects")) {
        if (!jo.is_object()) throw ParseError("object entry must be an object");
        check_keys(jo,
                   {"name", "center_of_mass", "mass", "surface_points", "distance_max",
                    "area_max", "volume_max", "theta_max"},
                   "object entry");
        auto obj = std::make_shared<ObjectModel>();
        obj->name = string_field(jo, "name");
        if (obj->name.empty()) throw ParseError("object name must be non-empty");
        if (!jo.contains("center_of_mass"))
            throw ParseError("object '" + obj->name + "' needs center_of_mass");
        obj->center_of_mass = vec3_from_json(jo.at("center_of_mass"), "center_of_mass");
        if (jo.contains("surface_points")) {
            for (const auto& jp : jo.at("surface_points"))
                obj->surface_points.push_back(vec3_from_json(jp, "surface point"));
        }
        auto opt_positive = [&](const char* key) -> std::optional<double> {
            if (!jo.contains(key)) return std::nullopt;
            if (!jo.at(key).is_number())
                throw ParseError("object '" + obj->name + "': " + key + " must be a number");
            const double v = jo.at(key).get<double>();
            if (!std::isfinite(v) || v <= 0.0)
                throw ParseError("object '" + obj->name + "': " + key + " must be > 0");
            return v;
        };
        obj->mass = opt_positive("mass");
        obj->norm_constants.distance_max = opt_positive("distance_max");
        obj->norm_constants.area_max = opt_positive("area_max");
        obj->norm_constants.volume_max = opt_positive("volume_max");
        obj->norm_constants.theta_max = opt_positive("theta_max");
        if (!out.emplace(obj->name, std::move(obj)).second)
            throw DuplicateId("duplicate object name '" + jo.at("name").get<std::string>() + "'");
    }
    return out;
}

void save_objects(const ObjectMap& objects, const std::filesystem::path& path) {
    ordered_json arr = ordered_json::array();
    for (const auto& [name, obj] : objects) {
        ordered_json jo = ordered_json::object();
        jo["name"] = name;
        jo["center_of_mass"] = vec3_to_json(obj->center_of_mass);
        if (obj->mass) jo["mass"] = *obj->mass;
        ordered_json pts = ordered_json::array();
        for (const Vec3& p : obj->surface_points) pts.push_back(vec3_to_json(p));
        jo["surface_points"] = std::move(pts);
        if (obj->norm_constants.distance_max) jo["distance_max"] = *obj->norm_constants.distance_max;
        if (obj->norm_constants.area_max) jo["area_max"] = *obj->norm_constants.area_max;
        if (obj->norm_constants.volume_max) jo["volume_max"] = *obj->norm_constants.volume_max;
        if (obj->norm_constants.theta_max) jo["theta_max"] = *obj->norm_constants.theta_max;
        arr.push_back(std::move(jo));
    }
    ordered_json j = ordered_json::object();
    j["objects"] = std::move(arr);
    std::ofstream out(path);
    if (!out) throw Error("cannot write objects file: " + path.string());
    out << j.dump(2) << '\n';
}

GraspInstance make_instance(const GraspRecord& r, const ObjectMap& objects) {
    if (!r.contacts || !r.posture)
        throw InvalidInput("record '" + r.grasp_id + "' has no geometric payload");
    auto it = objects.find(r.object);
    if (it == objects.end())
        throw InvalidInput("record '" + r.grasp_id + "': unknown object '" + r.object + "'");
    GraspInstance g;
    g.grasp_id = r.grasp_id;
    g.contacts = *r.contacts;
    g.posture = *r.posture;
    g.hand_jacobian = r.jacobian;
    g.object = it->second;
    return g;
}

BinaryLabel binary_label(const GraspRecord& r) {
    if (r.executions.empty())
        throw InvalidInput("record '" + r.grasp_id + "' has no executions");
    std::size_t stable = 0;
    for (const ExecutionOutcome& e : r.executions)
        if (e.outcome == Outcome::stable) ++stable;
    // Tie goes to unstable: conservative for downstream grasp selection.
    return 2 * stable > r.executions.size() ? BinaryLabel::stable : BinaryLabel::unstable;
}

TernaryLabel ternary_label(const std::vector<const GraspRecord*>& cluster) {
    if (cluster.empty()) throw InvalidInput("empty cluster");
    std::size_t total = 0;
    std::size_t stable = 0;
    for (const GraspRecord* r : cluster) {
        if (r->executions.empty())
            throw InvalidInput("record '" + r->grasp_id + "' has no executions");
        for (const ExecutionOutcome& e : r->executions) {
            ++total;
            if (e.outcome == Outcome::stable) ++stable;
        }
    }
    if (stable == total) return TernaryLabel::robust;
    if (stable == 0) return TernaryLabel::futile;
    return TernaryLabel::fragile;
}

std::vector<std::string> apply_labels(Dataset& ds) {
    std::vector<std::string> excluded;
    std::vector<GraspRecord> kept;
    kept.reserve(ds.records.size());
    for (GraspRecord& r : ds.records) {
        if (r.executions.empty())
            excluded.push_back(r.grasp_id);
        else
            kept.push_back(std::move(r));
    }
    ds.records = std::move(kept);

    std::vector<std::string> order;          // cluster ids by first appearance
    std::map<std::string, std::vector<std::size_t>> clusters;
    for (std::size_t i = 0; i < ds.records.size(); ++i) {
        auto [it, fresh] = clusters.try_emplace(ds.records[i].cluster_id);
        if (fresh) order.push_back(ds.records[i].cluster_id);
        it->second.push_back(i);
    }
    for (const std::string& cid : order) {
        std::vector<const GraspRecord*> members;
        for (std::size_t i : clusters[cid]) members.push_back(&ds.records[i]);
        const TernaryLabel t = ternary_label(members);
        for (std::size_t i : clusters[cid]) {
            ds.records[i].ternary_label = t;
            ds.records[i].binary_label = binary_label(ds.records[i]);
        }
    }
    return excluded;
}

const char* to_string(LabelScheme s) { return s == LabelScheme::binary ? "binary" : "ternary"; }

int class_count(LabelScheme scheme) { return scheme == LabelScheme::binary ? 2 : 3; }

std::string class_name(LabelScheme scheme, int code) {
    if (scheme == LabelScheme::binary)
        return to_string(static_cast<BinaryLabel>(code));
    return to_string(static_cast<TernaryLabel>(code));
}

int class_code(const GraspRecord& r, LabelScheme scheme) {
    if (scheme == LabelScheme::binary) {
        if (!r.binary_label)
            throw InvalidInput("record '" + r.grasp_id + "' has no binary label");
        return static_cast<int>(*r.binary_label);
    }
    if (!r.ternary_label)
        throw InvalidInput("record '" + r.grasp_id + "' has no ternary label");
    return static_cast<int>(*r.ternary_label);
}

namespace {

// Largest-remainder apportionment of `target` across group sizes, then each
// group's share clamped to [1, size-1] so both sides keep every class.
std::vector<std::size_t> apportion(const std::vector<std::size_t>& sizes, double fraction,
                                   std::size_t target) {
    const std::size_t g = sizes.size();
    std::vector<std::size_t> quota(g);
    std::vector<std::pair<double, std::size_t>> rem;  // (-remainder, group) for sorting
    std::size_t assigned = 0;
    for (std::size_t i = 0; i < g; ++i) {
        const double share = static_cast<double>(sizes[i]) * fraction;
        quota[i] = static_cast<std::size_t>(std::floor(share));
        rem.emplace_back(-(share - std::floor(share)), i);
        assigned += quota[i];
    }
    std::sort(rem.begin(), rem.end());
    for (std::size_t k = 0; assigned < target && k < rem.size(); ++k, ++assigned)
        ++quota[rem[k].second];
    for (std::size_t i = 0; i < g; ++i)
        quota[i] = std::min(std::max<std::size_t>(quota[i], 1), sizes[i] - 1);
    return quota;
}

Dataset subset(const Dataset& ds, std::vector<std::size_t> idx) {
    std::sort(idx.begin(), idx.end());
    Dataset out;
    out.feature_order = ds.feature_order;
    out.source = ds.source;
    out.records.reserve(idx.size());
    for (std::size_t i : idx) out.records.push_back(ds.records[i]);
    return out;
}

}  // namespace

std::pair<Dataset, Dataset> split(const Dataset& ds, const SplitOptions& opt) {
    if (!(opt.test_fraction > 0.0 && opt.test_fraction < 1.0))
        throw InvalidInput("test_fraction must be strictly between 0 and 1");
    const std::size_t n = ds.records.size();
    if (n < 2) throw InvalidInput("need at least 2 records to split");
    const std::size_t target = std::min<std::size_t>(
        std::max<std::size_t>(
            static_cast<std::size_t>(std::llround(static_cast<double>(n) * opt.test_fraction)), 1),
        n - 1);
    Rng rng(opt.seed);
    std::vector<std::size_t> test_idx;

    if (opt.mode == SplitMode::record) {
        if (!opt.stratified) {
            std::vector<std::size_t> idx(n);
            for (std::size_t i = 0; i < n; ++i) idx[i] = i;
            rng.shuffle(idx);
            test_idx.assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(target));
        } else {
            const int nc = class_count(opt.scheme);
            std::vector<std::vector<std::size_t>> by_class(nc);
            for (std::size_t i = 0; i < n; ++i)
                by_class[static_cast<std::size_t>(class_code(ds.records[i], opt.scheme))]
                    .push_back(i);
            std::vector<std::size_t> sizes;
            std::vector<int> present;
            for (int c = 0; c < nc; ++c) {
                if (by_class[c].empty()) continue;
                if (by_class[c].size() < 2)
                    throw StratificationError("class '" + class_name(opt.scheme, c) +
                                              "' has fewer than 2 records");
                sizes.push_back(by_class[c].size());
                present.push_back(c);
            }
            const auto quota = apportion(sizes, opt.test_fraction, target);
            for (std::size_t k = 0; k < present.size(); ++k) {
                auto& idx = by_class[static_cast<std::size_t>(present[k])];
                rng.shuffle(idx);
                test_idx.insert(test_idx.end(), idx.begin(),
                                idx.begin() + static_cast<std::ptrdiff_t>(quota[k]));
            }
        }
    } else {
        std::vector<std::string> order;
        std::map<std::string, std::vector<std::size_t>> members;
        for (std::size_t i = 0; i < n; ++i) {
            auto [it, fresh] = members.try_emplace(ds.records[i].cluster_id);
            if (fresh) order.push_back(ds.records[i].cluster_id);
            it->second.push_back(i);
        }
        if (order.size() < 2) throw InvalidInput("cannot split a dataset with a single cluster");
        if (!opt.stratified) {
            rng.shuffle(order);
            std::size_t got = 0;
            std::size_t used = 0;
            for (const std::string& cid : order) {
                if (got >= target || used + 1 > order.size() - 1) break;
                const auto& idx = members[cid];
                test_idx.insert(test_idx.end(), idx.begin(), idx.end());
                got += idx.size();
                ++used;
            }
        } else {
            // Clusters are atomic, so stratify over whole clusters: each
            // cluster gets the class of its records (majority when mixed)
            // and test quotas apportion cluster counts, not record counts.
            const int nc = class_count(opt.scheme);
            std::vector<std::vector<std::string>> by_class(nc);
            for (const std::string& cid : order) {
                std::vector<std::size_t> counts(nc, 0);
                for (std::size_t i : members[cid])
                    ++counts[static_cast<std::size_t>(class_code(ds.records[i], opt.scheme))];
                int best = 0;
                for (int c = 1; c < nc; ++c)
                    if (counts[c] > counts[best]) best = c;
                by_class[best].push_back(cid);
            }
            std::vector<std::size_t> sizes;
            std::vector<int> present;
            for (int c = 0; c < nc; ++c) {
                if (by_class[c].empty()) continue;
                if (by_class[c].size() < 2)
                    throw StratificationError("class '" + class_name(opt.scheme, c) +
                                              "' has fewer than 2 clusters");
                sizes.push_back(by_class[c].size());
                present.push_back(c);
            }
            std::size_t total_clusters = 0;
            for (std::size_t s : sizes) total_clusters += s;
            const std::size_t cluster_target = std::min<std::size_t>(
                std::max<std::size_t>(
                    static_cast<std::size_t>(std::llround(static_cast<double>(total_clusters) *
                                                          opt.test_fraction)),
                    1),
                total_clusters - 1);
            const auto quota = apportion(sizes, opt.test_fraction, cluster_target);
            for (std::size_t k = 0; k < present.size(); ++k) {
                auto& cids = by_class[static_cast<std::size_t>(present[k])];
                rng.shuffle(cids);
                for (std::size_t q = 0; q < quota[k]; ++q) {
                    const auto& idx = members[cids[q]];
                    test_idx.insert(test_idx.end(), idx.begin(), idx.end());
                }
            }
        }
    }

    std::vector<char> in_test(n, 0);
    for (std::size_t i : test_idx) in_test[i] = 1;
    std::vector<std::size_t> train_idx;
    for (std::size_t i = 0; i < n; ++i)
        if (!in_test[i]) train_idx.push_back(i);
    return {subset(ds, std::move(train_idx)), subset(ds, std::move(test_idx))};
}

FeatureMatrix feature_matrix(const Dataset& ds, const std::vector<std::string>& selected,
                             LabelScheme scheme) {
    if (selected.empty()) throw InvalidInput("no metrics selected");
    std::set<std::string> seen;
    for (const std::string& name : selected) {
        if (metric_index(name) < 0) throw InvalidInput("unknown metric: " + name);
        if (!seen.insert(name).second) throw InvalidInput("metric selected twice: " + name);
    }
    if (ds.records.empty()) throw InvalidInput("empty dataset");
    FeatureMatrix fm{Matrix(ds.records.size(), selected.size()), {}, selected};
    fm.labels.reserve(ds.records.size());
    for (std::size_t i = 0; i < ds.records.size(); ++i) {
        const GraspRecord& r = ds.records[i];
        for (std::size_t c = 0; c < selected.size(); ++c) {
            const int m = metric_index(selected[c]);
            if (!r.quality || !(*r.quality)[m]) throw MissingFeature(r.grasp_id, selected[c]);
            fm.x(i, c) = *(*r.quality)[m];
        }
        fm.labels.push_back(class_code(r, scheme));
    }
    return fm;
}

}  // namespace graspq
