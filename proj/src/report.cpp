#include "graspq/report.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "graspq/error.hpp"

namespace graspq {

using nlohmann::ordered_json;

std::string metric_display(const std::string& name) {
    // q_a1 -> $Q_{A1}$
    if (name.size() != 4 || name[0] != 'q' || name[1] != '_') return name;
    std::string out = "$Q_{";
    out += static_cast<char>(std::toupper(static_cast<unsigned char>(name[2])));
    out += name[3];
    out += "}$";
    return out;
}

std::string model_display(ModelKind kind) {
    return kind == ModelKind::knn ? "K-Nearest Neighbors" : "Classification Trees";
}

std::string regime_display(LabelScheme scheme) {
    return scheme == LabelScheme::binary ? "Binary Classification" : "3-categories scale";
}

std::string row_label_for(const std::vector<std::string>& metrics, ModelKind kind) {
    if (metrics.size() == 1) return metric_display(metrics.front());
    if (metrics.size() == static_cast<std::size_t>(kMetricCount)) return model_display(kind);
    std::string out;
    for (const std::string& m : metrics) {
        if (!out.empty()) out += "+";
        out += metric_display(m);
    }
    return out;
}

namespace {

double number_field(const ordered_json& j, const char* key, double lo, double hi) {
    if (!j.contains(key) || !j.at(key).is_number())
        throw SchemaError(std::string("report entry: '") + key + "' must be a number");
    const double v = j.at(key).get<double>();
    if (!std::isfinite(v) || v < lo || v > hi)
        throw SchemaError(std::string("report entry: '") + key + "' out of range");
    return v;
}

std::string str_field(const ordered_json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_string())
        throw SchemaError(std::string("report entry: '") + key + "' must be a string");
    return j.at(key).get<std::string>();
}

ordered_json entry_to_json(const ReportEntry& e) {
    ordered_json j = ordered_json::object();
    j["row_label"] = e.row_label;
    j["regime"] = e.regime;
    j["label_scheme"] = e.label_scheme;
    j["model"] = e.model;
    j["metrics"] = e.metrics;
    j["folds"] = e.folds;
    j["seed"] = e.seed;
    j["hyperparameters"] = e.hyperparameters;
    j["train_mean"] = e.train_mean;
    j["train_std"] = e.train_std;
    j["test_accuracy"] = e.test_accuracy;
    ordered_json conf = ordered_json::array();
    for (const auto& row : e.confusion) conf.push_back(row);
    j["confusion"] = std::move(conf);
    j["std_definition"] = e.std_definition;
    return j;
}

ReportEntry entry_from_json(const ordered_json& j) {
    if (!j.is_object()) throw SchemaError("report entry must be an object");
    ReportEntry e;
    e.row_label = str_field(j, "row_label");
    if (e.row_label.empty()) throw SchemaError("report entry: empty row_label");
    e.regime = str_field(j, "regime");
    if (e.regime.empty()) throw SchemaError("report entry: empty regime");
    e.label_scheme = str_field(j, "label_scheme");
    e.model = str_field(j, "model");
    if (!j.contains("metrics") || !j.at("metrics").is_array())
        throw SchemaError("report entry: 'metrics' must be an array");
    for (const auto& m : j.at("metrics")) {
        if (!m.is_string()) throw SchemaError("report entry: metric names must be strings");
        e.metrics.push_back(m.get<std::string>());
    }
    if (!j.contains("folds") || !j.at("folds").is_number_integer())
        throw SchemaError("report entry: 'folds' must be an integer");
    e.folds = j.at("folds").get<int>();
    if (e.folds < 0) throw SchemaError("report entry: negative folds");
    if (!j.contains("seed") || !j.at("seed").is_number_integer() ||
        (!j.at("seed").is_number_unsigned() && j.at("seed").get<long long>() < 0))
        throw SchemaError("report entry: 'seed' must be a non-negative integer");
    e.seed = j.at("seed").get<std::uint64_t>();
    e.hyperparameters = str_field(j, "hyperparameters");
    e.train_mean = number_field(j, "train_mean", 0.0, 1.0);
    e.train_std = number_field(j, "train_std", 0.0, 1.0);
    e.test_accuracy = number_field(j, "test_accuracy", 0.0, 1.0);
    if (j.contains("confusion")) {
        if (!j.at("confusion").is_array()) throw SchemaError("report entry: bad confusion matrix");
        for (const auto& jrow : j.at("confusion")) {
            if (!jrow.is_array()) throw SchemaError("report entry: bad confusion row");
            std::vector<std::size_t> row;
            for (const auto& v : jrow) {
                if (!v.is_number_integer() || v.get<long long>() < 0)
                    throw SchemaError("report entry: confusion cells must be counts");
                row.push_back(v.get<std::size_t>());
            }
            e.confusion.push_back(std::move(row));
        }
    }
    e.std_definition = str_field(j, "std_definition");
    return e;
}

}  // namespace

std::vector<ReportEntry> load_report(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open report file: " + path.string());
    ordered_json j;
    try {
        j = ordered_json::parse(in);
    } catch (const std::exception& e) {
        throw ParseError(std::string("report file: invalid JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("version") || !j.at("version").is_number_integer())
        throw SchemaError("report file has no integer version field");
    if (j.at("version").get<int>() != 1)
        throw SchemaError("report version " + j.at("version").dump() + " not supported");
    if (!j.contains("entries") || !j.at("entries").is_array())
        throw SchemaError("report file needs an entries array");
    std::vector<ReportEntry> out;
    for (const auto& je : j.at("entries")) out.push_back(entry_from_json(je));
    return out;
}

void save_report(const std::vector<ReportEntry>& entries, const std::filesystem::path& path) {
    ordered_json j = ordered_json::object();
    j["version"] = 1;
    ordered_json arr = ordered_json::array();
    for (const ReportEntry& e : entries) arr.push_back(entry_to_json(e));
    j["entries"] = std::move(arr);
    std::ofstream out(path);
    if (!out) throw Error("cannot write report file: " + path.string());
    out << j.dump(2) << '\n';
}

namespace {

std::string cell(double mean, double std_dev) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.2f $\\pm$ %.2f", mean, std_dev);
    return buf;
}

std::string fixed2(double v) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string& rtrim(std::string& s) {
    while (!s.empty() && s.back() == ' ') s.pop_back();
    return s;
}

}  // namespace

std::string render_table(const std::vector<ReportEntry>& entries) {
    if (entries.empty()) throw SchemaError("no report entries");
    std::vector<std::string> rows;
    std::vector<std::string> groups;
    std::map<std::pair<std::string, std::string>, const ReportEntry*> cells;
    for (const ReportEntry& e : entries) {
        if (std::find(rows.begin(), rows.end(), e.row_label) == rows.end())
            rows.push_back(e.row_label);
        if (std::find(groups.begin(), groups.end(), e.regime) == groups.end())
            groups.push_back(e.regime);
        if (!cells.emplace(std::make_pair(e.row_label, e.regime), &e).second)
            throw SchemaError("duplicate table cell: " + e.row_label + " / " + e.regime);
    }

    std::size_t width = 0;
    for (const std::string& r : rows) width = std::max(width, r.size());
    const std::string head = "Train $\\pm$ Std";  // same width as its data cells
    const std::size_t group_width = head.size() + 3 + 4;

    std::ostringstream out;
    out << "# Train/Std: " << kStdDefinition << ".\n";
    std::string line(width, ' ');
    for (const std::string& g : groups) {
        std::string padded = g;
        padded.resize(group_width, ' ');
        line += " & " + padded;
    }
    out << rtrim(line) << '\n';
    line.assign(width, ' ');
    for (std::size_t i = 0; i < groups.size(); ++i) line += " & " + head + " & Test";
    out << rtrim(line) << '\n';

    for (const std::string& r : rows) {
        line = r;
        line.resize(width, ' ');
        for (const std::string& g : groups) {
            auto it = cells.find({r, g});
            if (it == cells.end()) {
                line += " & " + std::string(head.size(), ' ') + " & " + std::string(4, ' ');
            } else {
                line += " & " + cell(it->second->train_mean, it->second->train_std) + " & " +
                        fixed2(it->second->test_accuracy);
            }
        }
        out << rtrim(line) << '\n';
    }
    return out.str();
}

std::string render_csv(const std::vector<ReportEntry>& entries) {
    if (entries.empty()) throw SchemaError("no report entries");
    std::ostringstream out;
    out << "row_label,regime,label_scheme,model,metrics,folds,seed,hyperparameters,"
           "train_mean,train_std,test_accuracy\n";
    for (const ReportEntry& e : entries) {
        std::string metrics;
        for (const std::string& m : e.metrics) {
            if (!metrics.empty()) metrics += ';';
            metrics += m;
        }
        char nums[128];
        std::snprintf(nums, sizeof(nums), "%.17g,%.17g,%.17g", e.train_mean, e.train_std,
                      e.test_accuracy);
        auto check = [](const std::string& field) {
            if (field.find(',') != std::string::npos || field.find('\n') != std::string::npos)
                throw SchemaError("CSV fields must not contain commas or newlines: " + field);
        };
        for (const std::string& field :
             {e.row_label, e.regime, e.label_scheme, e.model, metrics, e.hyperparameters})
            check(field);
        out << e.row_label << ',' << e.regime << ',' << e.label_scheme << ',' << e.model << ','
            << metrics << ',' << e.folds << ',' << e.seed << ',' << e.hyperparameters << ','
            << nums << '\n';
    }
    return out.str();
}

}  // namespace graspq
