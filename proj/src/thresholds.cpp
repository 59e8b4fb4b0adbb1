#include "graspq/thresholds.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "graspq/error.hpp"
#include "graspq/metrics.hpp"

namespace graspq {

namespace {

std::string strip(const std::string& s) {
  size_t b = 0;
  size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

}  // namespace

ThresholdMap load_thresholds(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open thresholds file: " + path.string());
  ThresholdMap out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = strip(line);
    if (line.empty()) continue;
    std::istringstream iss(line);
    std::string name;
    double lo = 0.0;
    double hi = 0.0;
    if (!(iss >> name >> lo >> hi)) {
      throw ParseError(lineno, "expected `metric_name lo hi`, got: " + line);
    }
    std::string extra;
    if (iss >> extra) throw ParseError(lineno, "trailing content: " + extra);
    if (metric_index(name) < 0) throw ParseError(lineno, "unknown metric: " + name);
    if (!std::isfinite(lo) || !std::isfinite(hi)) {
      throw ParseError(lineno, "non-finite threshold for " + name);
    }
    if (hi <= lo) throw ParseError(lineno, "need lo < hi for " + name);
    if (out.count(name)) throw ParseError(lineno, "duplicate metric: " + name);
    out[name] = {lo, hi};
  }
  return out;
}

void save_thresholds(const ThresholdMap& thresholds, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write thresholds file: " + path.string());
  out << "# metric_name lo hi\n";
  for (const auto& [name, range] : thresholds) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%s %.17g %.17g\n", name.c_str(), range.first,
                  range.second);
    out << buf;
  }
}

}  // namespace graspq
