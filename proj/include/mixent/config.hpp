#pragma once

// Flat key/value experiment configuration:
//
//   # comment
//   distributions = ["t(3)", "gaussian"]
//   sizes = [100, 200]
//   n_reps = 200
//
// Values are scalars or bracketed arrays; strings may be quoted. Arrays must
// fit on one line.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <istream>
#include <type_traits>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "mixent/errors.hpp"
#include "mixent/resample.hpp"
#include "mixent/simharness.hpp"

namespace mixent {

class KeyValueConfig {
 public:
  static KeyValueConfig parse(std::istream& in) {
    KeyValueConfig cfg;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      const std::string content = trim(strip_comment(line));
      if (content.empty()) continue;
      const auto eq = content.find('=');
      if (eq == std::string::npos)
        throw DomainError("config line " + std::to_string(line_no) + ": expected 'key = value'");
      const std::string key = trim(content.substr(0, eq));
      const std::string raw = trim(content.substr(eq + 1));
      if (key.empty()) throw DomainError("config line " + std::to_string(line_no) + ": empty key");
      if (cfg.values_.count(key)) throw DomainError("config key '" + key + "' given twice");
      Entry e;
      e.line = line_no;
      if (!raw.empty() && raw.front() == '[') {
        if (raw.back() != ']') throw DomainError("config key '" + key + "': unterminated array");
        e.is_array = true;
        e.items = split_items(raw.substr(1, raw.size() - 2), key);
      } else {
        e.items = {unquote(raw, key)};
      }
      cfg.values_[key] = std::move(e);
    }
    return cfg;
  }

  bool has(const std::string& key) const { return values_.count(key) > 0; }

  std::vector<std::string> keys() const {
    std::vector<std::string> out;
    for (const auto& [k, v] : values_) out.push_back(k);
    return out;
  }

  std::string get_string(const std::string& key) const { return scalar(key); }

  double get_double(const std::string& key) const { return to_double(scalar(key), key); }

  std::int64_t get_int(const std::string& key) const { return to_int(scalar(key), key); }

  std::vector<std::string> get_strings(const std::string& key) const { return entry(key).items; }

  std::vector<double> get_doubles(const std::string& key) const {
    std::vector<double> out;
    for (const auto& s : entry(key).items) out.push_back(to_double(s, key));
    return out;
  }

  std::vector<std::int64_t> get_ints(const std::string& key) const {
    std::vector<std::int64_t> out;
    for (const auto& s : entry(key).items) out.push_back(to_int(s, key));
    return out;
  }

 private:
  struct Entry {
    bool is_array = false;
    std::vector<std::string> items;
    int line = 0;
  };

  const Entry& entry(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) throw DomainError("config key '" + key + "' is missing");
    return it->second;
  }

  std::string scalar(const std::string& key) const {
    const auto& e = entry(key);
    if (e.is_array) throw DomainError("config key '" + key + "' must be a scalar, not an array");
    return e.items.front();
  }

  static std::string strip_comment(const std::string& line) {
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') quoted = !quoted;
      if (line[i] == '#' && !quoted) return line.substr(0, i);
    }
    return line;
  }

  static std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
  }

  static std::string unquote(const std::string& s, const std::string& key) {
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') return s.substr(1, s.size() - 2);
    if (!s.empty() && (s.front() == '"' || s.back() == '"'))
      throw DomainError("config key '" + key + "': unbalanced quotes");
    return s;
  }

  static std::vector<std::string> split_items(const std::string& body, const std::string& key) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    int depth = 0;
    for (char c : body) {
      if (c == '"') quoted = !quoted;
      if (!quoted && c == '(') ++depth;
      if (!quoted && c == ')') --depth;
      if (c == ',' && !quoted && depth == 0) {
        out.push_back(unquote(trim(cur), key));
        cur.clear();
      } else {
        cur += c;
      }
    }
    if (quoted) throw DomainError("config key '" + key + "': unbalanced quotes");
    if (!trim(cur).empty() || !out.empty()) out.push_back(unquote(trim(cur), key));
    for (const auto& item : out)
      if (item.empty()) throw DomainError("config key '" + key + "': empty array element");
    return out;
  }

  static double to_double(const std::string& s, const std::string& key) {
    try {
      std::size_t used = 0;
      const double v = std::stod(s, &used);
      if (used == s.size()) return v;
    } catch (const std::exception&) {
    }
    throw DomainError("config key '" + key + "': '" + s + "' is not a number");
  }

  static std::int64_t to_int(const std::string& s, const std::string& key) {
    try {
      std::size_t used = 0;
      const long long v = std::stoll(s, &used);
      if (used == s.size()) return v;
    } catch (const std::exception&) {
    }
    throw DomainError("config key '" + key + "': '" + s + "' is not an integer");
  }

  std::map<std::string, Entry> values_;
};

/// Builds an experiment grid. Recognized keys: distributions, methods,
/// alphas, sizes, n_reps, B, seed, levels, threads, G_max, n_init, max_iter,
/// tol. Unknown keys are rejected by name.
inline ExperimentGrid experiment_grid_from_config(const KeyValueConfig& cfg) {
  static const std::set<std::string> known = {"distributions", "methods", "alphas", "sizes",  "n_reps",
                                              "B",             "seed",    "levels", "threads", "G_max",
                                              "n_init",        "max_iter", "tol"};
  for (const auto& k : cfg.keys())
    if (!known.count(k)) throw DomainError("config key '" + k + "' is not recognized");

  ExperimentGrid grid;
  for (const auto& d : cfg.get_strings("distributions")) grid.distributions.push_back(parse_distribution(d));

  const std::vector<double> alphas =
      cfg.has("alphas") ? cfg.get_doubles("alphas") : std::vector<double>{1.0, 4.0, kCalibratedAlpha};
  for (const auto& m : cfg.get_strings("methods")) {
    std::string name = m;
    std::transform(name.begin(), name.end(), name.begin(), [](unsigned char c) { return std::tolower(c); });
    if (name == "wlb") {
      for (double a : alphas) grid.methods.push_back(parse_method("wlb", a));
    } else if (name.rfind("wlb(", 0) == 0 && name.back() == ')') {
      double a = 0.0;
      try {
        a = std::stod(name.substr(4, name.size() - 5));
      } catch (const std::exception&) {
        throw DomainError("config key 'methods': bad WLB alpha in '" + m + "'");
      }
      grid.methods.push_back(parse_method("wlb", a));
    } else {
      try {
        grid.methods.push_back(parse_method(name));
      } catch (const DomainError& e) {
        throw DomainError(std::string("config key 'methods': ") + e.what());
      }
    }
  }
  for (auto n : cfg.get_ints("sizes")) {
    if (n < 2) throw DomainError("config key 'sizes': sample sizes must be >= 2");
    grid.sizes.push_back(static_cast<std::size_t>(n));
  }
  auto positive_int = [&](const char* key, auto& target) {
    if (!cfg.has(key)) return;
    const auto v = cfg.get_int(key);
    if (v < 1) throw DomainError(std::string("config key '") + key + "' must be >= 1");
    target = static_cast<std::remove_reference_t<decltype(target)>>(v);
  };
  positive_int("n_reps", grid.n_reps);
  positive_int("B", grid.B);
  positive_int("threads", grid.threads);
  positive_int("n_init", grid.fit.n_init);
  positive_int("max_iter", grid.fit.max_iter);
  if (cfg.has("seed")) {
    const auto v = cfg.get_int("seed");
    if (v < 0) throw DomainError("config key 'seed' must be >= 0");
    grid.seed = static_cast<std::uint64_t>(v);
  }
  if (cfg.has("levels")) grid.levels = cfg.get_doubles("levels");
  if (cfg.has("tol")) grid.fit.tol = cfg.get_double("tol");
  if (cfg.has("G_max")) {
    int gmax = 0;
    positive_int("G_max", gmax);
    grid.fit.G_range.clear();
    for (int g = 1; g <= gmax; ++g) grid.fit.G_range.push_back(g);
  }
  grid.validate();
  grid.fit.validate();
  return grid;
}

}  // namespace mixent
