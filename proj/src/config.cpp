#include "yano/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "yano/errors.hpp"

namespace yano {

double Tolerances::for_check(const std::string& id) const {
  double tol = default_tol;
  size_t best = 0;
  for (const auto& [key, v] : checks)
    if (id.compare(0, key.size(), key) == 0 && key.size() >= best) {
      best = key.size();
      tol = v;
    }
  return tol;
}

std::vector<std::string> known_suites() {
  return {"cky", "cky-normal-form", "foliation", "weyl", "spin", "hamiltonian", "identities"};
}

std::vector<std::string> parse_suite_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<std::string> expand_suites(const std::vector<std::string>& suites) {
  if (suites.empty()) throw ConfigError("no suites selected");
  const auto all = known_suites();
  std::vector<bool> on(all.size(), false);
  for (const std::string& s : suites) {
    if (s == "all") {
      std::fill(on.begin(), on.end(), true);
      continue;
    }
    auto it = std::find(all.begin(), all.end(), s);
    if (it == all.end()) throw ConfigError("unknown suite: " + s);
    on[it - all.begin()] = true;
  }
  std::vector<std::string> out;
  for (size_t k = 0; k < all.size(); ++k)
    if (on[k]) out.push_back(all[k]);
  return out;
}

void RunConfig::validate() const {
  const auto ids = model_ids();
  if (std::find(ids.begin(), ids.end(), metric) == ids.end()) throw ConfigError("unknown metric id: " + metric);
  if (dim_m < 1 || dim_m > 4) throw ConfigError("dim_m must be in 1..4");
  if (odd != 0 && odd != 1) throw ConfigError("odd must be 0 or 1");
  if (metric == "orthotoric" && odd) throw ConfigError("orthotoric metrics are even-dimensional");
  expand_suites(suites);
  if (points < 1) throw ConfigError("points must be positive");
  if (threads < 0) throw ConfigError("threads must be non-negative");
  auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!positive(tolerances.default_tol) || !positive(tolerances.floor)) throw ConfigError("tolerances must be positive");
  for (const auto& [k, v] : tolerances.checks)
    if (!positive(v)) throw ConfigError("tolerance for " + k + " must be positive");
}

ParameterRecord RunConfig::resolved_parameters() const {
  if (parameters) return *parameters;
  return default_parameters(metric, dim_m, odd);
}

namespace {

template <class T>
void read(const YAML::Node& n, const char* key, T& out) {
  if (n[key]) out = n[key].as<T>();
}

cplx read_complex(const YAML::Node& n) {
  if (n.IsSequence()) {
    if (n.size() != 2) throw ConfigError("complex values are [re, im]");
    return {n[0].as<double>(), n[1].as<double>()};
  }
  return n.as<double>();
}

ParameterRecord read_parameters(const YAML::Node& n, ParameterRecord p) {
  read(n, "m", p.m);
  read(n, "eps", p.eps);
  read(n, "a", p.a);
  if (n["M"]) {
    p.M.clear();
    for (const auto& v : n["M"]) p.M.push_back(read_complex(v));
  }
  read(n, "g", p.g);
  read(n, "a0", p.a0);
  read(n, "x_coeffs", p.x_coeffs);
  read(n, "y_coeffs", p.y_coeffs);
  read(n, "theta", p.theta);
  read(n, "signature", p.signature);
  read(n, "box_lo", p.box_lo);
  read(n, "box_hi", p.box_hi);
  read(n, "guard", p.guard);
  return p;
}

}  // namespace

RunConfig parse_config(const std::string& text, RunConfig c) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  if (!root.IsMap()) throw ConfigError("config must be a key/value document");
  static const std::vector<std::string> keys{"metric", "dim_m",       "odd",    "parameters", "suites",
                                             "points", "seed",        "tolerances", "output", "threads"};
  for (const auto& kv : root) {
    const std::string k = kv.first.as<std::string>();
    if (std::find(keys.begin(), keys.end(), k) == keys.end()) throw ConfigError("unknown config key: " + k);
  }
  try {
    read(root, "metric", c.metric);
    read(root, "dim_m", c.dim_m);
    read(root, "odd", c.odd);
    if (root["suites"]) {
      const YAML::Node s = root["suites"];
      c.suites = s.IsSequence() ? s.as<std::vector<std::string>>() : parse_suite_list(s.as<std::string>());
    }
    read(root, "points", c.points);
    read(root, "seed", c.seed);
    read(root, "output", c.output);
    read(root, "threads", c.threads);
    if (const YAML::Node t = root["tolerances"]) {
      read(t, "default", c.tolerances.default_tol);
      read(t, "floor", c.tolerances.floor);
      if (t["checks"])
        for (const auto& kv : t["checks"]) c.tolerances.checks[kv.first.as<std::string>()] = kv.second.as<double>();
    }
    if (const YAML::Node p = root["parameters"]) {
      ParameterRecord base = default_parameters(c.metric, c.dim_m, c.odd);
      base.m = c.dim_m;
      base.eps = c.odd;
      c.parameters = read_parameters(p, base);
    }
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("config value error: ") + e.what());
  }
  return c;
}

RunConfig load_config(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), std::move(base));
}

}  // namespace yano
