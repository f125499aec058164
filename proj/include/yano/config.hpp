#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "yano/catalog.hpp"

namespace yano {

struct Tolerances {
  /// τ₀, used for every check without an override.
  double default_tol = 1e-8;
  /// Residual floor that negative checks must exceed.
  double floor = 1e-3;
  /// Overrides keyed by check id or id prefix; the longest matching key wins.
  std::map<std::string, double> checks;

  double for_check(const std::string& id) const;
};

struct RunConfig {
  std::string metric = "kerr_nut_ads";
  int dim_m = 2;
  int odd = 0;
  /// Model defaults for (metric, dim_m, odd) when absent.
  std::optional<ParameterRecord> parameters;
  std::vector<std::string> suites{"all"};
  int points = 20;
  std::uint64_t seed = 42;
  Tolerances tolerances;
  std::string output;
  /// Worker threads for the point map; 0 picks the hardware concurrency.
  int threads = 0;

  /// Throws ConfigError.
  void validate() const;
  ParameterRecord resolved_parameters() const;
};

std::vector<std::string> known_suites();
/// Expands "all", removes duplicates and keeps the canonical suite order; throws ConfigError on
/// unknown or empty lists.
std::vector<std::string> expand_suites(const std::vector<std::string>& suites);
/// Splits a comma-separated suite list.
std::vector<std::string> parse_suite_list(const std::string& s);

/// Reads a YAML document whose keys mirror the RunConfig field names; fields absent from the
/// file keep the values in base.
RunConfig load_config(const std::string& path, RunConfig base = {});
RunConfig parse_config(const std::string& yaml_text, RunConfig base = {});

}  // namespace yano
