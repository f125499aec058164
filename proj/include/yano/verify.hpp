#pragma once

#include <string>
#include <vector>

#include "yano/catalog.hpp"
#include "yano/config.hpp"

namespace yano {

/// Below: pass iff residual < tolerance. Above: negative check, pass iff residual > floor.
/// Info: recorded, always passes.
enum class CheckKind { Below, Above, Info };

const char* to_string(CheckKind k);

struct CheckRecord {
  std::string check;
  int point = 0;
  double residual = 0.0;
  double tolerance = 0.0;
  CheckKind kind = CheckKind::Below;
  bool pass = false;
  /// The tensor the residual is measured against vanishes.
  bool vacuous = false;
};

struct CheckSummary {
  std::string check;
  CheckKind kind = CheckKind::Below;
  int count = 0;
  double max_residual = 0.0;
  double min_residual = 0.0;
  bool pass = true;
};

struct VerificationReport {
  RunConfig config;
  ParameterRecord parameters;
  std::string model_id;
  int n = 0;
  std::vector<std::string> suites;
  std::vector<Point> points;
  std::vector<CheckRecord> records;
  std::vector<CheckSummary> summary;
  bool overall_pass = false;
  std::vector<std::string> notes;
};

/// Checks of the selected suites at one point, in a fixed order.
std::vector<CheckRecord> evaluate_point(const MetricModel& model, const std::vector<std::string>& suites,
                                        const Point& p, int index, const Tolerances& tol);

/// Suites that have nothing to test on the model, with the reason.
std::vector<std::string> inapplicable_suites(const MetricModel& model, const std::vector<std::string>& suites);

/// Per-check maxima and the overall verdict.
void summarize(VerificationReport& r);

/// Builds the model, samples the points and evaluates them in parallel; records are assembled in
/// point order, so the report depends only on the config. Throws ConfigError, PreconditionFailed
/// or SingularEvaluation.
VerificationReport run(const RunConfig& config);

std::string report_json(const VerificationReport& r, int indent = 2);
void write_report(const VerificationReport& r, const std::string& path);

/// 0 on overall pass, 1 otherwise.
int exit_status(const VerificationReport& r);

}  // namespace yano
