#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace yano {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Evaluation hit a coordinate singularity (near-zero divisor or square-root argument).
class SingularEvaluation : public Error {
 public:
  explicit SingularEvaluation(const std::string& what, std::vector<double> point = {});
  const std::vector<double>& point() const { return point_; }

 private:
  std::vector<double> point_;
};

class SingularMetric : public Error {
 public:
  using Error::Error;
};

class IllConditionedFrame : public Error {
 public:
  using Error::Error;
};

/// Eigenvalues of a 2-form collide, so its normal form is not unique.
class DegenerateSpectrum : public Error {
 public:
  using Error::Error;
};

/// Eigenvalues of a 2-form do not come in ± pairs.
class InconsistentInput : public Error {
 public:
  using Error::Error;
};

class PreconditionFailed : public Error {
 public:
  using Error::Error;
};

class NoRealStructure : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace yano
