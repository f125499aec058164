#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "yano/cky.hpp"
#include "yano/geometry.hpp"

namespace yano {

struct ParameterRecord {
  int m = 2;
  int eps = 0;
  /// Kerr-NUT-(A)dS rotation constants a_1..a_{m−1+ε}.
  std::vector<double> a;
  /// Mass and NUT parameters M_1..M_m (free complex constants).
  std::vector<cplx> M;
  /// λ = −g² is the cosmological constant.
  double g = 0.0;
  /// LMP5 constant and quartic coefficients of X(x), Y(y), lowest power first.
  double a0 = 1.0;
  std::vector<double> x_coeffs;
  std::vector<double> y_coeffs;
  /// Orthotoric Θ_μ coefficients, lowest power first; a single entry is shared by all μ.
  std::vector<std::vector<double>> theta;
  /// Flat models: "euclidean", "lorentzian" or "split".
  std::string signature = "euclidean";
  /// Sampling boxes, one interval per coordinate (empty selects the model default).
  std::vector<double> box_lo;
  std::vector<double> box_hi;
  double guard = 1e-4;
};

struct SamplingBox {
  std::vector<double> lo;
  std::vector<double> hi;
  double guard = 1e-4;
  /// Rejects points closer than guard to a singular locus.
  std::function<bool(const Point&)> accept;
};

/// Closed-form bracket [V_a, V_b] = Σ_c coefficient_c V_c in frame labels of the null coframe.
struct BracketReference {
  std::string id;
  int a = 0;
  int b = 0;
  std::function<std::vector<cplx>(const Point&)> coefficients;
  /// Non-empty when the display as printed is known not to hold; states the correction.
  std::string erratum;
};

enum class Expectation { Pass, AboveFloor, Informational };

/// A 2-form tested against a metric other than the model's main CKY check.
struct AuxiliaryForm {
  std::string id;
  MetricField metric;
  FormField form;
  Expectation expect = Expectation::Informational;
  /// Coordinates of the auxiliary chart taken from the model point (by index).
  std::vector<int> coordinates;
  std::string note;
};

struct MetricModel {
  std::string id;
  int n = 0;
  int m = 0;
  bool odd = false;
  ParameterRecord params;
  MetricField metric;
  /// Orthonormal e-frame when the model has one.
  std::optional<CoframeField> real_coframe;
  /// Null coframe θ^μ, θ_μ (and the odd leg); diagonalizes the model's 2-form.
  CoframeField null_coframe;
  std::optional<FormField> cky;
  bool cky_closed = false;
  std::optional<HamiltonianData> hamiltonian;
  SamplingBox box;
  /// Metric and coordinates are real, so D∩D̄ is meaningful.
  bool real_structure = false;
  /// Ricci-flat by construction (checked by the catalog tests).
  bool ricci_flat = false;
  std::vector<BracketReference> brackets;
  std::vector<AuxiliaryForm> auxiliary;
  std::vector<std::string> notes;

  /// Seeded uniform samples in the box passing the guards; throws PreconditionFailed when the
  /// guards reject every attempt.
  std::vector<Point> sample(int count, std::uint64_t seed) const;
};

struct SelfCheck {
  double duality = 0.0;
  double null_reconstruction = 0.0;
  double real_reconstruction = 0.0;
};

/// Duality of the frames and reconstruction of the metric from each coframe at p.
SelfCheck self_check(const MetricModel& model, const Point& p);

ParameterRecord default_kerr_nut_ads_parameters(int m, int eps);
ParameterRecord default_lmp5_parameters();
ParameterRecord default_orthotoric_parameters(int m);
/// Θ_μ(ξ) = Π_{j=1}^{m}(j + 1/2 − ξ) + c_μ: one polynomial of degree m shifted by distinct
/// constants, which makes the metric Ricci-flat (and not flat).
ParameterRecord ricci_flat_orthotoric_parameters(int m);
/// Perturbs rotation, mass and quartic constants within ranges that keep the default boxes valid.
ParameterRecord jitter_parameters(const std::string& id, ParameterRecord p, std::uint64_t seed);

MetricModel build_kerr_nut_ads(int m, int eps, const ParameterRecord& params);
MetricModel build_kerr_nut_ads(int m, int eps);
MetricModel build_lmp5(const ParameterRecord& params);
MetricModel build_orthotoric(int m, const ParameterRecord& params);
MetricModel build_flat(int n, const std::string& signature);

std::vector<std::string> model_ids();
/// Builds a catalog model by id from a parameter record (m and eps taken from it).
MetricModel build_model(const std::string& id, const ParameterRecord& params);
ParameterRecord default_parameters(const std::string& id, int m, int eps);

namespace catalog_detail {

/// Metric Σ η_ab θ^a θ^b assembled from a coframe field.
MetricField metric_from_coframe(const CoframeField& f);
/// Null coframe θ^μ = 2^{-1/2}(e^μ + i e^{m+μ}), θ_μ = 2^{-1/2}(e^μ − i e^{m+μ}) from an e-frame.
CoframeField null_from_real(const CoframeField& e, int m, bool odd);
/// Σ_μ λ_μ θ^μ∧θ_μ with λ_μ read from a jet function of the point.
FormField normal_form_field(const CoframeField& nf, std::function<std::vector<Jet2>(const Point&)> lambda);
/// Uniform double in [0,1) from a 64-bit generator, identical on every platform.
double unit_uniform(std::uint64_t& state);
/// Replaces the default box with the record's box when one is given.
void apply_box_override(SamplingBox& box, const ParameterRecord& p, int n);
/// Elementary symmetric polynomials e_0..e_k of the given jets.
std::vector<Jet2> elementary_symmetric(const std::vector<Jet2>& v, int n);

}  // namespace catalog_detail

}  // namespace yano
