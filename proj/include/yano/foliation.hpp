#pragma once

#include <string>
#include <vector>

#include "yano/catalog.hpp"
#include "yano/cky.hpp"
#include "yano/geometry.hpp"

namespace yano {

/// One vector from each null pair: V^μ when bit μ of mask is set, V_μ otherwise; the odd leg
/// is adjoined on request.
struct DistributionSelector {
  unsigned mask = 0;
  bool adjoin_odd = false;

  std::string label(int m) const;
};

/// All 2^m selectors in increasing mask order.
std::vector<DistributionSelector> enumerate_distributions(int m, bool adjoin_odd);

std::vector<int> spanning_labels(const DistributionSelector& sel, const FrameLayout& layout);
/// Labels c whose coframe θ^c annihilates the distribution.
std::vector<int> annihilator_labels(const DistributionSelector& sel, const FrameLayout& layout);

struct DistributionAtPoint {
  std::vector<std::vector<cplx>> span;
  std::vector<std::vector<cplx>> annihilators;
  /// The odd leg, when adjoined, is the last spanning vector.
  bool has_odd = false;

  /// max |g(u,w)| over the null spanning vectors, relative to |u|²·max|g_ij|.
  double isotropy_defect(const MetricAtPoint& g) const;
  double annihilator_defect() const;
};

DistributionAtPoint distribution_at(const DistributionSelector& sel, const FrameAtPoint& f);

/// Largest C_ab^c with a, b spanning and c annihilated, over max |C|.
double frobenius_residual(const DistributionSelector& sel, const FramedGeometry& fg);
double frobenius_residual(const DistributionSelector& sel, const MetricModel& model, const Point& p);
/// Same test for an arbitrary set of frame labels.
double bracket_closure_residual(const std::vector<int>& labels, const FramedGeometry& fg);
/// Frobenius test for arbitrary vector fields: the part of [u,w] outside span{u,…} at p,
/// relative to the largest bracket.
double frobenius_residual(const std::vector<VectorField>& span, const Point& p);

/// Largest Γ_ab^c = θ^c(∇_{V_a}V_b) with a, b spanning and c annihilated, over max |Γ|.
double totally_geodesic_residual(const DistributionSelector& sel, const FramedGeometry& fg);
double totally_geodesic_residual(const DistributionSelector& sel, const MetricModel& model, const Point& p);

/// Connection components Γ_abc = g(∇_{V_a}V_b, V_c) forced to vanish by a CKY tensor in normal
/// form, grouped by pattern and divided by max |Γ|:
///   "Γ_κμν", "Γ^κμν" (all indices), "Γ_κμ^ν" (ν ≠ κ, μ), "Γ_κ^μν" (κ ≠ μ, ν)
/// and, in odd dimension with μ ≠ ν, "Γ_νμ0", "Γ^νμ0", "Γ^ν_μ0", "Γ_ν^μ0".
std::vector<LabeledResidual> connection_pattern_residual(const FramedGeometry& fg);
std::vector<LabeledResidual> connection_pattern_residual(const MetricModel& model, const Point& p);

/// dim(D ∩ D̄) = dim D + dim D̄ − rank[D D̄] for a distribution of real-structure frame fields.
int real_intersection_rank(const DistributionSelector& sel, const FrameAtPoint& f, double tol = 1e-9);
/// Throws NoRealStructure when the model declares no real structure.
int real_intersection_rank(const DistributionSelector& sel, const MetricModel& model, const Point& p);

}  // namespace yano
