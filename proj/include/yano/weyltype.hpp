#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "yano/exterior.hpp"
#include "yano/geometry.hpp"

namespace yano {

/// Linear operator on 2-forms at a point, acting on the components α_ab (a < b, lexicographic)
/// of a 2-form in some basis whose metric is g.
struct TwoFormOperator {
  int n = 0;
  std::vector<std::array<int, 2>> basis;
  Eigen::MatrixXcd matrix;
  /// Induced bilinear form on Λ²: ⟨α,β⟩ = Σ_{a<b} α_ab β^ab.
  Eigen::MatrixXcd gram;

  int index(int a, int b) const;
  Eigen::VectorXcd components(const PForm& alpha) const;
  PForm apply(const PForm& alpha) const;
  /// |Gram·M + (Gram·M)ᵀ| relative to |Gram·M|: zero for skew operators.
  double skew_defect() const;
  /// |Gram·M − (Gram·M)ᵀ| relative to |Gram·M|: zero for symmetric operators.
  double symmetry_defect() const;
};

/// φ̂ = derivation extension of F = g^{-1}φ, with F acting on 1-forms by α ↦ −α∘F, so that in a
/// normal-form frame θ^μ ↦ λ_μθ^μ and θ_μ ↦ −λ_μθ_μ.
TwoFormOperator phi_hat(const PForm& phi, const Eigen::MatrixXcd& g);
/// Ĉα_ab = ½ C_ab^cd α_cd for a tensor with the symmetries of curvature.
TwoFormOperator curvature_hat(const Tensor& c, const Eigen::MatrixXcd& g);

/// Trace-free part of a curvature-type tensor.
Tensor weyl_part(const Tensor& riemann, const Eigen::MatrixXcd& g);

/// Residual reported as 0 with vacuous = true when the tensor it is measured against vanishes.
struct FlaggedResidual {
  double value = 0.0;
  bool vacuous = false;
};

constexpr double kVacuousNorm = 1e-12;

/// ‖ĈΦ̂ − Φ̂Ĉ‖ / (‖Ĉ‖‖Φ̂‖); vacuous when ‖Ĉ‖ < 1e-12.
FlaggedResidual commutator_residual(const TwoFormOperator& c, const TwoFormOperator& phi);

/// Closed-form spectrum of φ̂ from normal-form eigenvalues: ±(λ_μ+λ_ν), λ_μ−λ_ν (μ ≠ ν), m zeros
/// and ±λ_μ from the odd leg.
std::vector<cplx> phi_hat_spectrum(const std::vector<cplx>& lambda, bool odd);

/// True when the frame labels of a component are balanced: in every null pair as many V_μ as V^μ,
/// and the odd leg an even number of times.
bool type_d_permitted(const std::array<int, 4>& labels, const FrameLayout& l);

/// Largest forbidden null-frame component of C over max |C|.
FlaggedResidual type_d_residual(const Tensor& frame_weyl, const FrameLayout& l);

/// max |C(k,X,k,Y)| over an orthonormal basis X, Y of k^⊥, k taken with unit norm, over max |C|.
/// k and C are frame components; g is the frame metric. Throws PreconditionFailed unless g(k,k) = 0.
FlaggedResidual wand_residual(const Tensor& frame_weyl, const std::vector<cplx>& k, const Eigen::MatrixXcd& g,
                              double null_tol = 1e-10);
/// The frame vector with label a as the candidate.
FlaggedResidual wand_residual(const Tensor& frame_weyl, int a, const FrameLayout& l);

struct TypeDReport {
  FlaggedResidual components;
  FlaggedResidual commutator;
  std::vector<FlaggedResidual> wand;  // one per frame label
  double spectrum = 0.0;               // φ̂ eigenvalues against the closed forms
  bool passes(double tol) const;
};

/// All checks at p using the model's null frame, its 2-form in that frame and the Weyl tensor.
TypeDReport type_d_report(const MetricField& g, const CoframeField& nf, const FormField& phi, const Point& p);

}  // namespace yano
