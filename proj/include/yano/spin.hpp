#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "yano/exterior.hpp"
#include "yano/geometry.hpp"
#include "yano/weyltype.hpp"

namespace yano {

/// Element of Λ(span{θ^1..θ^m}); coefficient k belongs to the subset with bitmask k.
struct Spinor {
  int m = 0;
  Eigen::VectorXcd c;

  Spinor() = default;
  explicit Spinor(int m);
  static Spinor basis(int m, Mask subset);

  int size() const { return static_cast<int>(c.size()); }
  double norm() const { return c.norm(); }
  /// +1 (even support), −1 (odd support) or 0 (mixed or zero).
  int chirality(double tol = 0.0) const;
};

/// Clifford matrices on the frame labels of a null layout:
///   γ(V_μ) = −ι_μ,  γ(V^μ) = θ^μ∧,  γ(V_0) = (i/√2)(−1)^deg,
/// so that γ_aγ_b + γ_bγ_a = −P_ab with P the frame pairing; with g(v,w) = ½(ξ(Y)+η(X)) on V ⊕ V*
/// this is −2g_ab.
Eigen::MatrixXcd gamma_matrix(int a, const FrameLayout& l);
/// Antisymmetrized product γ_{[a1}⋯γ_{ap]} with weight one.
Eigen::MatrixXcd gamma_product(const std::vector<int>& labels, const FrameLayout& l);

/// X + ξ with X = Σ X^μ V_μ, ξ = Σ ξ_μ θ^μ and an optional odd-leg coefficient.
struct CliffordVector {
  Eigen::VectorXcd X;
  Eigen::VectorXcd xi;
  cplx odd = 0.0;
};

/// (X+ξ)·ζ = −X⌟ζ + ξ∧ζ (+ odd·γ_0 ζ).
Spinor clifford_mul(const CliffordVector& v, const Spinor& zeta);

/// Clifford action of a form with frame components: (−1)^{p(p−1)/2} Σ α_{a1…ap} γ^{[a1}⋯γ^{ap]},
/// indices raised with the pairing. On 2-forms this gives B·ζ = −B∧ζ, β·ζ = β⌟ζ and
/// A·ζ = A*ζ − ½(tr A)ζ.
Spinor form_action(const PForm& alpha, const FrameLayout& l, const Spinor& zeta);
Eigen::MatrixXcd form_action_matrix(const PForm& alpha, const FrameLayout& l);

/// λ̃ = −½ Σ_μ (−1)^{[μ ∈ subset]} λ_μ.
cplx cky_spin_eigenvalue(const std::vector<cplx>& lambda, Mask subset);

struct PurityResult {
  bool pure = false;
  bool chiral = false;
  int dim = 0;
  /// Columns span N(ζ) ⊂ V ⊕ V*, as frame-label components of length 2m.
  Eigen::MatrixXcd basis;
};

/// N(ζ) = {v ∈ V ⊕ V* : v·ζ = 0}; pure iff dim N(ζ) = m. Throws PreconditionFailed for ζ = 0.
PurityResult purity_test(const Spinor& zeta, double tol = 1e-10);

/// ⟨η,ζ⟩ = top-degree coefficient of rev(η)∧ζ; (−1)^{m(m−1)/2}-symmetric.
cplx spinor_pairing(const Spinor& eta, const Spinor& zeta);
/// Frame components ⟨η, γ_{[a1}⋯γ_{ap]} ζ⟩.
PForm spinor_bilinear(const Spinor& eta, const Spinor& zeta, int p, const FrameLayout& l);

/// Spinor coefficient functions relative to the basis built on a null coframe.
struct SpinorField {
  int m = 0;
  std::function<std::vector<Jet2>(const Point&)> eval;
};

SpinorField constant_spinor_field(const Spinor& zeta);

/// Ω_a = ½ Γ_a^{bc} γ_bγ_c with Γ_abc = g(∇_{V_a}V_b, V_c); satisfies [Ω_a, γ_b] = Γ_ab^c γ_c.
Eigen::MatrixXcd spin_connection(const FramedGeometry& fg, int a);
/// ∇_{V_a}ζ = V_a(ζ) + Ω_a ζ.
Spinor spinor_covariant_derivative(const SpinorField& zeta, const FramedGeometry& fg, int a);
Spinor spinor_value(const SpinorField& zeta, const Point& p);

/// max over a basis X of N(ζ) of min_f ‖∇_Xζ − fζ‖ / (‖∇_Xζ‖ + ‖ζ‖·max|Γ|).
/// Throws PreconditionFailed when ζ is not pure at the point.
double spinor_integrability_residual(const SpinorField& zeta, const FramedGeometry& fg);

/// Ψ(ζ,ζ) = ¼ Σ C^{abcd} (γ_{[a}γ_{b]}ζ) ⊗ (γ_{[c}γ_{d]}ζ) for the basis spinor ζ of subset. Each output
/// slot is wedged with ζ as the skew part of the tensor product, so the residual vanishes iff
/// Ψ(ζ,ζ) ∝ ζ⊗ζ; for a basis spinor that is the largest entry off (subset, subset), over max |C|.
/// Even dimension only (PreconditionFailed otherwise); vacuous for vanishing C.
FlaggedResidual weyl_spin_residual(const Tensor& frame_weyl, const FrameLayout& l, Mask subset);

}  // namespace yano
