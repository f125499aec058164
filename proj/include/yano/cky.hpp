#pragma once

#include <optional>
#include <string>
#include <vector>

#include "yano/geometry.hpp"

namespace yano {

/// ∇φ split as ∇_cφ_ab = A_cab + (1/(n−1))(g_ca K_b − g_cb K_a) + residual_cab,
/// with A the full antisymmetrization of ∇φ and K_b = ∇^aφ_ab.
struct CKYDecomposition {
  /// dφ; its components are 3·A.
  PForm tau;
  PForm K;
  Tensor nabla;
  Tensor residual;
  double residual_norm = 0.0;
  /// residual_norm / ‖∇φ‖ (0 when ∇φ vanishes).
  double relative_residual = 0.0;
  double nabla_norm = 0.0;
  /// Normal-form eigenvalues of φ when the spectrum is generic, empty otherwise.
  std::vector<cplx> eigenvalues;
};

CKYDecomposition cky_residual(const JetForm& phi, const LocalGeometry& geo);
CKYDecomposition cky_residual(const MetricField& g, const FormField& phi, const Point& p);

/// Largest frame component τ(V_a,V_b,V_c) with a, b, c taken from three different null pairs
/// (the odd leg counts as its own pair), divided by scale when scale > 0.
double tau_condition_residual(const PForm& tau, const FrameAtPoint& f, double scale = 0.0);

struct NormalFormOptions {
  /// Eigenvalues closer than gap·ρ collide (ρ the spectral radius).
  double gap = 1e-8;
  /// λ and −λ are matched when they agree to pair·ρ.
  double pair = 1e-8;
};

struct NormalForm {
  std::vector<cplx> lambda;
  FrameAtPoint frame;
  /// max |Σλ_μθ^μ∧θ_μ − φ| / max |φ|.
  double reconstruction_error = 0.0;
};

/// φ = Σ λ_μ θ^μ∧θ_μ with F = g^{-1}φ satisfying F V_μ = −λ_μ V_μ and F V^μ = λ_μ V^μ.
NormalForm normal_form(const PForm& phi, const MetricAtPoint& g, const NormalFormOptions& opt = {});

/// Constants of the flat-space solution
/// φ(x) = ½|x|²χ − x*∧(x⌟χ) + x*∧K + x⌟τ + φ₀ for the metric diag(signature).
struct FlatCKYConstants {
  std::vector<double> signature;
  PForm chi;
  PForm K;
  PForm tau;
  PForm phi0;

  int dim() const { return static_cast<int>(signature.size()); }
  void validate() const;
};

JetForm flat_cky_jet(const FlatCKYConstants& c, const Point& p);
PForm flat_cky(const FlatCKYConstants& c, const Point& p);
FormField flat_cky_field(const FlatCKYConstants& c);

struct LabeledResidual {
  std::string id;
  double value = 0.0;
};

double max_value(const std::vector<LabeledResidual>& r);

/// Eigenvalue identities of a CKY 2-form in normal form, each in multiplied-through form and
/// divided by the larger of its two terms and their natural size max|λ|·max|Γ| + max|V_a(λ_μ)|:
///   compKV1   K(V_μ) + (n−1) V_μ(λ_μ)
///   LC-       (λ_μ−λ_ν) Γ_{νμ}^ν − V_μ(λ_μ−λ_ν)
///   LC+       (λ_μ+λ_ν) Γ^ν_{μν} − V_μ(λ_μ+λ_ν)
///   OddCond   λ_μ Γ_{00μ} + V_μ(λ_μ)
/// and the same relations with V_μ ↔ V^μ, λ ↔ −λ (ids suffixed "^").
/// The coframe must put φ in normal form; λ_μ = φ(V_μ, V^μ) is read off it as jets.
std::vector<LabeledResidual> eigenvalue_identity_residuals(const MetricField& g, const CoframeField& nf,
                                                           const FormField& phi, const Point& p);

struct HamiltonianData {
  FormField omega;
  /// J^a_b as a jet matrix (row a, column b).
  std::function<JetMatrix(const Point&)> J;
  ScalarField sigma;
  FormField psi;
};

struct KahlerChecks {
  double j_square = 0.0;
  double compatibility = 0.0;
  double trace = 0.0;
  /// ‖∇ω‖ relative to ‖ω‖.
  double parallel = 0.0;
};

KahlerChecks kahler_checks(const HamiltonianData& h, const MetricField& g, const Point& p);

/// ‖∇_Xψ − ½(dσ∧J(X*) − J(dσ)∧X*)‖ over all coordinate X, relative to ‖∂ψ‖ + ‖Γ‖‖ψ‖.
/// Throws PreconditionFailed when the Kähler checks exceed kahler_tol.
double hamiltonian_residual(const HamiltonianData& h, const MetricField& g, const Point& p,
                            double kahler_tol = 1e-8);

struct HamiltonianCKY {
  PForm phi;
  double cky_residual = 0.0;
  /// ‖dφ + (3/(n−1)) ω∧J(d*φ)‖ relative to ‖dφ‖ + ‖ω∧J(d*φ)‖.
  double clcocl_residual = 0.0;
  double dphi_norm = 0.0;
};

/// φ = ψ − ½σω, with J acting on 1-forms by J(X*) = (JX)*.
HamiltonianCKY hamiltonian_to_cky(const HamiltonianData& h, const MetricField& g, const Point& p,
                                  double kahler_tol = 1e-8);
FormField hamiltonian_cky_field(const HamiltonianData& h);

}  // namespace yano
