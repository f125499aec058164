#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "yano/exterior.hpp"
#include "yano/jet.hpp"

namespace yano {

/// Dense complex tensor of rank r over dimension n (all slots range over 0..n-1).
class Tensor {
 public:
  Tensor() = default;
  Tensor(int n, int rank);

  int dim() const { return n_; }
  int rank() const { return rank_; }
  size_t size() const { return data_.size(); }
  cplx& operator[](size_t k) { return data_[k]; }
  const cplx& operator[](size_t k) const { return data_[k]; }

  template <class... I>
  cplx& operator()(I... idx) {
    return data_[offset({static_cast<int>(idx)...})];
  }
  template <class... I>
  const cplx& operator()(I... idx) const {
    return data_[offset({static_cast<int>(idx)...})];
  }
  cplx& at(const std::vector<int>& idx) { return data_[offset(idx)]; }
  const cplx& at(const std::vector<int>& idx) const { return data_[offset(idx)]; }

  double max_abs() const;
  double frobenius() const;

 private:
  size_t offset(std::initializer_list<int> idx) const;
  size_t offset(const std::vector<int>& idx) const;

  int n_ = 0;
  int rank_ = 0;
  std::vector<cplx> data_;
};

struct MetricField {
  int n = 0;
  std::string chart;
  std::function<JetMatrix(const Point&)> eval;

  static MetricField from_components(int n, std::vector<ScalarField> components, std::string chart = {});
};

/// Coframe θ^a as rows of a jet matrix, with the frame layout that fixes the pairing.
struct CoframeField {
  int n = 0;
  FrameLayout layout;
  std::function<JetMatrix(const Point&)> eval;
};

struct FormField {
  int n = 0;
  int p = 0;
  std::function<JetForm(const Point&)> eval;
};

struct VectorField {
  int n = 0;
  std::function<std::vector<Jet2>(const Point&)> eval;
};

struct ConnectionTable {
  /// Γ^i_{jk} in coordinates.
  Tensor christoffel;
  /// Γ_{ab}^c = θ^c(∇_{V_a} V_b) when a frame is attached.
  Tensor frame;
  /// Γ_{abc} = g(∇_{V_a} V_b, V_c).
  Tensor frame_lowered;
};

struct CurvatureTable {
  /// R_{ijkl} = g(R(∂_k, ∂_l)∂_j, ∂_i); the round sphere has R_{θφθφ} = sin²θ.
  Tensor riemann;
  Tensor ricci;
  cplx scalar = 0.0;
  Tensor weyl;
  Tensor frame_riemann;
  Tensor frame_ricci;
  Tensor frame_weyl;
};

/// Metric jets, inverse and Christoffel symbols at one point.
class LocalGeometry {
 public:
  LocalGeometry(const MetricField& g, const Point& p);

  int dim() const { return n_; }
  const Point& point() const { return p_; }
  const JetMatrix& g_jets() const { return g_; }
  const JetMatrix& ginv_jets() const { return ginv_; }
  const MetricAtPoint& metric() const { return *metric_; }
  /// Γ^i_{jk} as jets whose value and gradient are exact.
  const Jet2& christoffel_jet(int i, int j, int k) const { return gamma_[(i * n_ + j) * n_ + k]; }
  cplx christoffel(int i, int j, int k) const { return christoffel_jet(i, j, k).value(); }
  Tensor christoffel_tensor() const;
  /// Riemann, Ricci, scalar and Weyl in coordinates.
  CurvatureTable curvature() const;
  /// ∇_c g_{ab}; zero up to rounding.
  Tensor metricity() const;

 private:
  int n_;
  Point p_;
  JetMatrix g_;
  JetMatrix ginv_;
  std::unique_ptr<MetricAtPoint> metric_;
  std::vector<Jet2> gamma_;
};

/// LocalGeometry plus a coframe with its dual frame, brackets and frame connection.
class FramedGeometry {
 public:
  FramedGeometry(const MetricField& g, const CoframeField& f, const Point& p);

  const LocalGeometry& local() const { return local_; }
  const FrameAtPoint& frame() const { return *frame_; }
  const FrameLayout& layout() const { return layout_; }
  int dim() const { return local_.dim(); }

  /// V_b^i as jets.
  const Jet2& frame_jet(int b, int i) const { return frame_jets_(i, b); }
  const Jet2& coframe_jet(int a, int i) const { return coframe_jets_(a, i); }
  std::vector<cplx> vector(int a) const { return frame_->vector(a); }

  /// V_a(f) for a scalar jet.
  cplx derivative(int a, const Jet2& f) const;
  /// C_{ab}^c = θ^c([V_a, V_b]).
  const Tensor& brackets() const { return brackets_; }
  /// Γ_{ab}^c = θ^c(∇_{V_a} V_b).
  const Tensor& connection() const { return connection_; }
  /// Γ_{abc} = g(∇_{V_a} V_b, V_c).
  const Tensor& connection_lowered() const { return lowered_; }
  /// Γ_{ab}^c as jets with exact value and gradient (for derivative-path curvature).
  std::vector<Jet2> connection_jets() const;

  /// Frame components T(V_a, V_b, …) of a coordinate tensor with all slots lower.
  Tensor project(const Tensor& t) const;
  /// Riemann frame components recomputed from the frame connection and its derivative.
  Tensor riemann_from_connection() const;
  /// Largest |g(V_a,V_b) − pairing_ab|, relative to the largest metric entry.
  double reconstruction_defect() const;

 private:
  LocalGeometry local_;
  FrameLayout layout_;
  JetMatrix coframe_jets_;
  JetMatrix frame_jets_;
  std::unique_ptr<FrameAtPoint> frame_;
  Tensor brackets_;
  Tensor connection_;
  Tensor lowered_;
};

ConnectionTable christoffel(const MetricField& g, const Point& p);
ConnectionTable frame_connection(const MetricField& g, const CoframeField& f, const Point& p);
CurvatureTable curvature(const MetricField& g, const Point& p, const CoframeField* f = nullptr);

/// d of a jet form; the result has exact value and gradient only.
JetForm exterior_derivative(const JetForm& a);
PForm exterior_derivative(const FormField& a, const Point& p);
/// d* = s (−1)^{np+n+1} * d * with s = vol²/det g (sgn det g for real metrics), the formal
/// adjoint of d in every signature; the zero 0-form for p = 0.
PForm codifferential(const FormField& a, const MetricField& g, const Point& p);
/// Same as above with a precomputed form jet and metric jets.
PForm codifferential(const JetForm& a, const JetMatrix& g, int n);
/// ∇_c a_{i1…ip} with the derivative slot first.
Tensor covariant_derivative_form(const JetForm& a, const LocalGeometry& geo);
Tensor covariant_derivative_form(const FormField& a, const MetricField& g, const Point& p);
std::vector<cplx> lie_bracket(const VectorField& x, const VectorField& y, const Point& p);
std::vector<cplx> lie_bracket(const std::vector<Jet2>& x, const std::vector<Jet2>& y);

/// Hodge star of a jet form against a jet metric (exact to second order).
JetForm hodge_star(const JetForm& a, const JetMatrix& g, int n);
/// One-form jet from a row of a jet matrix.
JetForm jet_one_form(const JetMatrix& rows, int a);

}  // namespace yano
