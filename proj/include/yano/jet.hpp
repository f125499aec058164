#pragma once

#include <array>
#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "yano/errors.hpp"

namespace yano {

using cplx = std::complex<double>;

inline constexpr int kMaxDim = 9;
inline constexpr double kSingularEpsilon = 1e-13;

struct Point {
  std::vector<double> coords;
  std::string chart_id;

  int dim() const { return static_cast<int>(coords.size()); }
};

/// Complex scalar with its gradient and Hessian at a point (second-order forward AD).
///
/// A jet of dimension 0 is a constant and combines with jets of any dimension.
class Jet2 {
 public:
  Jet2() = default;
  Jet2(double v) : v_(v) {}  // NOLINT(google-explicit-constructor)
  Jet2(cplx v) : v_(v) {}    // NOLINT(google-explicit-constructor)
  Jet2(int n, cplx v);

  static Jet2 constant(int n, cplx v) { return Jet2(n, v); }
  static Jet2 variable(int n, int i, double v);

  int dim() const { return n_; }
  cplx value() const { return v_; }
  cplx grad(int i) const { return n_ ? g_[i] : cplx{}; }
  cplx hess(int i, int j) const { return n_ ? h_[i * kMaxDim + j] : cplx{}; }

  void set_value(cplx v) { v_ = v; }
  void set_grad(int i, cplx v) { g_[i] = v; }
  /// Sets both (i,j) and (j,i).
  void set_hess(int i, int j, cplx v) {
    h_[i * kMaxDim + j] = v;
    h_[j * kMaxDim + i] = v;
  }

  /// First partial ∂_k as a jet. Its second derivatives are not tracked (left zero),
  /// so only value and gradient of the result are meaningful.
  Jet2 partial(int k) const;

  /// Derivative along a direction with constant components: Σ_k v^k ∂_k, first order only.
  Jet2 directional(const std::vector<cplx>& v) const;

  bool is_finite() const;

  Jet2& operator+=(const Jet2& o);
  Jet2& operator-=(const Jet2& o);
  Jet2& operator*=(const Jet2& o);
  Jet2& operator/=(const Jet2& o);

  friend Jet2 operator-(const Jet2& a);
  friend Jet2 operator+(Jet2 a, const Jet2& b) { return a += b; }
  friend Jet2 operator-(Jet2 a, const Jet2& b) { return a -= b; }
  friend Jet2 operator*(const Jet2& a, const Jet2& b);
  friend Jet2 operator/(const Jet2& a, const Jet2& b);

  /// Applies an analytic function given its value and first two derivatives at the value.
  friend Jet2 chain(const Jet2& u, cplx f0, cplx f1, cplx f2);

 private:
  int n_ = 0;
  cplx v_{};
  std::array<cplx, kMaxDim> g_{};
  std::array<cplx, kMaxDim * kMaxDim> h_{};
};

Jet2 chain(const Jet2& u, cplx f0, cplx f1, cplx f2);

/// Division with an explicit singularity threshold on |b|.
Jet2 divide(const Jet2& a, const Jet2& b, double epsilon);

Jet2 sqrt(const Jet2& u);
Jet2 pow(const Jet2& u, double r);
Jet2 pow(const Jet2& u, int k);
Jet2 exp(const Jet2& u);
Jet2 log(const Jet2& u);
Jet2 sin(const Jet2& u);
Jet2 cos(const Jet2& u);

/// Principal square root with the branch cut approached from above (−4 ↦ 2i regardless of
/// the sign of a zero imaginary part).
cplx principal_sqrt(cplx z);

Jet2 lift_coordinate(int i, const Point& p);
std::vector<Jet2> lift_coordinates(const Point& p);

using ScalarField = std::function<Jet2(const Point&)>;

/// Runs f and attaches p to any singular-evaluation error it raises.
template <class F>
auto at_point(const Point& p, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const SingularEvaluation& e) {
    if (!e.point().empty()) throw;
    throw SingularEvaluation(e.what(), p.coords);
  }
}

/// Dense matrix of jets (row-major). Used for metrics, coframes and their inverses.
class JetMatrix {
 public:
  JetMatrix() = default;
  JetMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  Jet2& operator()(int i, int j) { return data_[i * cols_ + j]; }
  const Jet2& operator()(int i, int j) const { return data_[i * cols_ + j]; }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<Jet2> data_;
};

/// Inverse of a square jet matrix with exact first and second derivatives.
JetMatrix inverse(const JetMatrix& a, int dim);
/// Determinant with exact first and second derivatives.
Jet2 determinant(const JetMatrix& a, int dim);

}  // namespace yano
