#pragma once

#include <Eigen/Dense>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "yano/jet.hpp"

namespace yano {

/// Strictly increasing index tuples are stored as bitmasks over {0..n-1}.
using Mask = unsigned;

namespace exterior {

/// Masks of all p-subsets of {0..n-1}, in lexicographic order of the sorted tuples.
const std::vector<Mask>& basis(int n, int p);
/// Position of a mask inside basis(n, popcount(mask)).
int index_of(int n, Mask m);
/// Sign of the permutation sorting the concatenation (a, b); 0 if a and b overlap.
int wedge_sign(Mask a, Mask b);
std::vector<int> indices(Mask m);
/// Mask of an index list together with the sign of the sorting permutation (0 on repeats).
std::pair<Mask, int> sort_indices(const std::vector<int>& idx);

inline Mask full_mask(int n) { return n >= 32 ? ~0u : (1u << n) - 1u; }

}  // namespace exterior

/// Degree-p antisymmetric tensor over dimension n, canonical components only.
template <class S>
class BasicForm {
 public:
  BasicForm() = default;
  BasicForm(int n, int p) : n_(n), p_(p) {
    if (n < 0 || n > kMaxDim || p < 0) throw std::invalid_argument("form degree out of range");
    // p > n is the zero form of that degree: it has no components.
    if (p <= n) c_.assign(exterior::basis(n, p).size(), S{});
  }

  int dim() const { return n_; }
  int degree() const { return p_; }
  size_t size() const { return c_.size(); }
  const std::vector<Mask>& masks() const { return exterior::basis(n_, p_ <= n_ ? p_ : n_ + 1); }

  S& operator[](size_t k) { return c_[k]; }
  const S& operator[](size_t k) const { return c_[k]; }
  S& at(Mask m) { return c_[exterior::index_of(n_, m)]; }
  const S& at(Mask m) const { return c_[exterior::index_of(n_, m)]; }

  /// Component with an arbitrary (possibly unsorted or repeated) index list.
  S component(const std::vector<int>& idx) const {
    auto [m, s] = exterior::sort_indices(idx);
    if (s == 0) return S{};
    return s > 0 ? at(m) : S{} - at(m);
  }
  void set(const std::vector<int>& idx, const S& v) {
    auto [m, s] = exterior::sort_indices(idx);
    if (s == 0) throw std::invalid_argument("repeated index in form component");
    at(m) = s > 0 ? v : S{} - v;
  }

  BasicForm& operator+=(const BasicForm& o) {
    check_same(o);
    for (size_t k = 0; k < c_.size(); ++k) c_[k] += o.c_[k];
    return *this;
  }
  BasicForm& operator-=(const BasicForm& o) {
    check_same(o);
    for (size_t k = 0; k < c_.size(); ++k) c_[k] -= o.c_[k];
    return *this;
  }
  BasicForm& operator*=(const S& s) {
    for (auto& v : c_) v = v * s;
    return *this;
  }
  friend BasicForm operator+(BasicForm a, const BasicForm& b) { return a += b; }
  friend BasicForm operator-(BasicForm a, const BasicForm& b) { return a -= b; }
  friend BasicForm operator*(BasicForm a, const S& s) { return a *= s; }
  friend BasicForm operator*(const S& s, BasicForm a) { return a *= s; }

 private:
  void check_same(const BasicForm& o) const {
    if (o.n_ != n_ || o.p_ != p_) throw std::invalid_argument("form shape mismatch");
  }

  int n_ = 0;
  int p_ = 0;
  std::vector<S> c_;
};

using PForm = BasicForm<cplx>;
using JetForm = BasicForm<Jet2>;

/// Basis monomial dx^{i1}∧…∧dx^{ip} (indices in any order, sign applied).
PForm monomial(int n, const std::vector<int>& idx, cplx coeff = 1.0);
PForm one_form(const std::vector<cplx>& comps);

PForm value_of(const JetForm& f);
double max_abs(const PForm& f);
double norm(const PForm& f);

template <class S>
BasicForm<S> wedge(const BasicForm<S>& a, const BasicForm<S>& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("wedge of forms of different dimension");
  const int n = a.dim();
  const int p = a.degree() + b.degree();
  BasicForm<S> out(n, p);
  if (p > n) return out;
  const auto& ma = a.masks();
  const auto& mb = b.masks();
  for (size_t i = 0; i < ma.size(); ++i) {
    for (size_t j = 0; j < mb.size(); ++j) {
      const int s = exterior::wedge_sign(ma[i], mb[j]);
      if (s == 0) continue;
      const S prod = a[i] * b[j];
      if (s > 0)
        out.at(ma[i] | mb[j]) += prod;
      else
        out.at(ma[i] | mb[j]) -= prod;
    }
  }
  return out;
}

/// Interior product X⌟a for a vector with components X^i.
template <class S>
BasicForm<S> interior(const std::vector<S>& x, const BasicForm<S>& a) {
  if (a.degree() == 0) throw std::invalid_argument("interior product of a 0-form");
  if (static_cast<int>(x.size()) != a.dim()) throw std::invalid_argument("vector dimension mismatch");
  const int n = a.dim();
  BasicForm<S> out(n, a.degree() - 1);
  const auto& ma = a.masks();
  for (size_t k = 0; k < ma.size(); ++k) {
    int pos = 0;
    for (int i = 0; i < n; ++i) {
      if (!(ma[k] & (1u << i))) continue;
      const S term = x[i] * a[k];
      if (pos % 2 == 0)
        out.at(ma[k] & ~(1u << i)) += term;
      else
        out.at(ma[k] & ~(1u << i)) -= term;
      ++pos;
    }
  }
  return out;
}

/// Minors det(M[I, K]) for all p-subsets I (rows) and K (columns) of an n×n matrix, stored
/// as table[index_of(I) * C(n,p) + index_of(K)].
template <class S>
std::vector<S> minor_table(const std::vector<S>& m, int n, int p) {
  if (p == 0) return {S(1.0)};
  const auto& b1 = exterior::basis(n, 1);
  std::vector<S> prev(b1.size() * b1.size());
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) prev[i * n + k] = m[i * n + k];
  for (int q = 2; q <= p; ++q) {
    const auto& bq = exterior::basis(n, q);
    const size_t nq = bq.size();
    const size_t nprev = exterior::basis(n, q - 1).size();
    std::vector<S> cur(nq * nq);
    for (size_t ri = 0; ri < nq; ++ri) {
      const Mask rows = bq[ri];
      const int i0 = std::countr_zero(rows);
      const int rest_idx = exterior::index_of(n, rows & ~(1u << i0));
      for (size_t ci = 0; ci < nq; ++ci) {
        const Mask cols = bq[ci];
        S acc{};
        int j = 0;
        for (int k = 0; k < n; ++k) {
          if (!(cols & (1u << k))) continue;
          const S term = m[i0 * n + k] * prev[rest_idx * nprev + exterior::index_of(n, cols & ~(1u << k))];
          if (j % 2 == 0)
            acc += term;
          else
            acc -= term;
          ++j;
        }
        cur[ri * nq + ci] = acc;
      }
    }
    prev = std::move(cur);
  }
  return prev;
}

/// Change of basis: out_A = Σ_I a_I det(M[I, A]). With M(i,a) = V_a^i this evaluates a on the
/// vectors V_a; with M = g^{-1} it raises every index.
template <class S>
BasicForm<S> transform(const BasicForm<S>& a, const std::vector<S>& m) {
  const int n = a.dim();
  const int p = a.degree();
  BasicForm<S> out(n, p);
  const std::vector<S> minors = minor_table(m, n, p);
  const size_t np = a.size();
  for (size_t i = 0; i < np; ++i)
    for (size_t k = 0; k < np; ++k) out[k] += a[i] * minors[i * np + k];
  return out;
}

/// Hodge star (*a)_J = vol · ε(I,J) · a^I with I the complement of J.
template <class S>
BasicForm<S> hodge_star(const BasicForm<S>& a, const std::vector<S>& ginv, const S& volume) {
  const int n = a.dim();
  const int p = a.degree();
  const BasicForm<S> raised = transform(a, ginv);
  BasicForm<S> out(n, n - p);
  const Mask all = exterior::full_mask(n);
  const auto& mo = out.masks();
  for (size_t k = 0; k < mo.size(); ++k) {
    const Mask i = all & ~mo[k];
    const int s = exterior::wedge_sign(i, mo[k]);
    const S v = raised.at(i) * volume;
    out[k] = s > 0 ? v : S{} - v;
  }
  return out;
}

/// Complex symmetric metric at a point with cached inverse and determinant.
class MetricAtPoint {
 public:
  explicit MetricAtPoint(Eigen::MatrixXcd g, double epsilon = kSingularEpsilon);

  int dim() const { return static_cast<int>(g_.rows()); }
  const Eigen::MatrixXcd& g() const { return g_; }
  const Eigen::MatrixXcd& inverse() const { return ginv_; }
  cplx det() const { return det_; }
  /// √(σ det g) with σ the sign of Re det g; equals √|det g| for real metrics.
  cplx volume_factor() const;
  /// The factor vol²/det g in ** = (−1)^{p(n−p)} · factor; sgn(det g) for real metrics.
  cplx hodge_sign() const;

  std::vector<cplx> flat(const std::vector<cplx>& v) const;
  std::vector<cplx> sharp(const std::vector<cplx>& a) const;
  cplx pair(const std::vector<cplx>& u, const std::vector<cplx>& v) const;
  std::vector<cplx> inverse_entries() const;

 private:
  Eigen::MatrixXcd g_;
  Eigen::MatrixXcd ginv_;
  cplx det_;
};

PForm hodge_star(const PForm& a, const MetricAtPoint& g);
PForm musical_flat(const std::vector<cplx>& v, const MetricAtPoint& g);
std::vector<cplx> musical_sharp(const PForm& a, const MetricAtPoint& g);

/// Frame labels: a < m is V_μ (dual to θ^μ), m ≤ a < 2m is V^μ (dual to θ_μ), a = 2m the odd leg.
struct FrameLayout {
  int m = 0;
  bool odd = false;
  bool null = true;

  int size() const { return 2 * m + (odd ? 1 : 0); }
  int lower(int mu) const { return mu; }
  int upper(int mu) const { return m + mu; }
  int odd_leg() const { return 2 * m; }
  /// Label whose vector pairs with a under the frame metric.
  int dual(int a) const {
    if (!null) return a;
    if (a == 2 * m) return a;
    return a < m ? a + m : a - m;
  }
  /// Pair index μ for a null label, m for the odd leg.
  int pair_of(int a) const { return a == 2 * m ? m : a % m; }
  /// Constant frame metric g(V_a, V_b).
  Eigen::MatrixXcd pairing() const;
};

/// Coframe θ^a (rows of coframe) and dual frame V_a (columns of frame) at a point.
class FrameAtPoint {
 public:
  FrameAtPoint(Eigen::MatrixXcd coframe, FrameLayout layout, double tol = 1e-10);

  const FrameLayout& layout() const { return layout_; }
  int dim() const { return static_cast<int>(coframe_.rows()); }
  const Eigen::MatrixXcd& coframe() const { return coframe_; }
  const Eigen::MatrixXcd& frame() const { return frame_; }
  std::vector<cplx> vector(int a) const;
  std::vector<cplx> covector(int a) const;
  Eigen::MatrixXcd pairing() const { return layout_.pairing(); }

  /// Frame components a(V_{a1},…,V_{ap}) of a coordinate form.
  PForm to_frame(const PForm& a) const;
  /// Coordinate components of a form given by frame components.
  PForm from_frame(const PForm& a) const;
  /// Largest deviation of g(V_a, V_b) from the declared pairing.
  double null_defect(const MetricAtPoint& g) const;

 private:
  Eigen::MatrixXcd coframe_;
  Eigen::MatrixXcd frame_;
  FrameLayout layout_;
};

}  // namespace yano
