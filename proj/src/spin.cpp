#include "yano/spin.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "yano/errors.hpp"

namespace yano {

namespace {

int below(Mask s, int mu) { return std::popcount(s & ((1u << mu) - 1u)); }

void check_layout(const FrameLayout& l) {
  if (!l.null || l.m < 1 || l.m > 8) throw std::invalid_argument("spinors need a null layout with 1 ≤ m ≤ 8");
}

FrameLayout layout_for(int m) { return FrameLayout{m, false, true}; }

}  // namespace

Spinor::Spinor(int m_) : m(m_), c(Eigen::VectorXcd::Zero(1 << m_)) {
  if (m_ < 1 || m_ > 8) throw std::invalid_argument("spinor rank out of range");
}

Spinor Spinor::basis(int m, Mask subset) {
  Spinor s(m);
  s.c(subset) = 1.0;
  return s;
}

int Spinor::chirality(double tol) const {
  double even = 0.0, odd = 0.0;
  for (int k = 0; k < size(); ++k) (std::popcount(static_cast<unsigned>(k)) % 2 ? odd : even) += std::norm(c(k));
  const double scale = tol * tol * (even + odd);
  if (even > scale && odd <= scale) return 1;
  if (odd > scale && even <= scale) return -1;
  return 0;
}

Eigen::MatrixXcd gamma_matrix(int a, const FrameLayout& l) {
  check_layout(l);
  const int N = 1 << l.m;
  Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(N, N);
  if (l.odd && a == l.odd_leg()) {
    const cplx s(0.0, 1.0 / std::sqrt(2.0));
    for (int k = 0; k < N; ++k) g(k, k) = std::popcount(static_cast<unsigned>(k)) % 2 ? -s : s;
    return g;
  }
  if (a < 0 || a >= 2 * l.m) throw std::invalid_argument("gamma label out of range");
  const int mu = l.pair_of(a);
  const Mask bit = 1u << mu;
  for (int k = 0; k < N; ++k) {
    const Mask s = static_cast<Mask>(k);
    const double sign = below(s, mu) % 2 ? -1.0 : 1.0;
    if (a == l.lower(mu) && (s & bit)) g(s ^ bit, s) = -sign;
    if (a == l.upper(mu) && !(s & bit)) g(s | bit, s) = sign;
  }
  return g;
}

Eigen::MatrixXcd gamma_product(const std::vector<int>& labels, const FrameLayout& l) {
  const int N = 1 << l.m;
  const int p = static_cast<int>(labels.size());
  if (p == 0) return Eigen::MatrixXcd::Identity(N, N);
  std::vector<Eigen::MatrixXcd> g;
  for (int a : labels) g.push_back(gamma_matrix(a, l));
  std::vector<int> perm(p);
  std::iota(perm.begin(), perm.end(), 0);
  Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(N, N);
  double count = 0.0;
  do {
    int inversions = 0;
    for (int i = 0; i < p; ++i)
      for (int j = i + 1; j < p; ++j) inversions += perm[i] > perm[j];
    Eigen::MatrixXcd prod = g[perm[0]];
    for (int i = 1; i < p; ++i) prod = prod * g[perm[i]];
    sum += (inversions % 2 ? -1.0 : 1.0) * prod;
    count += 1.0;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return sum / count;
}

Spinor clifford_mul(const CliffordVector& v, const Spinor& zeta) {
  const int m = zeta.m;
  if (v.X.size() != m || v.xi.size() != m) throw std::invalid_argument("Clifford vector rank mismatch");
  const FrameLayout l{m, v.odd != 0.0, true};
  Spinor out(m);
  for (int mu = 0; mu < m; ++mu) {
    if (v.X(mu) != 0.0) out.c += v.X(mu) * (gamma_matrix(l.lower(mu), l) * zeta.c);
    if (v.xi(mu) != 0.0) out.c += v.xi(mu) * (gamma_matrix(l.upper(mu), l) * zeta.c);
  }
  if (v.odd != 0.0) out.c += v.odd * (gamma_matrix(l.odd_leg(), l) * zeta.c);
  return out;
}

Eigen::MatrixXcd form_action_matrix(const PForm& alpha, const FrameLayout& l) {
  check_layout(l);
  if (alpha.dim() != l.size()) throw std::invalid_argument("form dimension does not match the frame");
  const int p = alpha.degree();
  if (p > l.size()) throw std::invalid_argument("form degree exceeds dimension");
  const int N = 1 << l.m;
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(N, N);
  const double rev = (p * (p - 1) / 2) % 2 ? -1.0 : 1.0;
  const auto& masks = alpha.masks();
  for (size_t k = 0; k < masks.size(); ++k) {
    if (alpha[k] == 0.0) continue;
    std::vector<int> raised;
    for (int a : exterior::indices(masks[k])) raised.push_back(l.dual(a));
    out += rev * alpha[k] * gamma_product(raised, l);
  }
  return out;
}

Spinor form_action(const PForm& alpha, const FrameLayout& l, const Spinor& zeta) {
  if (zeta.m != l.m) throw std::invalid_argument("spinor rank does not match the frame");
  Spinor out(l.m);
  out.c = form_action_matrix(alpha, l) * zeta.c;
  return out;
}

cplx cky_spin_eigenvalue(const std::vector<cplx>& lambda, Mask subset) {
  cplx s = 0.0;
  for (size_t mu = 0; mu < lambda.size(); ++mu) s += (subset >> mu) & 1u ? -lambda[mu] : lambda[mu];
  return -0.5 * s;
}

PurityResult purity_test(const Spinor& zeta, double tol) {
  if (zeta.norm() == 0.0) throw PreconditionFailed("purity of the zero spinor");
  const int m = zeta.m;
  const FrameLayout l = layout_for(m);
  PurityResult r;
  r.chiral = zeta.chirality(tol) != 0;
  Eigen::MatrixXcd map(1 << m, 2 * m);
  for (int a = 0; a < 2 * m; ++a) map.col(a) = gamma_matrix(a, l) * zeta.c;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(map, Eigen::ComputeFullV);
  const Eigen::VectorXd s = svd.singularValues();
  int rank = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s(i) > tol * zeta.norm()) ++rank;
  r.dim = 2 * m - rank;
  r.basis = svd.matrixV().rightCols(r.dim);
  r.pure = r.chiral && r.dim == m;
  return r;
}

cplx spinor_pairing(const Spinor& eta, const Spinor& zeta) {
  if (eta.m != zeta.m) throw std::invalid_argument("spinor rank mismatch");
  const int m = zeta.m;
  const Mask full = exterior::full_mask(m);
  cplx s = 0.0;
  for (int k = 0; k < eta.size(); ++k) {
    const Mask a = static_cast<Mask>(k);
    const int d = std::popcount(a);
    const double rev = (d * (d - 1) / 2) % 2 ? -1.0 : 1.0;
    s += rev * exterior::wedge_sign(a, full ^ a) * eta.c(a) * zeta.c(full ^ a);
  }
  return s;
}

PForm spinor_bilinear(const Spinor& eta, const Spinor& zeta, int p, const FrameLayout& l) {
  if (eta.m != l.m || zeta.m != l.m) throw std::invalid_argument("spinor rank does not match the frame");
  PForm out(l.size(), p);
  const auto& masks = out.masks();
  for (size_t k = 0; k < masks.size(); ++k) {
    Spinor g(l.m);
    g.c = gamma_product(exterior::indices(masks[k]), l) * zeta.c;
    out[k] = spinor_pairing(eta, g);
  }
  return out;
}

SpinorField constant_spinor_field(const Spinor& zeta) {
  return SpinorField{zeta.m, [zeta](const Point& p) {
                       const int n = static_cast<int>(p.coords.size());
                       std::vector<Jet2> out;
                       for (int k = 0; k < zeta.size(); ++k) out.emplace_back(n, zeta.c(k));
                       return out;
                     }};
}

Eigen::MatrixXcd spin_connection(const FramedGeometry& fg, int a) {
  const FrameLayout& l = fg.layout();
  const int n = l.size();
  const Tensor& G = fg.connection_lowered();
  const int N = 1 << l.m;
  Eigen::MatrixXcd om = Eigen::MatrixXcd::Zero(N, N);
  // the pairing is a label permutation, so raising b, c is relabelling
  for (int b = 0; b < n; ++b)
    for (int c = 0; c < n; ++c) {
      const cplx w = G(a, l.dual(b), l.dual(c));
      if (w != 0.0) om += 0.5 * w * gamma_matrix(b, l) * gamma_matrix(c, l);
    }
  return om;
}

Spinor spinor_value(const SpinorField& zeta, const Point& p) {
  const auto jets = at_point(p, [&] { return zeta.eval(p); });
  Spinor s(zeta.m);
  if (static_cast<int>(jets.size()) != s.size()) throw std::invalid_argument("spinor field has the wrong size");
  for (int k = 0; k < s.size(); ++k) s.c(k) = jets[k].value();
  return s;
}

Spinor spinor_covariant_derivative(const SpinorField& zeta, const FramedGeometry& fg, int a) {
  const Point& p = fg.local().point();
  const auto jets = at_point(p, [&] { return zeta.eval(p); });
  if (zeta.m != fg.layout().m || static_cast<int>(jets.size()) != (1 << zeta.m))
    throw std::invalid_argument("spinor field does not match the frame");
  Spinor val(zeta.m), out(zeta.m);
  for (int k = 0; k < val.size(); ++k) {
    val.c(k) = jets[k].value();
    out.c(k) = fg.derivative(a, jets[k]);
  }
  out.c += spin_connection(fg, a) * val.c;
  return out;
}

double spinor_integrability_residual(const SpinorField& zeta, const FramedGeometry& fg) {
  const FrameLayout& l = fg.layout();
  const Spinor z = spinor_value(zeta, fg.local().point());
  const PurityResult pr = purity_test(z);
  if (!pr.pure) throw PreconditionFailed("integrability needs a pure spinor");
  std::vector<Spinor> d;
  for (int a = 0; a < 2 * l.m; ++a) d.push_back(spinor_covariant_derivative(zeta, fg, a));
  const double gscale = fg.connection_lowered().max_abs();
  double r = 0.0;
  for (int k = 0; k < pr.dim; ++k) {
    Eigen::VectorXcd dx = Eigen::VectorXcd::Zero(z.size());
    for (int a = 0; a < 2 * l.m; ++a) dx += pr.basis(a, k) * d[a].c;
    const cplx f = z.c.dot(dx) / z.c.squaredNorm();
    const double num = (dx - f * z.c).norm();
    if (num == 0.0) continue;
    r = std::max(r, num / (dx.norm() + z.norm() * gscale));
  }
  return r;
}

FlaggedResidual weyl_spin_residual(const Tensor& w, const FrameLayout& l, Mask subset) {
  check_layout(l);
  if (l.odd) throw PreconditionFailed("the Weyl spinor test is for even dimension");
  if (w.rank() != 4 || w.dim() != l.size()) throw std::invalid_argument("weyl_spin_residual needs frame Weyl components");
  const double scale = w.max_abs();
  if (scale < kVacuousNorm) return {0.0, true};
  const int n = l.size();
  const Spinor z = Spinor::basis(l.m, subset);
  std::vector<Eigen::VectorXcd> gz(n * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) gz[a * n + b] = gamma_product({a, b}, l) * z.c;
  const int N = z.size();
  Eigen::MatrixXcd psi = Eigen::MatrixXcd::Zero(N, N);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          const cplx v = w(l.dual(a), l.dual(b), l.dual(c), l.dual(d));
          if (v != 0.0) psi += 0.25 * v * gz[a * n + b] * gz[c * n + d].transpose();
        }
  // Ψ ∝ ζ⊗ζ iff Ψ vanishes off the (subset, subset) entry for a basis spinor
  double r = 0.0;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      if (i != static_cast<int>(subset) || j != static_cast<int>(subset)) r = std::max(r, std::abs(psi(i, j)));
  return {r / scale, false};
}

}  // namespace yano
