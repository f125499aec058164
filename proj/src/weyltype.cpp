#include "yano/weyltype.hpp"

#include <algorithm>
#include <cmath>

#include "yano/errors.hpp"

namespace yano {

namespace {

TwoFormOperator empty_operator(const Eigen::MatrixXcd& g) {
  TwoFormOperator op;
  op.n = static_cast<int>(g.rows());
  for (Mask m : exterior::basis(op.n, 2)) {
    const auto idx = exterior::indices(m);
    op.basis.push_back({idx[0], idx[1]});
  }
  const int N = static_cast<int>(op.basis.size());
  const Eigen::MatrixXcd gi = g.inverse();
  op.matrix = Eigen::MatrixXcd::Zero(N, N);
  op.gram.resize(N, N);
  for (int r = 0; r < N; ++r)
    for (int s = 0; s < N; ++s) {
      const auto [a, b] = op.basis[r];
      const auto [c, d] = op.basis[s];
      op.gram(r, s) = gi(a, c) * gi(b, d) - gi(a, d) * gi(b, c);
    }
  return op;
}

double relative(double num, double den) {
  if (num == 0.0) return 0.0;
  return num / std::max(den, 1e-300);
}

}  // namespace

int TwoFormOperator::index(int a, int b) const { return exterior::index_of(n, (1u << a) | (1u << b)); }

Eigen::VectorXcd TwoFormOperator::components(const PForm& alpha) const {
  if (alpha.dim() != n || alpha.degree() != 2) throw std::invalid_argument("operator expects a 2-form");
  Eigen::VectorXcd v(basis.size());
  for (size_t k = 0; k < basis.size(); ++k) v(k) = alpha[k];
  return v;
}

PForm TwoFormOperator::apply(const PForm& alpha) const {
  const Eigen::VectorXcd v = matrix * components(alpha);
  PForm out(n, 2);
  for (size_t k = 0; k < basis.size(); ++k) out[k] = v(k);
  return out;
}

double TwoFormOperator::skew_defect() const {
  const Eigen::MatrixXcd b = gram * matrix;
  return relative((b + b.transpose()).cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff());
}

double TwoFormOperator::symmetry_defect() const {
  const Eigen::MatrixXcd b = gram * matrix;
  return relative((b - b.transpose()).cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff());
}

TwoFormOperator phi_hat(const PForm& phi, const Eigen::MatrixXcd& g) {
  const int n = static_cast<int>(g.rows());
  if (phi.dim() != n || phi.degree() != 2) throw std::invalid_argument("phi_hat expects a 2-form of the metric's dimension");
  TwoFormOperator op = empty_operator(g);
  const Eigen::MatrixXcd gi = g.inverse();
  Eigen::MatrixXcd f = Eigen::MatrixXcd::Zero(n, n);  // F^a_b = g^{ac} φ_cb
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) f(a, b) += gi(a, c) * phi.component({c, b});
  // (φ̂α)_ab = −α_cb F^c_a − α_ac F^c_b
  const int N = static_cast<int>(op.basis.size());
  for (int s = 0; s < N; ++s) {
    Eigen::MatrixXcd alpha = Eigen::MatrixXcd::Zero(n, n);
    alpha(op.basis[s][0], op.basis[s][1]) = 1.0;
    alpha(op.basis[s][1], op.basis[s][0]) = -1.0;
    const Eigen::MatrixXcd img = -(f.transpose() * alpha) - alpha * f;
    for (int r = 0; r < N; ++r) op.matrix(r, s) = img(op.basis[r][0], op.basis[r][1]);
  }
  return op;
}

TwoFormOperator curvature_hat(const Tensor& c, const Eigen::MatrixXcd& g) {
  const int n = static_cast<int>(g.rows());
  if (c.rank() != 4 || c.dim() != n) throw std::invalid_argument("curvature_hat expects a rank-4 tensor");
  TwoFormOperator op = empty_operator(g);
  const Eigen::MatrixXcd gi = g.inverse();
  const int N = static_cast<int>(op.basis.size());
  // C_ab^cd α_cd summed over c < d
  for (int r = 0; r < N; ++r)
    for (int s = 0; s < N; ++s) {
      const auto [a, b] = op.basis[r];
      const auto [c0, d0] = op.basis[s];
      cplx v = 0.0;
      for (int e = 0; e < n; ++e)
        for (int f = 0; f < n; ++f) v += c(a, b, e, f) * gi(e, c0) * gi(f, d0);
      op.matrix(r, s) = v;
    }
  return op;
}

Tensor weyl_part(const Tensor& r, const Eigen::MatrixXcd& g) {
  const int n = r.dim();
  if (r.rank() != 4 || g.rows() != n || n < 3) throw std::invalid_argument("weyl_part expects a rank-4 tensor, n ≥ 3");
  const Eigen::MatrixXcd gi = g.inverse();
  Eigen::MatrixXcd ric = Eigen::MatrixXcd::Zero(n, n);
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < n; ++l)
      for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) ric(j, l) += gi(i, k) * r(k, j, i, l);
  cplx scalar = 0.0;
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < n; ++l) scalar += gi(j, l) * ric(j, l);
  const double a = 1.0 / (n - 2);
  const cplx b = scalar / static_cast<double>((n - 1) * (n - 2));
  Tensor w(n, 4);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          w(i, j, k, l) = r(i, j, k, l) -
                          a * (g(i, k) * ric(j, l) - g(i, l) * ric(j, k) - g(j, k) * ric(i, l) + g(j, l) * ric(i, k)) +
                          b * (g(i, k) * g(j, l) - g(i, l) * g(j, k));
  return w;
}

FlaggedResidual commutator_residual(const TwoFormOperator& c, const TwoFormOperator& phi) {
  if (c.n != phi.n) throw std::invalid_argument("operators act on different spaces");
  const double nc = c.matrix.norm();
  if (nc < kVacuousNorm) return {0.0, true};
  const Eigen::MatrixXcd k = c.matrix * phi.matrix - phi.matrix * c.matrix;
  return {relative(k.norm(), nc * phi.matrix.norm()), false};
}

std::vector<cplx> phi_hat_spectrum(const std::vector<cplx>& lambda, bool odd) {
  const int m = static_cast<int>(lambda.size());
  std::vector<cplx> out;
  for (int mu = 0; mu < m; ++mu)
    for (int nu = 0; nu < m; ++nu) {
      out.push_back(lambda[mu] - lambda[nu]);
      if (mu < nu) {
        out.push_back(lambda[mu] + lambda[nu]);
        out.push_back(-(lambda[mu] + lambda[nu]));
      }
    }
  if (odd)
    for (const cplx& l : lambda) {
      out.push_back(l);
      out.push_back(-l);
    }
  return out;
}

bool type_d_permitted(const std::array<int, 4>& labels, const FrameLayout& l) {
  std::vector<int> balance(l.m, 0);
  int odd = 0;
  for (int a : labels) {
    if (l.odd && a == l.odd_leg())
      ++odd;
    else
      balance[l.pair_of(a)] += a < l.m ? 1 : -1;
  }
  if (odd % 2) return false;
  return std::all_of(balance.begin(), balance.end(), [](int b) { return b == 0; });
}

FlaggedResidual type_d_residual(const Tensor& w, const FrameLayout& l) {
  if (!l.null || w.rank() != 4 || w.dim() != l.size()) throw std::invalid_argument("type_d_residual needs null-frame Weyl components");
  const double scale = w.max_abs();
  if (scale < kVacuousNorm) return {0.0, true};
  const int n = l.size();
  double r = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d)
          if (!type_d_permitted({a, b, c, d}, l)) r = std::max(r, std::abs(w(a, b, c, d)));
  return {r / scale, false};
}

FlaggedResidual wand_residual(const Tensor& w, const std::vector<cplx>& k, const Eigen::MatrixXcd& g, double null_tol) {
  const int n = w.dim();
  if (static_cast<int>(k.size()) != n || g.rows() != n) throw std::invalid_argument("wand_residual dimension mismatch");
  Eigen::VectorXcd kv(n);
  for (int i = 0; i < n; ++i) kv(i) = k[i];
  if (kv.norm() == 0.0) throw PreconditionFailed("WAND candidate is zero");
  kv /= kv.norm();
  if (std::abs((kv.transpose() * g * kv).value()) > null_tol * g.cwiseAbs().maxCoeff())
    throw PreconditionFailed("WAND candidate is not null");
  const double scale = w.max_abs();
  if (scale < kVacuousNorm) return {0.0, true};
  // orthonormal basis of k^⊥ = ker (kᵀg)
  const Eigen::RowVectorXcd row = kv.transpose() * g;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(row, Eigen::ComputeFullV);
  const Eigen::MatrixXcd perp = svd.matrixV().rightCols(n - 1);
  // C(k, ·, k, ·) as an n×n matrix, then restricted
  Eigen::MatrixXcd ck = Eigen::MatrixXcd::Zero(n, n);
  for (int a = 0; a < n; ++a)
    for (int c = 0; c < n; ++c) {
      const cplx kk = kv(a) * kv(c);
      if (kk == 0.0) continue;
      for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) ck(x, y) += kk * w(a, x, c, y);
    }
  const Eigen::MatrixXcd r = perp.transpose() * ck * perp;
  return {r.cwiseAbs().maxCoeff() / scale, false};
}

FlaggedResidual wand_residual(const Tensor& w, int a, const FrameLayout& l) {
  std::vector<cplx> k(l.size(), 0.0);
  k.at(a) = 1.0;
  return wand_residual(w, k, l.pairing());
}

bool TypeDReport::passes(double tol) const {
  if (components.value >= tol || commutator.value >= tol) return false;
  return std::all_of(wand.begin(), wand.end(), [tol](const FlaggedResidual& r) { return r.value < tol; });
}

TypeDReport type_d_report(const MetricField& g, const CoframeField& nf, const FormField& phi, const Point& p) {
  FramedGeometry fg(g, nf, p);
  const FrameLayout& l = fg.layout();
  const Tensor w = fg.project(fg.local().curvature().weyl);
  const Eigen::MatrixXcd pairing = l.pairing();
  const PForm phi_f = fg.frame().to_frame(value_of(phi.eval(p)));
  TypeDReport rep;
  rep.components = type_d_residual(w, l);
  const TwoFormOperator ph = phi_hat(phi_f, pairing);
  rep.commutator = commutator_residual(curvature_hat(w, pairing), ph);
  for (int a = 0; a < l.size(); ++a)
    if (!(l.odd && a == l.odd_leg())) rep.wand.push_back(wand_residual(w, a, l));
  std::vector<cplx> lambda;
  for (int mu = 0; mu < l.m; ++mu) lambda.push_back(phi_f.component({l.lower(mu), l.upper(mu)}));
  const std::vector<cplx> expect = phi_hat_spectrum(lambda, l.odd);
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(ph.matrix, false);
  std::vector<cplx> got(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  double rho = 1.0;
  for (const cplx& e : expect) rho = std::max(rho, std::abs(e));
  double err = 0.0;
  for (const cplx& e : expect) {
    auto it = std::min_element(got.begin(), got.end(),
                               [&](const cplx& x, const cplx& y) { return std::abs(x - e) < std::abs(y - e); });
    err = std::max(err, std::abs(*it - e));
    got.erase(it);
  }
  rep.spectrum = err / rho;
  return rep;
}

}  // namespace yano
