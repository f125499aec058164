#include "yano/exterior.hpp"

#include <algorithm>
#include <array>

namespace yano {
namespace exterior {

namespace {

struct Tables {
  // by_degree[n][p]: masks of p-subsets of {0..n-1}; p = n+1 is the empty list.
  std::array<std::vector<std::vector<Mask>>, kMaxDim + 1> by_degree;
  std::array<std::vector<int>, kMaxDim + 1> index;

  Tables() {
    for (int n = 0; n <= kMaxDim; ++n) {
      by_degree[n].resize(n + 2);
      std::vector<Mask> all(1u << n);
      for (Mask m = 0; m < (1u << n); ++m) all[m] = m;
      // Lexicographic order of sorted tuples equals the order of reversed bit strings.
      auto key = [n](Mask m) {
        std::vector<int> idx;
        for (int i = 0; i < n; ++i)
          if (m & (1u << i)) idx.push_back(i);
        return idx;
      };
      std::sort(all.begin(), all.end(), [&](Mask a, Mask b) { return key(a) < key(b); });
      index[n].assign(1u << n, -1);
      for (Mask m : all) {
        const int p = std::popcount(m);
        index[n][m] = static_cast<int>(by_degree[n][p].size());
        by_degree[n][p].push_back(m);
      }
    }
  }
};

const Tables& tables() {
  static const Tables t;
  return t;
}

}  // namespace

const std::vector<Mask>& basis(int n, int p) {
  if (n < 0 || n > kMaxDim || p < 0 || p > n + 1) throw std::invalid_argument("basis degree out of range");
  return tables().by_degree[n][p];
}

int index_of(int n, Mask m) {
  if (n < 0 || n > kMaxDim || m >= (1u << n)) throw std::out_of_range("mask out of range");
  return tables().index[n][m];
}

int wedge_sign(Mask a, Mask b) {
  if (a & b) return 0;
  int inversions = 0;
  Mask rest = b;
  while (rest) {
    const int j = std::countr_zero(rest);
    rest &= rest - 1;
    inversions += std::popcount(a >> (j + 1));
  }
  return inversions % 2 ? -1 : 1;
}

std::vector<int> indices(Mask m) {
  std::vector<int> idx;
  while (m) {
    idx.push_back(std::countr_zero(m));
    m &= m - 1;
  }
  return idx;
}

std::pair<Mask, int> sort_indices(const std::vector<int>& idx) {
  Mask m = 0;
  int sign = 1;
  for (int i : idx) {
    if (i < 0 || i >= 32) throw std::out_of_range("form index out of range");
    if (m & (1u << i)) return {0, 0};
    if (std::popcount(m >> (i + 1)) % 2) sign = -sign;
    m |= 1u << i;
  }
  return {m, sign};
}

}  // namespace exterior

PForm monomial(int n, const std::vector<int>& idx, cplx coeff) {
  PForm f(n, static_cast<int>(idx.size()));
  f.set(idx, coeff);
  return f;
}

PForm one_form(const std::vector<cplx>& comps) {
  PForm f(static_cast<int>(comps.size()), 1);
  for (size_t i = 0; i < comps.size(); ++i) f[i] = comps[i];
  return f;
}

PForm value_of(const JetForm& f) {
  PForm out(f.dim(), f.degree());
  for (size_t k = 0; k < f.size(); ++k) out[k] = f[k].value();
  return out;
}

double max_abs(const PForm& f) {
  double m = 0.0;
  for (size_t k = 0; k < f.size(); ++k) m = std::max(m, std::abs(f[k]));
  return m;
}

double norm(const PForm& f) {
  double s = 0.0;
  for (size_t k = 0; k < f.size(); ++k) s += std::norm(f[k]);
  return std::sqrt(s);
}

MetricAtPoint::MetricAtPoint(Eigen::MatrixXcd g, double epsilon) : g_(std::move(g)) {
  if (g_.rows() != g_.cols()) throw std::invalid_argument("metric must be square");
  if ((g_ - g_.transpose()).cwiseAbs().maxCoeff() > 1e-14 * std::max(1.0, g_.cwiseAbs().maxCoeff()))
    throw std::invalid_argument("metric is not symmetric");
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(g_);
  det_ = lu.determinant();
  if (std::abs(det_) < epsilon) throw SingularMetric("metric is not invertible");
  ginv_ = lu.inverse();
}

cplx MetricAtPoint::volume_factor() const {
  const double sigma = det_.real() < 0 ? -1.0 : 1.0;
  return principal_sqrt(sigma * det_);
}

cplx MetricAtPoint::hodge_sign() const {
  const cplx v = volume_factor();
  return v * v / det_;
}

std::vector<cplx> MetricAtPoint::flat(const std::vector<cplx>& v) const {
  Eigen::VectorXcd x = Eigen::Map<const Eigen::VectorXcd>(v.data(), v.size());
  Eigen::VectorXcd y = g_ * x;
  return {y.data(), y.data() + y.size()};
}

std::vector<cplx> MetricAtPoint::sharp(const std::vector<cplx>& a) const {
  Eigen::VectorXcd x = Eigen::Map<const Eigen::VectorXcd>(a.data(), a.size());
  Eigen::VectorXcd y = ginv_ * x;
  return {y.data(), y.data() + y.size()};
}

cplx MetricAtPoint::pair(const std::vector<cplx>& u, const std::vector<cplx>& v) const {
  cplx s = 0.0;
  for (int i = 0; i < dim(); ++i)
    for (int j = 0; j < dim(); ++j) s += g_(i, j) * u[i] * v[j];
  return s;
}

std::vector<cplx> MetricAtPoint::inverse_entries() const {
  const int n = dim();
  std::vector<cplx> out(n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out[i * n + j] = ginv_(i, j);
  return out;
}

PForm hodge_star(const PForm& a, const MetricAtPoint& g) {
  if (a.dim() != g.dim()) throw std::invalid_argument("metric dimension mismatch");
  return hodge_star(a, g.inverse_entries(), g.volume_factor());
}

PForm musical_flat(const std::vector<cplx>& v, const MetricAtPoint& g) { return one_form(g.flat(v)); }

std::vector<cplx> musical_sharp(const PForm& a, const MetricAtPoint& g) {
  if (a.degree() != 1) throw std::invalid_argument("sharp requires a 1-form");
  std::vector<cplx> c(a.size());
  for (size_t i = 0; i < a.size(); ++i) c[i] = a[i];
  return g.sharp(c);
}

Eigen::MatrixXcd FrameLayout::pairing() const {
  const int n = size();
  Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(n, n);
  for (int a = 0; a < n; ++a) p(a, dual(a)) = 1.0;
  return p;
}

FrameAtPoint::FrameAtPoint(Eigen::MatrixXcd coframe, FrameLayout layout, double tol)
    : coframe_(std::move(coframe)), layout_(layout) {
  if (coframe_.rows() != coframe_.cols() || coframe_.rows() != layout_.size())
    throw std::invalid_argument("coframe shape does not match frame layout");
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(coframe_);
  if (std::abs(lu.determinant()) < kSingularEpsilon) throw IllConditionedFrame("coframe is singular");
  frame_ = lu.inverse();
  const double defect =
      (coframe_ * frame_ - Eigen::MatrixXcd::Identity(dim(), dim())).cwiseAbs().maxCoeff();
  if (defect > tol) throw IllConditionedFrame("frame duality defect above tolerance");
}

std::vector<cplx> FrameAtPoint::vector(int a) const {
  std::vector<cplx> v(dim());
  for (int i = 0; i < dim(); ++i) v[i] = frame_(i, a);
  return v;
}

std::vector<cplx> FrameAtPoint::covector(int a) const {
  std::vector<cplx> v(dim());
  for (int i = 0; i < dim(); ++i) v[i] = coframe_(a, i);
  return v;
}

PForm FrameAtPoint::to_frame(const PForm& a) const {
  const int n = dim();
  std::vector<cplx> m(n * n);
  for (int i = 0; i < n; ++i)
    for (int b = 0; b < n; ++b) m[i * n + b] = frame_(i, b);
  return transform(a, m);
}

PForm FrameAtPoint::from_frame(const PForm& a) const {
  const int n = dim();
  std::vector<cplx> m(n * n);
  for (int b = 0; b < n; ++b)
    for (int i = 0; i < n; ++i) m[b * n + i] = coframe_(b, i);
  return transform(a, m);
}

double FrameAtPoint::null_defect(const MetricAtPoint& g) const {
  const Eigen::MatrixXcd gf = frame_.transpose() * g.g() * frame_;
  return (gf - layout_.pairing()).cwiseAbs().maxCoeff();
}

}  // namespace yano
