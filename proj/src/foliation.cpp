#include "yano/foliation.hpp"

#include <algorithm>
#include <cmath>

namespace yano {

namespace {

double ratio(double num, double den) {
  if (num == 0.0) return 0.0;
  return num / std::max(den, 1e-300);
}

void check_selector(const DistributionSelector& sel, const FrameLayout& l) {
  if (l.m < 1 || l.m >= 32 || sel.mask >= (1u << l.m)) throw std::invalid_argument("selector mask out of range");
  if (sel.adjoin_odd && !l.odd) throw std::invalid_argument("no odd leg to adjoin");
  if (!l.null) throw std::invalid_argument("distributions need a null frame");
}

// max over a, b in `in` and c outside of |T(a,b,c)|, against max |T|
double projected(const Tensor& t, const std::vector<int>& in, int n) {
  std::vector<bool> inside(n, false);
  for (int a : in) inside[a] = true;
  double r = 0.0;
  for (int a : in)
    for (int b : in)
      for (int c = 0; c < n; ++c)
        if (!inside[c]) r = std::max(r, std::abs(t(a, b, c)));
  return ratio(r, t.max_abs());
}

}  // namespace

std::string DistributionSelector::label(int m) const {
  std::string s;
  for (int mu = 0; mu < m; ++mu) s += (mask >> mu) & 1u ? "^" : "_";
  if (adjoin_odd) s += "0";
  return s;
}

std::vector<DistributionSelector> enumerate_distributions(int m, bool adjoin_odd) {
  if (m < 1 || m >= 32) throw std::invalid_argument("enumerate_distributions needs m ≥ 1");
  std::vector<DistributionSelector> out;
  for (unsigned s = 0; s < (1u << m); ++s) out.push_back({s, adjoin_odd});
  return out;
}

std::vector<int> spanning_labels(const DistributionSelector& sel, const FrameLayout& l) {
  check_selector(sel, l);
  std::vector<int> out;
  for (int mu = 0; mu < l.m; ++mu) out.push_back((sel.mask >> mu) & 1u ? l.upper(mu) : l.lower(mu));
  if (sel.adjoin_odd) out.push_back(l.odd_leg());
  return out;
}

std::vector<int> annihilator_labels(const DistributionSelector& sel, const FrameLayout& l) {
  const std::vector<int> in = spanning_labels(sel, l);
  std::vector<int> out;
  for (int a = 0; a < l.size(); ++a)
    if (std::find(in.begin(), in.end(), a) == in.end()) out.push_back(a);
  return out;
}

double DistributionAtPoint::isotropy_defect(const MetricAtPoint& g) const {
  double r = 0.0, scale = 0.0;
  const size_t k = span.size() - (has_odd ? 1 : 0);
  for (size_t i = 0; i < k; ++i) {
    for (size_t j = 0; j < k; ++j) r = std::max(r, std::abs(g.pair(span[i], span[j])));
    double s = 0.0;
    for (const cplx& v : span[i]) s += std::norm(v);
    scale = std::max(scale, s);
  }
  return ratio(r, scale * g.g().cwiseAbs().maxCoeff());
}

double DistributionAtPoint::annihilator_defect() const {
  double r = 0.0;
  for (const auto& a : annihilators)
    for (const auto& v : span) {
      cplx s = 0.0;
      for (size_t i = 0; i < v.size(); ++i) s += a[i] * v[i];
      r = std::max(r, std::abs(s));
    }
  return r;
}

DistributionAtPoint distribution_at(const DistributionSelector& sel, const FrameAtPoint& f) {
  DistributionAtPoint d;
  d.has_odd = sel.adjoin_odd;
  for (int a : spanning_labels(sel, f.layout())) d.span.push_back(f.vector(a));
  for (int c : annihilator_labels(sel, f.layout())) d.annihilators.push_back(f.covector(c));
  return d;
}

double bracket_closure_residual(const std::vector<int>& labels, const FramedGeometry& fg) {
  return projected(fg.brackets(), labels, fg.dim());
}

double frobenius_residual(const DistributionSelector& sel, const FramedGeometry& fg) {
  return bracket_closure_residual(spanning_labels(sel, fg.layout()), fg);
}

double frobenius_residual(const DistributionSelector& sel, const MetricModel& model, const Point& p) {
  return frobenius_residual(sel, FramedGeometry(model.metric, model.null_coframe, p));
}

double frobenius_residual(const std::vector<VectorField>& span, const Point& p) {
  if (span.empty()) return 0.0;
  const int n = span[0].n;
  const int k = static_cast<int>(span.size());
  std::vector<std::vector<Jet2>> jets;
  Eigen::MatrixXcd u(n, k);
  for (int a = 0; a < k; ++a) {
    jets.push_back(at_point(p, [&] { return span[a].eval(p); }));
    for (int i = 0; i < n; ++i) u(i, a) = jets[a][i].value();
  }
  // orthogonal projector onto the complement of span{u}
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(u, Eigen::ComputeFullU);
  const Eigen::VectorXd s = svd.singularValues();
  int rank = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s(i) > 1e-12 * s(0)) ++rank;
  const Eigen::MatrixXcd q = svd.matrixU().rightCols(n - rank);
  double r = 0.0, scale = 0.0;
  for (int a = 0; a < k; ++a)
    for (int b = a + 1; b < k; ++b) {
      const auto br = lie_bracket(jets[a], jets[b]);
      Eigen::VectorXcd v(n);
      for (int i = 0; i < n; ++i) v(i) = br[i];
      r = std::max(r, (q.adjoint() * v).norm());
      scale = std::max(scale, v.norm());
    }
  return ratio(r, scale);
}

double totally_geodesic_residual(const DistributionSelector& sel, const FramedGeometry& fg) {
  return projected(fg.connection(), spanning_labels(sel, fg.layout()), fg.dim());
}

double totally_geodesic_residual(const DistributionSelector& sel, const MetricModel& model, const Point& p) {
  return totally_geodesic_residual(sel, FramedGeometry(model.metric, model.null_coframe, p));
}

std::vector<LabeledResidual> connection_pattern_residual(const FramedGeometry& fg) {
  const FrameLayout& l = fg.layout();
  if (!l.null) throw std::invalid_argument("connection patterns need a null frame");
  const Tensor& G = fg.connection_lowered();
  const int m = l.m;
  const double scale = G.max_abs();
  std::vector<LabeledResidual> out;
  auto add = [&](const std::string& id, double v) {
    auto it = std::find_if(out.begin(), out.end(), [&](const LabeledResidual& x) { return x.id == id; });
    if (it == out.end())
      out.push_back({id, v});
    else
      it->value = std::max(it->value, v);
  };
  auto dn = [&](int mu) { return l.lower(mu); };
  auto up = [&](int mu) { return l.upper(mu); };
  for (int k = 0; k < m; ++k)
    for (int mu = 0; mu < m; ++mu)
      for (int nu = 0; nu < m; ++nu) {
        add("Γ_κμν", std::max(std::abs(G(dn(k), dn(mu), dn(nu))), std::abs(G(up(k), up(mu), up(nu)))));
        if (nu != k && nu != mu)
          add("Γ_κμ^ν", std::max(std::abs(G(dn(k), dn(mu), up(nu))), std::abs(G(up(k), up(mu), dn(nu)))));
        if (k != mu && k != nu)
          add("Γ_κ^μν", std::max(std::abs(G(dn(k), up(mu), up(nu))), std::abs(G(up(k), dn(mu), dn(nu)))));
      }
  if (l.odd) {
    const int o = l.odd_leg();
    for (int mu = 0; mu < m; ++mu)
      for (int nu = 0; nu < m; ++nu) {
        if (mu == nu) continue;
        add("Γ_νμ0", std::abs(G(dn(nu), dn(mu), o)));
        add("Γ^νμ0", std::abs(G(up(nu), up(mu), o)));
        add("Γ^ν_μ0", std::abs(G(up(nu), dn(mu), o)));
        add("Γ_ν^μ0", std::abs(G(dn(nu), up(mu), o)));
      }
  }
  for (auto& r : out) r.value = ratio(r.value, scale);
  return out;
}

std::vector<LabeledResidual> connection_pattern_residual(const MetricModel& model, const Point& p) {
  return connection_pattern_residual(FramedGeometry(model.metric, model.null_coframe, p));
}

int real_intersection_rank(const DistributionSelector& sel, const FrameAtPoint& f, double tol) {
  const std::vector<int> labels = spanning_labels(sel, f.layout());
  const int n = f.dim();
  const int k = static_cast<int>(labels.size());
  Eigen::MatrixXcd u(n, 2 * k);
  for (int a = 0; a < k; ++a) {
    u.col(a) = f.frame().col(labels[a]);
    u.col(k + a) = f.frame().col(labels[a]).conjugate();
  }
  auto rank = [tol](const Eigen::MatrixXcd& m) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    const Eigen::VectorXd s = svd.singularValues();
    int r = 0;
    for (int i = 0; i < s.size(); ++i)
      if (s(i) > tol * s(0)) ++r;
    return r;
  };
  const int d = rank(u.leftCols(k));
  return 2 * d - rank(u);
}

int real_intersection_rank(const DistributionSelector& sel, const MetricModel& model, const Point& p) {
  if (!model.real_structure) throw NoRealStructure("model " + model.id + " declares no real structure");
  FramedGeometry fg(model.metric, model.null_coframe, p);
  return real_intersection_rank(sel, fg.frame());
}

}  // namespace yano
