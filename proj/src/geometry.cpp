#include "yano/geometry.hpp"

#include <cmath>

namespace yano {

Tensor::Tensor(int n, int rank) : n_(n), rank_(rank) {
  size_t size = 1;
  for (int r = 0; r < rank; ++r) size *= static_cast<size_t>(n);
  data_.assign(size, cplx{});
}

size_t Tensor::offset(std::initializer_list<int> idx) const {
  size_t off = 0;
  for (int i : idx) off = off * n_ + i;
  return off;
}

size_t Tensor::offset(const std::vector<int>& idx) const {
  size_t off = 0;
  for (int i : idx) off = off * n_ + i;
  return off;
}

double Tensor::max_abs() const {
  double m = 0.0;
  for (const auto& v : data_) m = std::max(m, std::abs(v));
  return m;
}

double Tensor::frobenius() const {
  double s = 0.0;
  for (const auto& v : data_) s += std::norm(v);
  return std::sqrt(s);
}

MetricField MetricField::from_components(int n, std::vector<ScalarField> components, std::string chart) {
  if (static_cast<int>(components.size()) != n * n) throw std::invalid_argument("metric needs n*n components");
  MetricField g;
  g.n = n;
  g.chart = std::move(chart);
  g.eval = [n, components = std::move(components)](const Point& p) {
    JetMatrix m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        m(i, j) = components[i * n + j](p);
        m(j, i) = m(i, j);
      }
    return m;
  };
  return g;
}

LocalGeometry::LocalGeometry(const MetricField& g, const Point& p) : n_(g.n), p_(p) {
  if (p.dim() != n_) throw std::invalid_argument("point dimension does not match metric");
  at_point(p, [&] {
    g_ = g.eval(p);
    ginv_ = inverse(g_, n_);
    return 0;
  });
  Eigen::MatrixXcd gv(n_, n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) gv(i, j) = g_(i, j).value();
  metric_ = std::make_unique<MetricAtPoint>(gv);

  // Christoffel symbols of the first kind Γ_{ljk} = ½(∂_j g_lk + ∂_k g_lj − ∂_l g_jk).
  const int n = n_;
  std::vector<Jet2> first(n * n * n);
  for (int l = 0; l < n; ++l)
    for (int j = 0; j < n; ++j)
      for (int k = j; k < n; ++k) {
        Jet2 v = (g_(l, k).partial(j) + g_(l, j).partial(k) - g_(j, k).partial(l)) * Jet2(0.5);
        first[(l * n + j) * n + k] = v;
        first[(l * n + k) * n + j] = v;
      }
  gamma_.assign(n * n * n, Jet2(n, 0.0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = j; k < n; ++k) {
        Jet2 acc(n, 0.0);
        for (int l = 0; l < n; ++l) acc += ginv_(i, l) * first[(l * n + j) * n + k];
        gamma_[(i * n + j) * n + k] = acc;
        gamma_[(i * n + k) * n + j] = acc;
      }
}

Tensor LocalGeometry::christoffel_tensor() const {
  Tensor t(n_, 3);
  for (size_t k = 0; k < t.size(); ++k) t[k] = gamma_[k].value();
  return t;
}

Tensor LocalGeometry::metricity() const {
  const int n = n_;
  Tensor t(n, 3);
  for (int c = 0; c < n; ++c)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        cplx v = g_(a, b).grad(c);
        for (int d = 0; d < n; ++d)
          v -= christoffel(d, c, a) * g_(d, b).value() + christoffel(d, c, b) * g_(a, d).value();
        t(c, a, b) = v;
      }
  return t;
}

CurvatureTable LocalGeometry::curvature() const {
  const int n = n_;
  Tensor up(n, 4);  // R^i_{jkl}
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = k + 1; l < n; ++l) {
          cplx v = christoffel_jet(i, l, j).grad(k) - christoffel_jet(i, k, j).grad(l);
          for (int m = 0; m < n; ++m)
            v += christoffel(i, k, m) * christoffel(m, l, j) - christoffel(i, l, m) * christoffel(m, k, j);
          up(i, j, k, l) = v;
          up(i, j, l, k) = -v;
        }
  const Eigen::MatrixXcd& g = metric_->g();
  const Eigen::MatrixXcd& gi = metric_->inverse();
  CurvatureTable c;
  c.riemann = Tensor(n, 4);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          cplx v = 0.0;
          for (int m = 0; m < n; ++m) v += g(i, m) * up(m, j, k, l);
          c.riemann(i, j, k, l) = v;
        }
  c.ricci = Tensor(n, 2);
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < n; ++l) {
      cplx v = 0.0;
      for (int i = 0; i < n; ++i) v += up(i, j, i, l);
      c.ricci(j, l) = v;
    }
  c.scalar = 0.0;
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < n; ++l) c.scalar += gi(j, l) * c.ricci(j, l);
  c.weyl = Tensor(n, 4);
  if (n >= 3) {
    const double a = 1.0 / (n - 2);
    const cplx b = c.scalar / static_cast<double>((n - 1) * (n - 2));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) {
            const cplx schouten = a * (g(i, k) * c.ricci(j, l) - g(i, l) * c.ricci(j, k) -
                                       g(j, k) * c.ricci(i, l) + g(j, l) * c.ricci(i, k));
            c.weyl(i, j, k, l) =
                c.riemann(i, j, k, l) - schouten + b * (g(i, k) * g(j, l) - g(i, l) * g(j, k));
          }
  }
  return c;
}

FramedGeometry::FramedGeometry(const MetricField& g, const CoframeField& f, const Point& p)
    : local_(g, p), layout_(f.layout) {
  const int n = local_.dim();
  if (f.n != n || layout_.size() != n) throw std::invalid_argument("coframe does not match metric dimension");
  at_point(p, [&] {
    coframe_jets_ = f.eval(p);
    frame_jets_ = inverse(coframe_jets_, n);
    return 0;
  });
  Eigen::MatrixXcd e(n, n);
  for (int a = 0; a < n; ++a)
    for (int i = 0; i < n; ++i) e(a, i) = coframe_jets_(a, i).value();
  frame_ = std::make_unique<FrameAtPoint>(e, layout_);

  brackets_ = Tensor(n, 3);
  connection_ = Tensor(n, 3);
  std::vector<cplx> br(n), cov(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      for (int i = 0; i < n; ++i) {
        cplx s = 0.0, t = 0.0;
        for (int k = 0; k < n; ++k) {
          const cplx vak = frame_jet(a, k).value();
          s += vak * frame_jet(b, i).grad(k) - frame_jet(b, k).value() * frame_jet(a, i).grad(k);
          cplx inner = frame_jet(b, i).grad(k);
          for (int l = 0; l < n; ++l) inner += local_.christoffel(i, k, l) * frame_jet(b, l).value();
          t += vak * inner;
        }
        br[i] = s;
        cov[i] = t;
      }
      for (int c = 0; c < n; ++c) {
        cplx s = 0.0, t = 0.0;
        for (int i = 0; i < n; ++i) {
          s += e(c, i) * br[i];
          t += e(c, i) * cov[i];
        }
        brackets_(a, b, c) = s;
        connection_(a, b, c) = t;
      }
    }
  const Eigen::MatrixXcd pairing = layout_.pairing();
  lowered_ = Tensor(n, 3);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        cplx v = 0.0;
        for (int d = 0; d < n; ++d) v += connection_(a, b, d) * pairing(d, c);
        lowered_(a, b, c) = v;
      }
}

cplx FramedGeometry::derivative(int a, const Jet2& f) const {
  cplx s = 0.0;
  for (int k = 0; k < dim(); ++k) s += frame_jet(a, k).value() * f.grad(k);
  return s;
}

std::vector<Jet2> FramedGeometry::connection_jets() const {
  const int n = dim();
  std::vector<Jet2> out(n * n * n, Jet2(n, 0.0));
  std::vector<Jet2> cov(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      for (int i = 0; i < n; ++i) {
        Jet2 t(n, 0.0);
        for (int k = 0; k < n; ++k) {
          Jet2 inner = frame_jet(b, i).partial(k);
          for (int l = 0; l < n; ++l) inner += local_.christoffel_jet(i, k, l) * frame_jet(b, l);
          t += frame_jet(a, k) * inner;
        }
        cov[i] = t;
      }
      for (int c = 0; c < n; ++c) {
        Jet2 t(n, 0.0);
        for (int i = 0; i < n; ++i) t += coframe_jet(c, i) * cov[i];
        out[(a * n + b) * n + c] = t;
      }
    }
  return out;
}

Tensor FramedGeometry::project(const Tensor& t) const {
  const int n = dim();
  const int r = t.rank();
  const Eigen::MatrixXcd& v = frame_->frame();
  Tensor cur = t;
  for (int slot = 0; slot < r; ++slot) {
    Tensor next(n, r);
    std::vector<int> idx(r, 0);
    for (size_t k = 0; k < next.size(); ++k) {
      size_t rem = k;
      for (int s = r - 1; s >= 0; --s) {
        idx[s] = static_cast<int>(rem % n);
        rem /= n;
      }
      const int a = idx[slot];
      cplx acc = 0.0;
      for (int i = 0; i < n; ++i) {
        idx[slot] = i;
        acc += cur.at(idx) * v(i, a);
      }
      next[k] = acc;
    }
    cur = std::move(next);
  }
  return cur;
}

Tensor FramedGeometry::riemann_from_connection() const {
  const int n = dim();
  const std::vector<Jet2> gam = connection_jets();
  auto G = [&](int a, int b, int c) -> const Jet2& { return gam[(a * n + b) * n + c]; };
  const Eigen::MatrixXcd pairing = layout_.pairing();
  Tensor up(n, 4);  // R(V_a,V_b)V_c = up(a,b,c,d) V_d
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          cplx v = derivative(a, G(b, c, d)) - derivative(b, G(a, c, d));
          for (int e = 0; e < n; ++e)
            v += G(b, c, e).value() * G(a, e, d).value() - G(a, c, e).value() * G(b, e, d).value() -
                 brackets_(a, b, e) * G(e, c, d).value();
          up(a, b, c, d) = v;
        }
  Tensor out(n, 4);  // same slot order as project(riemann): (d, c, a, b)
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int dd = 0; dd < n; ++dd) {
          cplx v = 0.0;
          for (int d = 0; d < n; ++d) v += up(a, b, c, d) * pairing(d, dd);
          out(dd, c, a, b) = v;
        }
  return out;
}

double FramedGeometry::reconstruction_defect() const {
  const double scale = std::max(1.0, local_.metric().g().cwiseAbs().maxCoeff());
  return frame_->null_defect(local_.metric()) / scale;
}

ConnectionTable christoffel(const MetricField& g, const Point& p) {
  LocalGeometry geo(g, p);
  ConnectionTable t;
  t.christoffel = geo.christoffel_tensor();
  return t;
}

ConnectionTable frame_connection(const MetricField& g, const CoframeField& f, const Point& p) {
  FramedGeometry geo(g, f, p);
  ConnectionTable t;
  t.christoffel = geo.local().christoffel_tensor();
  t.frame = geo.connection();
  t.frame_lowered = geo.connection_lowered();
  return t;
}

CurvatureTable curvature(const MetricField& g, const Point& p, const CoframeField* f) {
  if (!f) return LocalGeometry(g, p).curvature();
  FramedGeometry geo(g, *f, p);
  CurvatureTable c = geo.local().curvature();
  c.frame_riemann = geo.project(c.riemann);
  c.frame_ricci = geo.project(c.ricci);
  c.frame_weyl = geo.project(c.weyl);
  return c;
}

JetForm exterior_derivative(const JetForm& a) {
  const int n = a.dim();
  JetForm out(n, a.degree() + 1);
  if (a.degree() + 1 > n) return out;
  const auto& ma = a.masks();
  for (size_t k = 0; k < ma.size(); ++k)
    for (int i = 0; i < n; ++i) {
      const int s = exterior::wedge_sign(1u << i, ma[k]);
      if (s == 0) continue;
      const Jet2 d = a[k].partial(i);
      if (s > 0)
        out.at(ma[k] | (1u << i)) += d;
      else
        out.at(ma[k] | (1u << i)) -= d;
    }
  return out;
}

PForm exterior_derivative(const FormField& a, const Point& p) {
  return at_point(p, [&] { return value_of(exterior_derivative(a.eval(p))); });
}

JetForm hodge_star(const JetForm& a, const JetMatrix& g, int n) {
  const JetMatrix gi = inverse(g, n);
  const Jet2 det = determinant(g, n);
  const double sigma = det.value().real() < 0 ? -1.0 : 1.0;
  const Jet2 vol = sqrt(det * Jet2(sigma));
  std::vector<Jet2> entries(n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) entries[i * n + j] = gi(i, j);
  return hodge_star(a, entries, vol);
}

PForm codifferential(const JetForm& a, const JetMatrix& g, int n) {
  const int p = a.degree();
  if (p == 0) return PForm(n, 0);
  const JetForm star = hodge_star(a, g, n);
  const PForm d = value_of(exterior_derivative(star));
  Eigen::MatrixXcd gv(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) gv(i, j) = g(i, j).value();
  const MetricAtPoint gm(gv);
  PForm out = hodge_star(d, gm);
  const int e = n * p + n + 1;
  out *= gm.hodge_sign() * (e % 2 ? -1.0 : 1.0);
  return out;
}

PForm codifferential(const FormField& a, const MetricField& g, const Point& p) {
  return at_point(p, [&] { return codifferential(a.eval(p), g.eval(p), g.n); });
}

Tensor covariant_derivative_form(const JetForm& a, const LocalGeometry& geo) {
  const int n = geo.dim();
  const int p = a.degree();
  Tensor out(n, p + 1);
  std::vector<int> idx(p + 1);
  for (size_t k = 0; k < out.size(); ++k) {
    size_t rem = k;
    for (int s = p; s >= 0; --s) {
      idx[s] = static_cast<int>(rem % n);
      rem /= n;
    }
    const int c = idx[0];
    std::vector<int> slots(idx.begin() + 1, idx.end());
    auto [mask, sign] = exterior::sort_indices(slots);
    cplx v = 0.0;
    if (sign != 0) v = static_cast<double>(sign) * a.at(mask).grad(c);
    for (int s = 0; s < p; ++s) {
      const int orig = slots[s];
      for (int d = 0; d < n; ++d) {
        const cplx gam = geo.christoffel(d, c, orig);
        if (gam == cplx{}) continue;
        slots[s] = d;
        auto [m2, s2] = exterior::sort_indices(slots);
        if (s2 != 0) v -= gam * static_cast<double>(s2) * a.at(m2).value();
      }
      slots[s] = orig;
    }
    out[k] = v;
  }
  return out;
}

Tensor covariant_derivative_form(const FormField& a, const MetricField& g, const Point& p) {
  LocalGeometry geo(g, p);
  return at_point(p, [&] { return covariant_derivative_form(a.eval(p), geo); });
}

std::vector<cplx> lie_bracket(const std::vector<Jet2>& x, const std::vector<Jet2>& y) {
  const int n = static_cast<int>(x.size());
  std::vector<cplx> out(n);
  for (int i = 0; i < n; ++i) {
    cplx s = 0.0;
    for (int j = 0; j < n; ++j) s += x[j].value() * y[i].grad(j) - y[j].value() * x[i].grad(j);
    out[i] = s;
  }
  return out;
}

std::vector<cplx> lie_bracket(const VectorField& x, const VectorField& y, const Point& p) {
  return at_point(p, [&] { return lie_bracket(x.eval(p), y.eval(p)); });
}

JetForm jet_one_form(const JetMatrix& rows, int a) {
  JetForm f(rows.cols(), 1);
  for (int i = 0; i < rows.cols(); ++i) f[i] = rows(a, i);
  return f;
}

}  // namespace yano
