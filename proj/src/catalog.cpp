#include "yano/catalog.hpp"

#include <cmath>

namespace yano {

namespace catalog_detail {

MetricField metric_from_coframe(const CoframeField& f) {
  MetricField g;
  g.n = f.n;
  const Eigen::MatrixXcd eta = f.layout.pairing();
  g.eval = [f, eta](const Point& p) {
    const int n = f.n;
    const JetMatrix e = f.eval(p);
    JetMatrix m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        Jet2 s(n, 0.0);
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b)
            if (eta(a, b) != cplx{}) s += Jet2(eta(a, b)) * e(a, i) * e(b, j);
        m(i, j) = s;
        m(j, i) = s;
      }
    return m;
  };
  return g;
}

CoframeField null_from_real(const CoframeField& e, int m, bool odd) {
  CoframeField f;
  f.n = e.n;
  f.layout = FrameLayout{m, odd, true};
  f.eval = [e, m, odd](const Point& p) {
    const int n = e.n;
    const JetMatrix r = e.eval(p);
    JetMatrix out(n, n);
    const Jet2 s(1.0 / std::sqrt(2.0));
    const Jet2 is(cplx(0.0, 1.0 / std::sqrt(2.0)));
    for (int mu = 0; mu < m; ++mu)
      for (int i = 0; i < n; ++i) {
        out(mu, i) = s * r(mu, i) + is * r(m + mu, i);
        out(m + mu, i) = s * r(mu, i) - is * r(m + mu, i);
      }
    if (odd)
      for (int i = 0; i < n; ++i) out(2 * m, i) = r(2 * m, i);
    return out;
  };
  return f;
}

FormField normal_form_field(const CoframeField& nf, std::function<std::vector<Jet2>(const Point&)> lambda) {
  const int m = nf.layout.m;
  return FormField{nf.n, 2, [nf, lambda, m](const Point& p) {
                     const JetMatrix th = nf.eval(p);
                     const std::vector<Jet2> lam = lambda(p);
                     JetForm out(nf.n, 2);
                     for (int mu = 0; mu < m; ++mu)
                       out += wedge(jet_one_form(th, mu), jet_one_form(th, m + mu)) * lam[mu];
                     return out;
                   }};
}

double unit_uniform(std::uint64_t& state) {
  // splitmix64
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return static_cast<double>(z >> 11) * 0x1.0p-53;
}

void apply_box_override(SamplingBox& box, const ParameterRecord& p, int n) {
  if (p.box_lo.empty() && p.box_hi.empty()) return;
  if (static_cast<int>(p.box_lo.size()) != n || static_cast<int>(p.box_hi.size()) != n)
    throw ConfigError("sampling box needs one interval per coordinate");
  for (int i = 0; i < n; ++i)
    if (!(p.box_lo[i] < p.box_hi[i])) throw ConfigError("sampling box interval is empty");
  box.lo = p.box_lo;
  box.hi = p.box_hi;
}

std::vector<Jet2> elementary_symmetric(const std::vector<Jet2>& v, int n) {
  std::vector<Jet2> e(v.size() + 1, Jet2(n, 0.0));
  e[0] = Jet2(n, 1.0);
  for (size_t i = 0; i < v.size(); ++i)
    for (size_t k = i + 1; k >= 1; --k) e[k] += e[k - 1] * v[i];
  return e;
}

}  // namespace catalog_detail

std::vector<Point> MetricModel::sample(int count, std::uint64_t seed) const {
  if (count < 0) throw std::invalid_argument("negative sample count");
  std::vector<Point> out;
  std::uint64_t state = seed;
  const long max_attempts = 1000L * std::max(count, 1);
  long attempts = 0;
  while (static_cast<int>(out.size()) < count) {
    if (++attempts > max_attempts) throw PreconditionFailed("sampling guards rejected every candidate point");
    Point p{std::vector<double>(n), id};
    for (int i = 0; i < n; ++i) p.coords[i] = box.lo[i] + (box.hi[i] - box.lo[i]) * catalog_detail::unit_uniform(state);
    bool ok = true;
    try {
      ok = !box.accept || box.accept(p);
    } catch (const SingularEvaluation&) {
      ok = false;
    }
    if (ok) out.push_back(std::move(p));
  }
  return out;
}

SelfCheck self_check(const MetricModel& model, const Point& p) {
  SelfCheck s;
  FramedGeometry fg(model.metric, model.null_coframe, p);
  const FrameAtPoint& f = fg.frame();
  const int n = model.n;
  s.duality = (f.coframe() * f.frame() - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff();
  s.null_reconstruction = fg.reconstruction_defect();
  if (model.real_coframe) {
    FramedGeometry rg(model.metric, *model.real_coframe, p);
    s.real_reconstruction = rg.reconstruction_defect();
    const FrameAtPoint& r = rg.frame();
    s.duality = std::max(s.duality, (r.coframe() * r.frame() - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff());
  }
  return s;
}

ParameterRecord jitter_parameters(const std::string& id, ParameterRecord p, std::uint64_t seed) {
  std::uint64_t state = seed;
  auto u = [&](double lo, double hi) { return lo + (hi - lo) * catalog_detail::unit_uniform(state); };
  if (id == "kerr_nut_ads") {
    for (size_t k = 0; k < p.a.size(); ++k) p.a[k] = 0.3 * ((k + 1) + 0.5 + u(-0.08, 0.08));
    for (size_t mu = 0; mu < p.M.size(); ++mu) p.M[mu] = 0.9 - 0.51 * mu + u(-0.05, 0.05);
    p.g = u(0.15, 0.25);
  } else if (id == "lmp5") {
    p.a0 = u(0.5, 1.5);
    for (size_t k = 1; k < p.x_coeffs.size(); ++k) p.x_coeffs[k] *= u(0.9, 1.1);
    for (size_t k = 1; k < p.y_coeffs.size(); ++k) p.y_coeffs[k] *= u(0.9, 1.1);
  }
  return p;
}

std::vector<std::string> model_ids() { return {"kerr_nut_ads", "lmp5", "orthotoric", "flat"}; }

ParameterRecord default_parameters(const std::string& id, int m, int eps) {
  if (id == "kerr_nut_ads") return default_kerr_nut_ads_parameters(m, eps);
  if (id == "lmp5") return default_lmp5_parameters();
  if (id == "orthotoric") return default_orthotoric_parameters(m);
  if (id == "flat") {
    ParameterRecord p;
    p.m = m;
    p.eps = eps;
    return p;
  }
  throw ConfigError("unknown metric id: " + id);
}

MetricModel build_model(const std::string& id, const ParameterRecord& params) {
  if (id == "kerr_nut_ads") return build_kerr_nut_ads(params.m, params.eps, params);
  if (id == "lmp5") return build_lmp5(params);
  if (id == "orthotoric") return build_orthotoric(params.m, params);
  if (id == "flat") {
    MetricModel model = build_flat(2 * params.m + params.eps, params.signature);
    return model;
  }
  throw ConfigError("unknown metric id: " + id);
}

}  // namespace yano
