#include <cmath>

#include "yano/catalog.hpp"

namespace yano {

namespace {

using catalog_detail::elementary_symmetric;

const std::vector<double>& theta_coeffs(const ParameterRecord& pr, int mu) {
  return pr.theta.size() == 1 ? pr.theta[0] : pr.theta[mu];
}

struct Orthotoric {
  std::vector<Jet2> xi;
  std::vector<Jet2> R;
  /// σ_μ^(k), k = 0..m−1.
  std::vector<std::vector<Jet2>> smu;
};

Orthotoric orthotoric_functions(const ParameterRecord& pr, const Point& p) {
  const int m = pr.m, n = 2 * m;
  const auto c = lift_coordinates(p);
  Orthotoric o;
  o.xi.assign(c.begin(), c.begin() + m);
  for (int mu = 0; mu < m; ++mu) {
    std::vector<Jet2> others;
    Jet2 delta(n, 1.0);
    for (int nu = 0; nu < m; ++nu)
      if (nu != mu) {
        others.push_back(o.xi[nu]);
        delta *= o.xi[nu] - o.xi[mu];
      }
    Jet2 theta(n, 0.0);
    const auto& tc = theta_coeffs(pr, mu);
    for (auto it = tc.rbegin(); it != tc.rend(); ++it) theta = theta * o.xi[mu] + Jet2(*it);
    o.R.push_back(theta / delta);
    o.smu.push_back(elementary_symmetric(others, n));
  }
  return o;
}

// Rows ẽ^μ = dξ_μ/√R_μ, ẽ^{m+μ} = √R_μ Σ_k σ_μ^(k−1) dt_k.
JetMatrix orthotoric_coframe(const ParameterRecord& pr, const Point& p) {
  const int m = pr.m, n = 2 * m;
  const Orthotoric o = orthotoric_functions(pr, p);
  JetMatrix e(n, n);
  for (int a = 0; a < n; ++a)
    for (int i = 0; i < n; ++i) e(a, i) = Jet2(n, 0.0);
  for (int mu = 0; mu < m; ++mu) {
    const Jet2 s = sqrt(o.R[mu]);
    e(mu, mu) = Jet2(1.0) / s;
    for (int k = 0; k < m; ++k) e(m + mu, m + k) = s * o.smu[mu][k];
  }
  return e;
}

// Σ_μ f_μ dξ_μ∧(Σ_k σ_μ^(k−1) dt_k) with coefficient jets f_μ.
JetForm toric_form(const ParameterRecord& pr, const Point& p, bool weighted) {
  const int m = pr.m, n = 2 * m;
  const Orthotoric o = orthotoric_functions(pr, p);
  JetForm out(n, 2);
  for (int mu = 0; mu < m; ++mu)
    for (int k = 0; k < m; ++k) {
      const Jet2 v = weighted ? o.xi[mu] * o.smu[mu][k] : o.smu[mu][k];
      out.at((1u << mu) | (1u << (m + k))) += v;
    }
  return out;
}

}  // namespace

ParameterRecord default_orthotoric_parameters(int m) {
  ParameterRecord p;
  p.m = m;
  p.eps = 0;
  // Π_{j=1}^{m−1} (j + 1/2 − ξ) · (1 + 0.3ξ + 0.1ξ²)
  std::vector<double> c{1.0, 0.3, 0.1};
  for (int j = 1; j <= m - 1; ++j) {
    std::vector<double> next(c.size() + 1, 0.0);
    for (size_t k = 0; k < c.size(); ++k) {
      next[k] += (j + 0.5) * c[k];
      next[k + 1] -= c[k];
    }
    c = next;
  }
  p.theta = {c};
  return p;
}

ParameterRecord ricci_flat_orthotoric_parameters(int m) {
  ParameterRecord p;
  p.m = m;
  p.eps = 0;
  std::vector<double> c{1.0};
  for (int j = 1; j <= m; ++j) {
    std::vector<double> next(c.size() + 1, 0.0);
    for (size_t k = 0; k < c.size(); ++k) {
      next[k] += (j + 0.5) * c[k];
      next[k + 1] -= c[k];
    }
    c = next;
  }
  for (int mu = 0; mu < m; ++mu) {
    std::vector<double> t = c;
    t[0] += 0.03 * (mu + 1) * (mu % 2 == 0 ? 1.0 : -1.0);
    p.theta.push_back(t);
  }
  return p;
}

namespace {

// Θ_μ = P + c_μ with deg P ≤ m.
bool ricci_flat_family(const ParameterRecord& pr) {
  const int m = pr.m;
  auto coeff = [](const std::vector<double>& t, size_t k) { return k < t.size() ? t[k] : 0.0; };
  for (int mu = 0; mu < static_cast<int>(pr.theta.size()); ++mu) {
    const auto& t = pr.theta[mu];
    for (size_t k = m + 1; k < t.size(); ++k)
      if (t[k] != 0.0) return false;
    for (size_t k = 1; k < std::max(t.size(), pr.theta[0].size()); ++k)
      if (coeff(t, k) != coeff(pr.theta[0], k)) return false;
  }
  return true;
}

}  // namespace

MetricModel build_orthotoric(int m, const ParameterRecord& params) {
  ParameterRecord pr = params;
  pr.m = m;
  pr.eps = 0;
  if (m < 1 || 2 * m > kMaxDim) throw ConfigError("orthotoric model needs 1 ≤ m ≤ 4");
  if (pr.theta.size() != 1 && static_cast<int>(pr.theta.size()) != m)
    throw ConfigError("orthotoric model needs one shared Θ or one Θ_μ per μ");
  for (const auto& t : pr.theta)
    if (t.empty()) throw ConfigError("empty Θ polynomial");
  const int n = 2 * m;

  MetricModel model;
  model.id = "orthotoric";
  model.n = n;
  model.m = m;
  model.params = pr;

  CoframeField real;
  real.n = n;
  real.layout = FrameLayout{m, false, false};
  real.eval = [pr](const Point& p) { return orthotoric_coframe(pr, p); };
  model.real_coframe = real;
  model.metric = catalog_detail::metric_from_coframe(real);
  model.metric.chart = "orthotoric";
  model.null_coframe = catalog_detail::null_from_real(real, m, false);
  model.real_structure = true;
  model.ricci_flat = ricci_flat_family(pr);

  HamiltonianData h;
  h.omega = FormField{n, 2, [pr](const Point& p) { return toric_form(pr, p, false); }};
  h.psi = FormField{n, 2, [pr](const Point& p) { return toric_form(pr, p, true); }};
  h.sigma = [m](const Point& p) {
    const auto c = lift_coordinates(p);
    Jet2 s(p.dim(), 0.0);
    for (int mu = 0; mu < m; ++mu) s += c[mu];
    return s;
  };
  const MetricField g = model.metric;
  h.J = [pr, g, n](const Point& p) {
    const JetMatrix ginv = inverse(g.eval(p), n);
    const JetForm w = toric_form(pr, p, false);
    JetMatrix J(n, n);
    for (int c = 0; c < n; ++c)
      for (int a = 0; a < n; ++a) {
        Jet2 s(n, 0.0);
        for (int b = 0; b < n; ++b)
          if (a != b) s += ginv(c, b) * w.component({a, b});
        J(c, a) = s;
      }
    return J;
  };
  model.hamiltonian = h;
  model.cky = hamiltonian_cky_field(h);
  model.cky_closed = false;

  model.box.lo.assign(n, 0.0);
  model.box.hi.assign(n, 1.0);
  for (int mu = 0; mu < m; ++mu) {
    model.box.lo[mu] = mu + 1 + 0.1;
    model.box.hi[mu] = mu + 1 + 0.4;
  }
  catalog_detail::apply_box_override(model.box, pr, n);
  model.box.guard = pr.guard;
  const double guard = pr.guard;
  model.box.accept = [pr, m, guard](const Point& p) {
    for (int mu = 0; mu < m; ++mu)
      for (int nu = mu + 1; nu < m; ++nu)
        if (std::abs(p.coords[mu] - p.coords[nu]) < guard) return false;
    const Orthotoric o = orthotoric_functions(pr, p);
    for (int mu = 0; mu < m; ++mu) {
      const cplx R = o.R[mu].value();
      if (std::abs(R) < guard || R.real() <= 0.0) return false;
    }
    return true;
  };
  model.notes.push_back("ẽ^{m+μ} uses σ_μ^(k−1), k = 1..m, so that ω = Σ ẽ^μ∧ẽ^{m+μ} = Σ dσ^(k)∧dt_k");
  model.notes.push_back("Δ_μ = Π_{ν≠μ}(ξ_ν − ξ_μ); principal root of Θ_μ/Δ_μ");
  return model;
}

}  // namespace yano
