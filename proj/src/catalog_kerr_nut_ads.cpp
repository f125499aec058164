#include <cmath>

#include "yano/catalog.hpp"

namespace yano {

namespace {

using catalog_detail::elementary_symmetric;

struct KerrNutFunctions {
  std::vector<Jet2> x;
  std::vector<Jet2> X;
  std::vector<Jet2> U;
  std::vector<Jet2> Q;
  /// A_μ^(k), k = 0..m−1.
  std::vector<std::vector<Jet2>> Amu;
  /// A^(k), k = 0..m.
  std::vector<Jet2> A;
  Jet2 c;
};

KerrNutFunctions kerr_nut_functions(const ParameterRecord& pr, const Point& p) {
  const int m = pr.m, eps = pr.eps, n = 2 * m + eps;
  const auto coords = lift_coordinates(p);
  KerrNutFunctions f;
  f.x.assign(coords.begin(), coords.begin() + m);
  std::vector<Jet2> x2(m);
  for (int mu = 0; mu < m; ++mu) x2[mu] = f.x[mu] * f.x[mu];
  f.A = elementary_symmetric(x2, n);
  f.c = Jet2(n, 1.0);
  for (double ak : pr.a) f.c *= Jet2(ak * ak);
  for (int mu = 0; mu < m; ++mu) {
    std::vector<Jet2> others;
    Jet2 U(n, 1.0);
    for (int nu = 0; nu < m; ++nu)
      if (nu != mu) {
        others.push_back(x2[nu]);
        U *= x2[nu] - x2[mu];
      }
    f.Amu.push_back(elementary_symmetric(others, n));
    Jet2 prod(n, 1.0);
    for (int k = 0; k < m - 1 + eps; ++k) prod *= Jet2(pr.a[k] * pr.a[k]) - x2[mu];
    Jet2 X = (Jet2(pr.g * pr.g) * x2[mu] - Jet2(1.0)) * prod;
    if (eps == 1) X = -(X / x2[mu]);
    X += Jet2(2.0 * pr.M[mu]) * (eps == 0 ? -f.x[mu] : Jet2(n, 1.0));
    f.X.push_back(X);
    f.U.push_back(U);
    f.Q.push_back(X / U);
  }
  return f;
}

JetMatrix kerr_nut_real_coframe(const ParameterRecord& pr, const Point& p) {
  const int m = pr.m, eps = pr.eps, n = 2 * m + eps;
  const KerrNutFunctions f = kerr_nut_functions(pr, p);
  JetMatrix e(n, n);
  for (int a = 0; a < n; ++a)
    for (int i = 0; i < n; ++i) e(a, i) = Jet2(n, 0.0);
  for (int mu = 0; mu < m; ++mu) {
    const Jet2 s = sqrt(f.Q[mu]);
    e(mu, mu) = Jet2(1.0) / s;
    for (int k = 0; k < m; ++k) e(m + mu, m + k) = s * f.Amu[mu][k];
  }
  if (eps == 1) {
    const Jet2 s = sqrt(-(f.c / f.A[m]));
    for (int k = 0; k <= m; ++k) e(2 * m, m + k) = s * f.A[k];
  }
  return e;
}

void validate(const ParameterRecord& pr, int m, int eps) {
  if (m < 1 || (eps != 0 && eps != 1)) throw ConfigError("Kerr-NUT-(A)dS needs m ≥ 1 and ε ∈ {0,1}");
  if (2 * m + eps > kMaxDim) throw ConfigError("dimension exceeds the supported maximum");
  if (static_cast<int>(pr.a.size()) != m - 1 + eps)
    throw ConfigError("Kerr-NUT-(A)dS needs m−1+ε rotation constants");
  if (static_cast<int>(pr.M.size()) != m) throw ConfigError("Kerr-NUT-(A)dS needs m mass/NUT constants");
}

}  // namespace

ParameterRecord default_kerr_nut_ads_parameters(int m, int eps) {
  ParameterRecord p;
  p.m = m;
  p.eps = eps;
  for (int k = 1; k <= m - 1 + eps; ++k) p.a.push_back(0.3 * (k + 0.5 + 0.013 * k));
  for (int mu = 0; mu < m; ++mu) p.M.push_back(0.9 - 0.51 * mu);
  p.g = 0.2;
  return p;
}

MetricModel build_kerr_nut_ads(int m, int eps) { return build_kerr_nut_ads(m, eps, default_kerr_nut_ads_parameters(m, eps)); }

MetricModel build_kerr_nut_ads(int m, int eps, const ParameterRecord& params) {
  ParameterRecord pr = params;
  pr.m = m;
  pr.eps = eps;
  validate(pr, m, eps);
  const int n = 2 * m + eps;

  MetricModel model;
  model.id = "kerr_nut_ads";
  model.n = n;
  model.m = m;
  model.odd = eps == 1;
  model.params = pr;

  CoframeField real;
  real.n = n;
  real.layout = FrameLayout{m, eps == 1, false};
  real.eval = [pr](const Point& p) { return kerr_nut_real_coframe(pr, p); };
  model.real_coframe = real;
  model.metric = catalog_detail::metric_from_coframe(real);
  model.metric.chart = "kerr_nut_ads";
  model.null_coframe = catalog_detail::null_from_real(real, m, eps == 1);

  // φ = Σ x_μ e^μ∧e^{m+μ} = Σ i x_μ θ^μ∧θ_μ
  model.cky = FormField{n, 2, [pr, real, m, n](const Point& p) {
                          const JetMatrix e = real.eval(p);
                          const auto x = lift_coordinates(p);
                          JetForm out(n, 2);
                          for (int mu = 0; mu < m; ++mu)
                            out += wedge(jet_one_form(e, mu), jet_one_form(e, m + mu)) * x[mu];
                          return out;
                        }};
  model.cky_closed = true;

  model.box.lo.assign(n, 0.0);
  model.box.hi.assign(n, 1.0);
  for (int mu = 0; mu < m; ++mu) {
    model.box.lo[mu] = 0.4 + 0.3 * mu;
    model.box.hi[mu] = 0.5 + 0.3 * mu;
  }
  catalog_detail::apply_box_override(model.box, pr, n);
  model.box.guard = pr.guard;
  const double guard = pr.guard;
  model.box.accept = [pr, m, eps, guard](const Point& p) {
    const KerrNutFunctions f = kerr_nut_functions(pr, p);
    for (int mu = 0; mu < m; ++mu) {
      if (std::abs(f.X[mu].value()) < guard || std::abs(f.U[mu].value()) < guard) return false;
      if (eps == 1 && std::abs(f.x[mu].value()) < guard) return false;
      for (int nu = mu + 1; nu < m; ++nu)
        if (std::abs(f.x[mu].value() * f.x[mu].value() - f.x[nu].value() * f.x[nu].value()) < guard) return false;
    }
    return true;
  };

  bool real_params = true;
  for (const auto& M : pr.M) real_params = real_params && M.imag() == 0.0;
  model.real_structure = real_params && eps == 0;

  if (eps == 0) {
    // [V_μ,V_ν], [V^μ,V^ν], [V_μ,V^ν] and [V_μ,V^μ] in closed form, Q_μ = X_μ/U_μ
    const double r = 1.0 / std::sqrt(2.0);
    auto coeffs = [pr, r, m, n](const Point& p, int mu, int nu, int kind) {
      const KerrNutFunctions f = kerr_nut_functions(pr, p);
      std::vector<cplx> c(n, 0.0);
      auto x = [&](int k) { return f.x[k].value(); };
      auto sq = [&](int k) { return sqrt(f.Q[k]); };
      if (kind < 3) {
        const cplx cm = r * x(nu) * sq(nu).value() / (x(nu) * x(nu) - x(mu) * x(mu));
        const cplx cn = -r * x(mu) * sq(mu).value() / (x(mu) * x(mu) - x(nu) * x(nu));
        const int lm = kind == 1 ? m + mu : mu;
        const int ln = kind == 0 ? nu : m + nu;
        c[lm] += cm;
        c[ln] += cn;
      } else {
        const cplx d = r * sq(mu).grad(mu);
        c[mu] += d;
        c[m + mu] -= d;
        for (int k = 0; k < m; ++k) {
          if (k == mu) continue;
          const cplx e = 2.0 * r * x(mu) * sq(k).value() / (x(k) * x(k) - x(mu) * x(mu));
          c[k] += e;
          c[m + k] -= e;
        }
      }
      return c;
    };
    for (int mu = 0; mu < m; ++mu)
      for (int nu = 0; nu < m; ++nu) {
        const std::string tag = std::to_string(mu + 1) + "," + std::to_string(nu + 1);
        if (mu != nu) {
          model.brackets.push_back(
              {"[V_" + tag + "]", mu, nu, [coeffs, mu, nu](const Point& p) { return coeffs(p, mu, nu, 0); }, ""});
          model.brackets.push_back({"[V^" + tag + "]", m + mu, m + nu,
                                    [coeffs, mu, nu](const Point& p) { return coeffs(p, mu, nu, 1); }, ""});
          model.brackets.push_back({"[V_" + std::to_string(mu + 1) + ",V^" + std::to_string(nu + 1) + "]", mu, m + nu,
                                    [coeffs, mu, nu](const Point& p) { return coeffs(p, mu, nu, 2); }, ""});
        } else {
          model.brackets.push_back({"[V_" + std::to_string(mu + 1) + ",V^" + std::to_string(mu + 1) + "]", mu, m + mu,
                                    [coeffs, mu](const Point& p) { return coeffs(p, mu, mu, 3); }, ""});
        }
      }
  }
  model.notes.push_back("single principal square root of Q_μ = X_μ/U_μ in e^μ and e^{m+μ}");
  if (eps == 1) model.notes.push_back("odd leg uses the principal root of −c/A^(m), imaginary for real parameters");
  return model;
}

}  // namespace yano
