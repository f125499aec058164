#include <cmath>

#include "yano/catalog.hpp"

namespace yano {

namespace {

Jet2 poly(const std::vector<double>& c, const Jet2& x) {
  Jet2 out(x.dim(), 0.0);
  for (auto it = c.rbegin(); it != c.rend(); ++it) out = out * x + Jet2(*it);
  return out;
}

// Coordinates (x, y, φ, ψ, t); rows e¹, e², e³, e⁴, e⁰.
JetMatrix lmp5_real_coframe(const ParameterRecord& pr, const Point& p) {
  const int n = 5;
  const auto c = lift_coordinates(p);
  const Jet2 &x = c[0], &y = c[1];
  const Jet2 X = poly(pr.x_coeffs, x), Y = poly(pr.y_coeffs, y);
  const Jet2 w = Jet2(1.0) - x * y;
  JetMatrix e(n, n);
  for (int a = 0; a < n; ++a)
    for (int i = 0; i < n; ++i) e(a, i) = Jet2(n, 0.0);
  e(0, 0) = sqrt((x - y) / X) / (Jet2(2.0) * w);
  e(1, 1) = sqrt((y - x) / Y) / (Jet2(2.0) * w);
  const Jet2 f3 = sqrt(X / (x * (x - y))) / w;
  e(2, 2) = f3;
  e(2, 3) = f3 * y;
  const Jet2 f4 = sqrt(Y / (y * (y - x))) / w;
  e(3, 2) = f4;
  e(3, 3) = f4 * x;
  const Jet2 f0 = sqrt(Jet2(pr.a0) / (x * y));
  e(4, 2) = f0;
  e(4, 3) = f0 * (x + y);
  e(4, 4) = f0 * x * y;
  return e;
}

enum class Display { V1V2, V1Vu2, V1Vu1, V1Vu1Corrected, V1E0 };

// Closed-form commutator coefficients in labels V1=0, V2=1, V^1=2, V^2=3, e0=4, with
// (u, v, U, V) = (x, y, X, Y).
std::vector<cplx> display(Display d, double uval, double vval, const std::vector<double>& Uc,
                          const std::vector<double>& Vc, double a0) {
  const double r = 1.0 / std::sqrt(2.0);
  const Jet2 u = Jet2::variable(2, 0, uval), v = Jet2::variable(2, 1, vval);
  const Jet2 U = poly(Uc, u), V = poly(Vc, v);
  const Jet2 w = Jet2(1.0) - u * v;
  const cplx sU = sqrt(U / (u - v)).value();
  const cplx sV = sqrt(V / (v - u)).value();
  std::vector<cplx> c(5, 0.0);
  switch (d) {
    case Display::V1V2:
    case Display::V1Vu2: {
      c[0] = -r * sV * (-2.0 * uval * uval + uval * vval + 1.0) / (uval - vval);
      c[d == Display::V1V2 ? 1 : 3] = r * sU * (-2.0 * vval * vval + uval * vval + 1.0) / (vval - uval);
      break;
    }
    case Display::V1Vu1:
    case Display::V1Vu1Corrected: {
      const Jet2 h = w * sqrt(U / (u - v));
      const double s = d == Display::V1Vu1 ? 1.0 : -1.0;
      const cplx P = r * (2.0 * h.grad(0) + s * sU * (1.0 - 5.0 * uval * vval) / uval);
      const cplx Q = -r * sV * std::sqrt(uval / vval) * 2.0 * (1.0 - uval * vval) / (uval - vval);
      c[0] = P;
      c[2] = -P;
      c[1] = Q;
      c[3] = -Q;
      c[4] = cplx(0.0, 2.0) * std::sqrt(a0 / (uval * vval)) * std::pow(1.0 - uval * vval, 2) / std::sqrt(uval);
      break;
    }
    case Display::V1E0:
      c[4] = -r * (1.0 - uval * vval) / uval * sU;
      break;
  }
  return c;
}

int conj_label(int a) { return a == 4 ? 4 : (a + 2) % 4; }
int swap_label(int a) { return a == 4 ? 4 : (a ^ 1); }

}  // namespace

ParameterRecord default_lmp5_parameters() {
  ParameterRecord p;
  p.m = 2;
  p.eps = 1;
  p.a0 = 1.0;
  p.x_coeffs = {1.0, 1.0, 0.5, -0.2, 0.05};
  p.y_coeffs = {-1.0, -0.5, -0.3, -0.1, -0.02};
  return p;
}

MetricModel build_lmp5(const ParameterRecord& params) {
  ParameterRecord pr = params;
  pr.m = 2;
  pr.eps = 1;
  if (pr.x_coeffs.empty() || pr.y_coeffs.empty() || pr.x_coeffs.size() > 5 || pr.y_coeffs.size() > 5)
    throw ConfigError("LMP5 needs X and Y coefficients up to quartic order");
  if (!(pr.a0 > 0.0)) throw ConfigError("LMP5 needs a0 > 0");
  const int n = 5;

  MetricModel model;
  model.id = "lmp5";
  model.n = n;
  model.m = 2;
  model.odd = true;
  model.params = pr;

  CoframeField real;
  real.n = n;
  real.layout = FrameLayout{2, true, false};
  real.eval = [pr](const Point& p) { return lmp5_real_coframe(pr, p); };
  model.real_coframe = real;
  model.metric = catalog_detail::metric_from_coframe(real);
  model.metric.chart = "lmp5";
  model.null_coframe = catalog_detail::null_from_real(real, 2, true);
  model.real_structure = true;

  model.box.lo = {1.2, 0.2, 0.0, 0.0, 0.0};
  model.box.hi = {1.6, 0.5, 1.0, 1.0, 1.0};
  catalog_detail::apply_box_override(model.box, pr, n);
  model.box.guard = pr.guard;
  const double guard = pr.guard;
  model.box.accept = [pr, guard](const Point& p) {
    const double x = p.coords[0], y = p.coords[1];
    const double X = poly(pr.x_coeffs, Jet2(x)).value().real();
    const double Y = poly(pr.y_coeffs, Jet2(y)).value().real();
    for (double v : {x, y, X, Y, x - y, 1.0 - x * y})
      if (std::abs(v) < guard) return false;
    // principal roots stay off the branch cut
    return (x - y) / X > 0.0 && (y - x) / Y > 0.0 && x * y > 0.0;
  };

  struct Entry {
    const char* name;
    Display d;
    int a, b;
    const char* erratum;
  };
  const char* p_sign =
      "V1 and V^1 coefficients hold with (5xy−1)/x in place of (1−5xy)/x; the V2, V^2 and e0 "
      "coefficients hold as printed";
  const Entry entries[] = {{"[V1,V2]", Display::V1V2, 0, 1, ""},
                           {"[V1,V^2]", Display::V1Vu2, 0, 3, ""},
                           {"[V1,V^1]", Display::V1Vu1, 0, 2, p_sign},
                           {"[V1,V^1] corrected", Display::V1Vu1Corrected, 0, 2, ""},
                           {"[V1,e0]", Display::V1E0, 0, 4, ""}};
  for (const Entry& en : entries)
    for (int variant = 0; variant < 4; ++variant) {
      const bool conj = variant & 1, swap = variant & 2;
      auto lab = [conj, swap](int a) {
        if (swap) a = swap_label(a);
        return conj ? conj_label(a) : a;
      };
      std::string id = en.name;
      if (swap) id += " (1<->2)";
      if (conj) id += " (conjugate)";
      const Display d = en.d;
      model.brackets.push_back({id, lab(en.a), lab(en.b), [pr, d, conj, swap, lab](const Point& p) {
                                  const double x = p.coords[0], y = p.coords[1];
                                  const std::vector<cplx> c =
                                      swap ? display(d, y, x, pr.y_coeffs, pr.x_coeffs, pr.a0)
                                           : display(d, x, y, pr.x_coeffs, pr.y_coeffs, pr.a0);
                                  std::vector<cplx> out(5, 0.0);
                                  for (int k = 0; k < 5; ++k) out[lab(k)] = conj ? std::conj(c[k]) : c[k];
                                  return out;
                                },
                                en.erratum});
    }

  const CoframeField nf = model.null_coframe;
  AuxiliaryForm neg;
  neg.id = "normal-form candidate λ1 = x^{1/2}, λ2 = y^{1/2}";
  neg.metric = model.metric;
  neg.form = catalog_detail::normal_form_field(nf, [](const Point& p) {
    const auto c = lift_coordinates(p);
    return std::vector<Jet2>{sqrt(c[0]), sqrt(c[1])};
  });
  neg.expect = Expectation::AboveFloor;
  neg.coordinates = {0, 1, 2, 3, 4};
  neg.note = "no CKY tensor in normal form in the V-frame";
  model.auxiliary.push_back(neg);

  // four-dimensional base g4 = Σ_{i=1..4} (e^i)² on (x, y, φ, ψ)
  CoframeField real4;
  real4.n = 4;
  real4.layout = FrameLayout{2, false, false};
  real4.eval = [pr](const Point& p4) {
    Point p5{{p4.coords[0], p4.coords[1], p4.coords[2], p4.coords[3], 0.0}, p4.chart_id};
    const JetMatrix e5 = lmp5_real_coframe(pr, p5);
    JetMatrix e(4, 4);
    for (int a = 0; a < 4; ++a)
      for (int i = 0; i < 4; ++i) {
        const Jet2& s = e5(a, i);
        Jet2 t(4, s.value());
        for (int k = 0; k < 4; ++k) {
          t.set_grad(k, s.grad(k));
          for (int l = 0; l < 4; ++l) t.set_hess(k, l, s.hess(k, l));
        }
        e(a, i) = t;
      }
    return e;
  };
  const CoframeField nf4 = catalog_detail::null_from_real(real4, 2, false);
  AuxiliaryForm g4;
  g4.id = "g4 CKY i x^{1/2}/(1-xy), i y^{1/2}/(1-xy)";
  g4.metric = catalog_detail::metric_from_coframe(real4);
  g4.form = catalog_detail::normal_form_field(nf4, [](const Point& p) {
    const auto c = lift_coordinates(p);
    const Jet2 w = Jet2(1.0) - c[0] * c[1];
    return std::vector<Jet2>{Jet2(cplx(0, 1)) * sqrt(c[0]) / w, Jet2(cplx(0, 1)) * sqrt(c[1]) / w};
  });
  g4.expect = Expectation::Pass;
  g4.coordinates = {0, 1, 2, 3};
  g4.note = "four-dimensional base metric; not part of the five-dimensional claim";
  model.auxiliary.push_back(g4);

  model.notes.push_back("X and Y are user quartics; the Einstein condition on them is not imposed");
  model.notes.push_back("principal roots of (x−y)/X, (y−x)/Y, X/(x(x−y)), Y/(y(y−x)), a0/(xy)");
  return model;
}

}  // namespace yano
