#include "yano/cky.hpp"

#include <algorithm>
#include <cmath>

namespace yano {

namespace {

// (Jα)_b = −α_d J^d_b, so that J(X*) = (JX)*.
constexpr double kJOneFormSign = -1.0;

double safe_ratio(double num, double den) {
  if (num == 0.0) return 0.0;
  return den > 0.0 ? num / den : std::numeric_limits<double>::infinity();
}

Eigen::MatrixXcd values(const JetMatrix& m) {
  Eigen::MatrixXcd out(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) out(i, j) = m(i, j).value();
  return out;
}

/// ‖∂φ‖ + ‖Γ‖‖φ‖: the size of the terms combined into ∇φ.
double nabla_scale(const JetForm& phi, const LocalGeometry& geo) {
  const int n = geo.dim();
  double d = 0.0, f = 0.0;
  for (size_t k = 0; k < phi.size(); ++k) {
    f += std::norm(phi[k].value());
    for (int i = 0; i < n; ++i) d += std::norm(phi[k].grad(i));
  }
  return std::sqrt(d) + geo.christoffel_tensor().frobenius() * std::sqrt(f);
}

PForm j_one_form(const PForm& a, const Eigen::MatrixXcd& J) {
  const int n = a.dim();
  PForm out(n, 1);
  for (int b = 0; b < n; ++b) {
    cplx s = 0.0;
    for (int d = 0; d < n; ++d) s += a[d] * J(d, b);
    out[b] = kJOneFormSign * s;
  }
  return out;
}

}  // namespace

CKYDecomposition cky_residual(const JetForm& phi, const LocalGeometry& geo) {
  if (phi.degree() != 2) throw std::invalid_argument("cky_residual expects a 2-form");
  const int n = geo.dim();
  if (phi.dim() != n) throw std::invalid_argument("form dimension does not match metric");
  CKYDecomposition out;
  out.nabla = covariant_derivative_form(phi, geo);
  const Tensor& nb = out.nabla;
  const Eigen::MatrixXcd& g = geo.metric().g();
  const Eigen::MatrixXcd& gi = geo.metric().inverse();

  out.K = PForm(n, 1);
  for (int b = 0; b < n; ++b) {
    cplx s = 0.0;
    for (int c = 0; c < n; ++c)
      for (int a = 0; a < n; ++a) s += gi(c, a) * nb(c, a, b);
    out.K[b] = s;
  }
  out.tau = PForm(n, 3);
  const auto& masks = out.tau.masks();
  for (size_t k = 0; k < masks.size(); ++k) {
    const auto i = exterior::indices(masks[k]);
    out.tau[k] = nb(i[0], i[1], i[2]) + nb(i[1], i[2], i[0]) + nb(i[2], i[0], i[1]);
  }
  out.residual = Tensor(n, 3);
  const double w = 1.0 / (n - 1);
  for (int c = 0; c < n; ++c)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        const cplx anti = (nb(c, a, b) + nb(a, b, c) + nb(b, c, a)) / 3.0;
        const cplx trace = w * (g(c, a) * out.K[b] - g(c, b) * out.K[a]);
        out.residual(c, a, b) = nb(c, a, b) - anti - trace;
      }
  out.residual_norm = out.residual.frobenius();
  out.nabla_norm = nb.frobenius();
  out.relative_residual = safe_ratio(out.residual_norm, nabla_scale(phi, geo));
  try {
    out.eigenvalues = normal_form(value_of(phi), geo.metric()).lambda;
  } catch (const Error&) {
    out.eigenvalues.clear();
  }
  return out;
}

CKYDecomposition cky_residual(const MetricField& g, const FormField& phi, const Point& p) {
  LocalGeometry geo(g, p);
  return at_point(p, [&] { return cky_residual(phi.eval(p), geo); });
}

double tau_condition_residual(const PForm& tau, const FrameAtPoint& f, double scale) {
  if (tau.degree() != 3) throw std::invalid_argument("tau condition expects a 3-form");
  const FrameLayout& l = f.layout();
  const PForm t = f.to_frame(tau);
  double r = 0.0;
  const auto& masks = t.masks();
  for (size_t k = 0; k < masks.size(); ++k) {
    const auto i = exterior::indices(masks[k]);
    const int p0 = l.pair_of(i[0]), p1 = l.pair_of(i[1]), p2 = l.pair_of(i[2]);
    if (p0 == p1 || p1 == p2 || p0 == p2) continue;
    r = std::max(r, std::abs(t[k]));
  }
  return scale > 0.0 ? r / scale : r;
}

NormalForm normal_form(const PForm& phi, const MetricAtPoint& g, const NormalFormOptions& opt) {
  if (phi.degree() != 2) throw std::invalid_argument("normal_form expects a 2-form");
  const int n = g.dim();
  if (phi.dim() != n) throw std::invalid_argument("form dimension does not match metric");
  const int m = n / 2;
  const bool odd = n % 2 == 1;

  Eigen::MatrixXcd ph(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) ph(a, b) = phi.component({a, b});
  const Eigen::MatrixXcd F = g.inverse() * ph;
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(F);
  if (es.info() != Eigen::Success) throw DegenerateSpectrum("eigen decomposition failed");
  const Eigen::VectorXcd ev = es.eigenvalues();
  const Eigen::MatrixXcd evec = es.eigenvectors();

  double rho = 0.0;
  for (int i = 0; i < n; ++i) rho = std::max(rho, std::abs(ev(i)));
  if (rho == 0.0) throw DegenerateSpectrum("2-form vanishes");
  const double gap = opt.gap * rho;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (std::abs(ev(i) - ev(j)) < gap) throw DegenerateSpectrum("eigenvalues of the 2-form collide");

  int kernel = -1;
  std::vector<bool> used(n, false);
  if (odd) {
    for (int i = 0; i < n; ++i)
      if (kernel < 0 || std::abs(ev(i)) < std::abs(ev(kernel))) kernel = i;
    if (std::abs(ev(kernel)) > opt.pair * rho) throw InconsistentInput("odd dimension without a zero eigenvalue");
    used[kernel] = true;
  }

  struct Pair {
    cplx lambda;
    int down;  // eigenvalue −λ
    int up;    // eigenvalue +λ
  };
  std::vector<Pair> pairs;
  for (int i = 0; i < n; ++i) {
    if (used[i]) continue;
    int best = -1;
    for (int j = 0; j < n; ++j) {
      if (used[j] || j == i) continue;
      if (best < 0 || std::abs(ev(j) + ev(i)) < std::abs(ev(best) + ev(i))) best = j;
    }
    if (best < 0 || std::abs(ev(best) + ev(i)) > opt.pair * rho)
      throw InconsistentInput("eigenvalues of the 2-form do not pair as ±λ");
    used[i] = used[best] = true;
    const cplx e = ev(i);
    const bool positive = e.imag() > opt.pair * rho || (std::abs(e.imag()) <= opt.pair * rho && e.real() > 0.0);
    pairs.push_back(positive ? Pair{e, best, i} : Pair{ev(best), i, best});
  }
  if (static_cast<int>(pairs.size()) != m) throw InconsistentInput("unexpected number of eigenvalue pairs");
  std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
    if (a.lambda.imag() != b.lambda.imag()) return a.lambda.imag() > b.lambda.imag();
    return a.lambda.real() > b.lambda.real();
  });

  auto phase_fix = [](Eigen::VectorXcd v) {
    int k = 0;
    for (int i = 1; i < v.size(); ++i)
      if (std::abs(v(i)) > std::abs(v(k))) k = i;
    v *= std::abs(v(k)) / v(k);
    return v;
  };

  Eigen::MatrixXcd frame(n, n);
  std::vector<cplx> lambda(m);
  for (int mu = 0; mu < m; ++mu) {
    Eigen::VectorXcd down = phase_fix(evec.col(pairs[mu].down).normalized());
    Eigen::VectorXcd up = evec.col(pairs[mu].up);
    const cplx s = (down.transpose() * g.g() * up)(0, 0);
    if (std::abs(s) < kSingularEpsilon) throw IllConditionedFrame("eigenvector pair is null");
    frame.col(mu) = down;
    frame.col(m + mu) = up / s;
    lambda[mu] = pairs[mu].lambda;
  }
  if (odd) {
    Eigen::VectorXcd v = evec.col(kernel);
    const cplx s = (v.transpose() * g.g() * v)(0, 0);
    if (std::abs(s) < kSingularEpsilon) throw IllConditionedFrame("kernel vector is null");
    v /= principal_sqrt(s);
    int k = 0;
    for (int i = 1; i < n; ++i)
      if (std::abs(v(i)) > std::abs(v(k))) k = i;
    if (v(k).real() < 0.0) v = -v;
    frame.col(2 * m) = v;
  }
  Eigen::MatrixXcd coframe = frame.inverse();
  NormalForm out{lambda, FrameAtPoint(coframe, FrameLayout{m, odd, true})};
  PForm rebuilt(n, 2);
  for (int mu = 0; mu < m; ++mu)
    rebuilt += wedge(one_form(out.frame.covector(mu)), one_form(out.frame.covector(m + mu))) * lambda[mu];
  out.reconstruction_error = max_abs(rebuilt - phi) / std::max(max_abs(phi), 1e-300);
  return out;
}

void FlatCKYConstants::validate() const {
  const int n = dim();
  if (n < 2) throw std::invalid_argument("flat CKY needs dimension at least 2");
  auto check = [n](const PForm& f, int p, const char* name) {
    if (f.dim() != n || f.degree() != p) throw std::invalid_argument(std::string("flat CKY constant ") + name + " has the wrong shape");
  };
  check(chi, 2, "chi");
  check(K, 1, "K");
  check(tau, 3, "tau");
  check(phi0, 2, "phi0");
}

JetForm flat_cky_jet(const FlatCKYConstants& c, const Point& p) {
  c.validate();
  const int n = c.dim();
  if (p.dim() != n) throw std::invalid_argument("point dimension does not match constants");
  auto lift = [n](const PForm& f) {
    JetForm out(n, f.degree());
    for (size_t k = 0; k < f.size(); ++k) out[k] = Jet2(n, f[k]);
    return out;
  };
  const std::vector<Jet2> x = lift_coordinates(p);
  JetForm xflat(n, 1);
  Jet2 r2(n, 0.0);
  for (int i = 0; i < n; ++i) {
    xflat[i] = Jet2(c.signature[i]) * x[i];
    r2 += xflat[i] * x[i];
  }
  const JetForm chi = lift(c.chi);
  JetForm out = chi * (Jet2(0.5) * r2);
  out -= wedge(xflat, interior(x, chi));
  out += wedge(xflat, lift(c.K));
  out += interior(x, lift(c.tau));
  out += lift(c.phi0);
  return out;
}

PForm flat_cky(const FlatCKYConstants& c, const Point& p) { return value_of(flat_cky_jet(c, p)); }

FormField flat_cky_field(const FlatCKYConstants& c) {
  c.validate();
  return FormField{c.dim(), 2, [c](const Point& p) { return flat_cky_jet(c, p); }};
}

double max_value(const std::vector<LabeledResidual>& r) {
  double m = 0.0;
  for (const auto& x : r) m = std::max(m, x.value);
  return m;
}

std::vector<LabeledResidual> eigenvalue_identity_residuals(const MetricField& g, const CoframeField& nf,
                                                           const FormField& phi, const Point& p) {
  if (!nf.layout.null) throw std::invalid_argument("identities need a null frame");
  FramedGeometry fg(g, nf, p);
  const LocalGeometry& geo = fg.local();
  const int n = fg.dim();
  const int m = nf.layout.m;
  const bool odd = nf.layout.odd;
  const JetForm ph = at_point(p, [&] { return phi.eval(p); });

  // λ_μ = φ(V_μ, V^μ) as jets
  std::vector<Jet2> lam(m, Jet2(n, 0.0));
  for (int mu = 0; mu < m; ++mu)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        lam[mu] += ph.component({i, j}) * fg.frame_jet(mu, i) * fg.frame_jet(m + mu, j);
      }
  const CKYDecomposition dec = cky_residual(ph, geo);
  auto K_of = [&](int a) {
    cplx s = 0.0;
    for (int i = 0; i < n; ++i) s += dec.K[i] * fg.frame_jet(a, i).value();
    return s;
  };
  const Tensor& G = fg.connection_lowered();
  auto dl = [&](int a, const Jet2& f) { return fg.derivative(a, f); };
  const int o = 2 * m;

  struct Term {
    std::string id;
    cplx t1, t2;
  };
  std::vector<Term> terms;
  const Jet2 zero(n, 0.0);
  for (int mu = 0; mu < m; ++mu) {
    const int dn = mu, up = m + mu;
    terms.push_back({"compKV1", K_of(dn), double(n - 1) * dl(dn, lam[mu])});
    terms.push_back({"compKV1^", K_of(up), double(n - 1) * dl(up, zero - lam[mu])});
    for (int nu = 0; nu < m; ++nu) {
      if (nu == mu) continue;
      const int ndn = nu, nup = m + nu;
      const cplx lm = lam[mu].value(), ln = lam[nu].value();
      terms.push_back({"LC-", (lm - ln) * G(ndn, dn, nup), -dl(dn, lam[mu] - lam[nu])});
      terms.push_back({"LC-^", (ln - lm) * G(nup, up, ndn), -dl(up, lam[nu] - lam[mu])});
      terms.push_back({"LC+", (lm + ln) * G(nup, dn, ndn), -dl(dn, lam[mu] + lam[nu])});
      terms.push_back({"LC+^", -(lm + ln) * G(ndn, up, nup), dl(up, lam[mu] + lam[nu])});
    }
    if (odd) {
      terms.push_back({"OddCond", lam[mu].value() * G(o, o, dn), dl(dn, lam[mu])});
      terms.push_back({"OddCond^", -lam[mu].value() * G(o, o, up), -dl(up, lam[mu])});
    }
  }
  // natural size of the terms: |λ|·|Γ| + |V(λ)|
  double lmax = 0.0, dmax = 0.0;
  for (int mu = 0; mu < m; ++mu) {
    lmax = std::max(lmax, std::abs(lam[mu].value()));
    for (int a = 0; a < n; ++a) dmax = std::max(dmax, std::abs(dl(a, lam[mu])));
  }
  const double floor = std::max(lmax * G.max_abs() + dmax, 1e-300);

  std::vector<LabeledResidual> out;
  for (const auto& t : terms) {
    const double r = std::abs(t.t1 + t.t2) / std::max({std::abs(t.t1), std::abs(t.t2), floor});
    auto it = std::find_if(out.begin(), out.end(), [&](const LabeledResidual& x) { return x.id == t.id; });
    if (it == out.end())
      out.push_back({t.id, r});
    else
      it->value = std::max(it->value, r);
  }
  return out;
}

KahlerChecks kahler_checks(const HamiltonianData& h, const MetricField& g, const Point& p) {
  LocalGeometry geo(g, p);
  const int n = geo.dim();
  return at_point(p, [&] {
    const JetForm om = h.omega.eval(p);
    const Eigen::MatrixXcd J = values(h.J(p));
    const Eigen::MatrixXcd& gm = geo.metric().g();
    const Eigen::MatrixXcd& gi = geo.metric().inverse();
    KahlerChecks k;
    k.j_square = (J * J + Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff();
    Eigen::MatrixXcd om_m(n, n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) om_m(a, b) = om.component({a, b}).value();
    const Eigen::MatrixXcd compat = om_m - J.transpose() * gm;
    k.compatibility = compat.cwiseAbs().maxCoeff() / std::max(1.0, om_m.cwiseAbs().maxCoeff());
    const JetForm ps = h.psi.eval(p);
    cplx tr = 0.0;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        cplx up = 0.0;
        for (int c = 0; c < n; ++c)
          for (int d = 0; d < n; ++d) up += gi(a, c) * gi(b, d) * om_m(c, d);
        tr += 0.5 * up * ps.component({a, b}).value();
      }
    const cplx sigma = h.sigma(p).value();
    k.trace = std::abs(sigma - tr) / std::max(1.0, std::abs(sigma));
    const Tensor nom = covariant_derivative_form(om, geo);
    k.parallel = safe_ratio(nom.frobenius(), nabla_scale(om, geo));
    return k;
  });
}

namespace {

void require_kahler(const HamiltonianData& h, const MetricField& g, const Point& p, double tol) {
  const KahlerChecks k = kahler_checks(h, g, p);
  if (k.j_square > tol || k.compatibility > tol || k.parallel > tol || k.trace > tol)
    throw PreconditionFailed("Kähler data inconsistent at the point");
}

}  // namespace

double hamiltonian_residual(const HamiltonianData& h, const MetricField& g, const Point& p, double kahler_tol) {
  require_kahler(h, g, p, kahler_tol);
  LocalGeometry geo(g, p);
  const int n = geo.dim();
  return at_point(p, [&] {
    const JetForm ps = h.psi.eval(p);
    const Jet2 sig = h.sigma(p);
    const Eigen::MatrixXcd J = values(h.J(p));
    const Eigen::MatrixXcd& gm = geo.metric().g();
    const Tensor nabla = covariant_derivative_form(ps, geo);
    PForm ds(n, 1);
    for (int i = 0; i < n; ++i) ds[i] = sig.grad(i);
    const PForm jds = j_one_form(ds, J);
    // ∇_Xψ = ½(dσ∧J(X*) − J(dσ)∧X*)
    Tensor res(n, 3);
    for (int c = 0; c < n; ++c) {
      PForm xs(n, 1);
      for (int i = 0; i < n; ++i) xs[i] = gm(c, i);
      const PForm rhs = (wedge(ds, j_one_form(xs, J)) - wedge(jds, xs)) * cplx(0.5);
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) res(c, a, b) = nabla(c, a, b) - rhs.component({a, b});
    }
    return safe_ratio(res.frobenius(), nabla_scale(ps, geo));
  });
}

namespace {

JetForm hamiltonian_phi(const HamiltonianData& h, const Point& p) {
  const JetForm ps = h.psi.eval(p);
  const JetForm om = h.omega.eval(p);
  const Jet2 sig = h.sigma(p);
  return ps - om * (Jet2(0.5) * sig);
}

}  // namespace

HamiltonianCKY hamiltonian_to_cky(const HamiltonianData& h, const MetricField& g, const Point& p, double kahler_tol) {
  require_kahler(h, g, p, kahler_tol);
  LocalGeometry geo(g, p);
  const int n = geo.dim();
  return at_point(p, [&] {
    const JetForm phi = hamiltonian_phi(h, p);
    HamiltonianCKY out;
    out.phi = value_of(phi);
    const CKYDecomposition dec = cky_residual(phi, geo);
    out.cky_residual = dec.relative_residual;
    const PForm delta = codifferential(phi, g.eval(p), n);
    const Eigen::MatrixXcd J = values(h.J(p));
    const PForm om = value_of(h.omega.eval(p));
    const PForm rhs = wedge(om, j_one_form(delta, J)) * cplx(3.0 / (n - 1));
    out.dphi_norm = norm(dec.tau);
    out.clcocl_residual = safe_ratio(norm(dec.tau + rhs), nabla_scale(phi, geo));
    return out;
  });
}

FormField hamiltonian_cky_field(const HamiltonianData& h) {
  const int n = h.psi.n;
  return FormField{n, 2, [h](const Point& p) { return hamiltonian_phi(h, p); }};
}

}  // namespace yano
