#include <bit>
#include <cmath>
#include <random>

#include "doctest.h"
#include "yano/catalog.hpp"
#include "yano/foliation.hpp"
#include "yano/spin.hpp"

using namespace yano;

namespace {

Spinor random_spinor(int m, std::mt19937& rng) {
  std::normal_distribution<double> d;
  Spinor s(m);
  for (int k = 0; k < s.size(); ++k) s.c(k) = cplx(d(rng), d(rng));
  return s;
}

Eigen::VectorXcd random_vector(int k, std::mt19937& rng) {
  std::normal_distribution<double> d;
  Eigen::VectorXcd v(k);
  for (int i = 0; i < k; ++i) v(i) = cplx(d(rng), d(rng));
  return v;
}

// subset-basis expansion of ι_{V_b} ι_{V_a} θ^S
Spinor contract_two(int m, int a, int b, Mask s) {
  Spinor out(m);
  auto iota = [](int mu, Mask t, double& sign) -> Mask {
    sign *= std::popcount(t & ((1u << mu) - 1u)) % 2 ? -1.0 : 1.0;
    return t ^ (1u << mu);
  };
  if (!((s >> a) & 1u) || !((s >> b) & 1u) || a == b) return out;
  double sign = 1.0;
  Mask t = iota(a, s, sign);
  t = iota(b, t, sign);
  out.c(t) = sign;
  return out;
}

double max_diff(const Spinor& a, const Spinor& b) { return (a.c - b.c).cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("Clifford relation and squaring law") {
  for (int m = 1; m <= 4; ++m)
    for (bool odd : {false, true}) {
      const FrameLayout l{m, odd, true};
      const Eigen::MatrixXcd P = l.pairing();
      const int N = 1 << m;
      for (int a = 0; a < l.size(); ++a)
        for (int b = 0; b < l.size(); ++b) {
          const Eigen::MatrixXcd ga = gamma_matrix(a, l), gb = gamma_matrix(b, l);
          // −2 g_ab with g = ½P
          const Eigen::MatrixXcd want = -P(a, b) * Eigen::MatrixXcd::Identity(N, N);
          CHECK((ga * gb + gb * ga - want).cwiseAbs().maxCoeff() < 1e-14);
        }
    }
  std::mt19937 rng(1);
  for (int t = 0; t < 100; ++t) {
    const CliffordVector v{random_vector(4, rng), random_vector(4, rng)};
    const Spinor z = random_spinor(4, rng);
    const Spinor vz = clifford_mul(v, clifford_mul(v, z));
    Spinor want = z;
    want.c *= -(v.xi.array() * v.X.array()).sum();  // −ξ(X)
    CHECK(max_diff(vz, want) < 1e-12 * (1.0 + want.norm()));
  }
  const Spinor one = Spinor::basis(3, 0);
  const CliffordVector x{random_vector(3, rng), Eigen::VectorXcd::Zero(3)};
  CHECK(clifford_mul(x, one).norm() == 0.0);
  CliffordVector xi{Eigen::VectorXcd::Zero(3), random_vector(3, rng)};
  const Spinor s = clifford_mul(xi, one);
  for (int mu = 0; mu < 3; ++mu) CHECK(s.c(1 << mu) == xi.xi(mu));
}

TEST_CASE("form action on 2-forms") {
  const int m = 3;
  const FrameLayout l{m, false, true};
  const int n = l.size();
  // B = θ^1∧θ^2 on 1 gives −θ^1∧θ^2
  PForm b(n, 2);
  b.set({l.lower(0), l.lower(1)}, 1.0);
  const Spinor r = form_action(b, l, Spinor::basis(m, 0));
  CHECK(r.c(0b011) == cplx(-1.0));
  CHECK(r.c.cwiseAbs().sum() == doctest::Approx(1.0));
  // β = V_1∧V_2 (components on θ_1∧θ_2) contracts: brute force over the subset basis
  PForm beta(n, 2);
  beta.set({l.upper(0), l.upper(1)}, 1.0);
  for (Mask s = 0; s < 8; ++s) {
    const Spinor got = form_action(beta, l, Spinor::basis(m, s));
    CHECK(max_diff(got, contract_two(m, 0, 1, s)) < 1e-15);
  }
  CHECK(std::abs(form_action(beta, l, Spinor::basis(m, 0b011)).c(0)) == doctest::Approx(1.0));
  // trace part: A = θ^1∧θ_1 acts as −½ on 1
  PForm a(n, 2);
  a.set({l.lower(0), l.upper(0)}, 1.0);
  CHECK(form_action(a, l, Spinor::basis(m, 0)).c(0) == cplx(-0.5));
  CHECK_THROWS_AS(form_action(PForm(n + 1, 2), l, Spinor::basis(m, 0)), std::invalid_argument);
}

TEST_CASE("normal-form 2-form acts diagonally with the closed-form eigenvalues") {
  std::mt19937 rng(4);
  std::normal_distribution<double> d;
  for (int m = 1; m <= 4; ++m) {
    const FrameLayout l{m, false, true};
    std::vector<cplx> lambda;
    PForm phi(l.size(), 2);
    for (int mu = 0; mu < m; ++mu) {
      lambda.emplace_back(d(rng), d(rng));
      phi.set({l.lower(mu), l.upper(mu)}, lambda[mu]);
    }
    for (Mask s = 0; s < (1u << m); ++s) {
      Spinor want = Spinor::basis(m, s);
      want.c *= cky_spin_eigenvalue(lambda, s);
      CHECK(max_diff(form_action(phi, l, Spinor::basis(m, s)), want) < 1e-14);
    }
  }
  const std::vector<cplx> lam{1.0, 2.0, 3.5};
  CHECK(cky_spin_eigenvalue(lam, 0) == cplx(-3.25));
  CHECK(cky_spin_eigenvalue(lam, 0b111) == cplx(3.25));
  CHECK(cky_spin_eigenvalue({cplx(0.8)}, 1) == cplx(0.4));
  // m = 1 direct 2×2 action
  const FrameLayout l1{1, false, true};
  PForm f(2, 2);
  f.set({0, 1}, 0.8);
  const Eigen::MatrixXcd M = form_action_matrix(f, l1);
  CHECK(std::abs(M(0, 0) + 0.4) < 1e-15);
  CHECK(std::abs(M(1, 1) - 0.4) < 1e-15);
  CHECK(std::abs(M(0, 1)) + std::abs(M(1, 0)) == 0.0);
}

TEST_CASE("purity") {
  const int m = 4;
  const PurityResult one = purity_test(Spinor::basis(m, 0));
  CHECK(one.pure);
  CHECK(one.dim == m);
  // N(1) = span{V_μ}: no weight on the V^μ labels
  CHECK(one.basis.bottomRows(m).cwiseAbs().maxCoeff() < 1e-14);
  const PurityResult top = purity_test(Spinor::basis(m, 0b0011));
  CHECK(top.pure);
  Spinor mixed = Spinor::basis(m, 0);
  mixed.c(0b1111) = 1.0;
  const PurityResult r = purity_test(mixed);
  CHECK(r.chiral);
  CHECK(r.dim == 0);
  CHECK_FALSE(r.pure);
  Spinor nonchiral = Spinor::basis(m, 0);
  nonchiral.c(0b0001) = 1.0;
  CHECK_FALSE(purity_test(nonchiral).chiral);
  CHECK_THROWS_AS(purity_test(Spinor(m)), PreconditionFailed);
  // every pure spinor found by random search has single-parity support
  std::mt19937 rng(6);
  for (int t = 0; t < 50; ++t) {
    const Spinor z = random_spinor(3, rng);
    const PurityResult p = purity_test(z);
    if (p.pure) CHECK(z.chirality(1e-10) != 0);
  }
  // in rank 3 every chiral spinor is pure
  for (int t = 0; t < 10; ++t) {
    Spinor z = random_spinor(3, rng);
    for (int k = 0; k < 8; ++k)
      if (std::popcount(static_cast<unsigned>(k)) % 2) z.c(k) = 0.0;
    CHECK(purity_test(z).pure);
  }
}

TEST_CASE("annihilator of a basis spinor is the selector distribution") {
  for (int m = 1; m <= 4; ++m) {
    const FrameLayout l{m, false, true};
    for (const auto& sel : enumerate_distributions(m, false)) {
      const PurityResult p = purity_test(Spinor::basis(m, sel.mask));
      REQUIRE(p.pure);
      const auto labels = spanning_labels(sel, l);
      // N(θ^S) is spanned by the unit vectors of the selector labels
      Eigen::MatrixXcd e = Eigen::MatrixXcd::Zero(2 * m, m);
      for (int k = 0; k < m; ++k) e(labels[k], k) = 1.0;
      const Eigen::MatrixXcd proj = p.basis * p.basis.adjoint();
      CHECK((proj * e - e).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("spinor pairing symmetry and bilinears") {
  std::mt19937 rng(9);
  for (int m = 1; m <= 5; ++m) {
    const double parity = (m * (m - 1) / 2) % 2 ? -1.0 : 1.0;
    for (int t = 0; t < 5; ++t) {
      const Spinor a = random_spinor(m, rng), b = random_spinor(m, rng);
      CHECK(std::abs(spinor_pairing(a, b) - parity * spinor_pairing(b, a)) < 1e-12);
    }
  }
  const FrameLayout l{2, false, true};
  const PForm k = spinor_bilinear(Spinor::basis(2, 0b01), Spinor::basis(2, 0), 1, l);
  int nonzero = 0;
  for (size_t i = 0; i < k.size(); ++i) nonzero += std::abs(k[i]) > 1e-14;
  CHECK(nonzero == 1);
  CHECK(std::abs(k.component({l.upper(1)})) == doctest::Approx(1.0));
  // for pure ζ the 1-form ⟨η, γ_a ζ⟩ is null and annihilates N(ζ)
  for (int m : {2, 3, 4}) {
    const FrameLayout lm{m, false, true};
    const Eigen::MatrixXcd P = lm.pairing();
    for (Mask s = 0; s < (1u << m); ++s) {
      const Spinor eta = random_spinor(m, rng);
      const PForm v = spinor_bilinear(eta, Spinor::basis(m, s), 1, lm);
      Eigen::VectorXcd kv(2 * m);
      for (int a = 0; a < 2 * m; ++a) kv(a) = v[a];
      CHECK(std::abs((kv.transpose() * P * kv).value()) < 1e-10);
      const PurityResult p = purity_test(Spinor::basis(m, s));
      CHECK((kv.transpose() * p.basis).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("spin connection obeys the Leibniz rule") {
  std::mt19937 rng(12);
  for (auto [m, eps] : {std::pair{2, 0}, std::pair{2, 1}, std::pair{3, 0}}) {
    const MetricModel model = build_kerr_nut_ads(m, eps);
    const Point p = model.sample(1, 13)[0];
    FramedGeometry fg(model.metric, model.null_coframe, p);
    const FrameLayout& l = fg.layout();
    const int n = l.size();
    // ζ with coordinate-dependent coefficients and a vector field with frame components v^b
    const Spinor z0 = random_spinor(m, rng);
    const Eigen::VectorXcd v0 = random_vector(n, rng);
    SpinorField zeta{m, [z0, n](const Point& q) {
                       const auto x = lift_coordinates(q);
                       std::vector<Jet2> out;
                       for (int k = 0; k < z0.size(); ++k) out.push_back(z0.c(k) * sin(x[k % n] * (1.0 + k)) + x[0] * x[1]);
                       return out;
                     }};
    auto vcomp = [v0, n](const std::vector<Jet2>& x, int b) { return v0(b) * exp(x[(b + 1) % n] * 0.3) + x[b]; };
    // w = v·ζ as a spinor field
    SpinorField vz{m, [&](const Point& q) {
                     const auto x = lift_coordinates(q);
                     const auto zj = zeta.eval(q);
                     std::vector<Jet2> out(zj.size(), Jet2(n, 0.0));
                     for (int b = 0; b < n; ++b) {
                       const Eigen::MatrixXcd g = gamma_matrix(b, l);
                       const Jet2 vb = vcomp(x, b);
                       for (int i = 0; i < g.rows(); ++i)
                         for (int j = 0; j < g.cols(); ++j)
                           if (g(i, j) != 0.0) out[i] = out[i] + g(i, j) * vb * zj[j];
                     }
                     return out;
                   }};
    const auto xj = lift_coordinates(p);
    for (int a = 0; a < n; ++a) {
      const Spinor lhs = spinor_covariant_derivative(vz, fg, a);
      // (∇_a v)^c = V_a(v^c) + v^b Γ_ab^c
      Eigen::VectorXcd dv(n);
      for (int c = 0; c < n; ++c) {
        dv(c) = fg.derivative(a, vcomp(xj, c));
        for (int b = 0; b < n; ++b) dv(c) += vcomp(xj, b).value() * fg.connection()(a, b, c);
      }
      const Spinor zv = spinor_value(zeta, p);
      const Spinor dz = spinor_covariant_derivative(zeta, fg, a);
      Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(zv.size());
      for (int b = 0; b < n; ++b) {
        const Eigen::MatrixXcd g = gamma_matrix(b, l);
        rhs += dv(b) * (g * zv.c) + vcomp(xj, b).value() * (g * dz.c);
      }
      CHECK((lhs.c - rhs).norm() < 1e-9 * (1.0 + rhs.norm()));
    }
  }
}

TEST_CASE("basis spinors of Kerr-NUT-(A)dS are integrable") {
  for (auto [m, eps] : {std::pair{2, 0}, std::pair{3, 0}, std::pair{2, 1}, std::pair{3, 1}}) {
    const MetricModel model = build_kerr_nut_ads(m, eps);
    for (const Point& p : model.sample(2, 19)) {
      FramedGeometry fg(model.metric, model.null_coframe, p);
      for (Mask s = 0; s < (1u << m); ++s)
        CHECK(spinor_integrability_residual(constant_spinor_field(Spinor::basis(m, s)), fg) < 1e-9);
    }
  }
}

TEST_CASE("integrability on flat space") {
  const MetricModel model = build_flat(4, "euclidean");
  const Point p{{0.3, 0.6, -0.2, 0.4}};
  FramedGeometry fg(model.metric, model.null_coframe, p);
  CHECK(spinor_integrability_residual(constant_spinor_field(Spinor::basis(2, 0)), fg) == 0.0);
  for (int a = 0; a < 4; ++a) CHECK(spinor_covariant_derivative(constant_spinor_field(Spinor::basis(2, 0)), fg, a).norm() == 0.0);
  // e^{x¹}(1 + x² θ^{12}) is pure at every point but not integrable
  SpinorField rot{2, [](const Point& q) {
                    const auto x = lift_coordinates(q);
                    std::vector<Jet2> out(4, Jet2(4, 0.0));
                    out[0] = exp(x[0]);
                    out[3] = exp(x[0]) * x[1];
                    return out;
                  }};
  CHECK(purity_test(spinor_value(rot, p)).pure);
  CHECK(spinor_integrability_residual(rot, fg) > 1e-3);
  Spinor mixed = Spinor::basis(2, 0);
  mixed.c(1) = 1.0;
  CHECK_THROWS_AS(spinor_integrability_residual(constant_spinor_field(mixed), fg), PreconditionFailed);
}

TEST_CASE("Weyl spinor condition") {
  for (int m : {2, 3}) {
    const MetricModel model = build_kerr_nut_ads(m, 0);
    const Point p = model.sample(1, 23)[0];
    FramedGeometry fg(model.metric, model.null_coframe, p);
    const Tensor w = fg.project(fg.local().curvature().weyl);
    for (Mask s = 0; s < (1u << m); ++s) {
      const FlaggedResidual r = weyl_spin_residual(w, fg.layout(), s);
      CHECK_FALSE(r.vacuous);
      CHECK(r.value < 1e-9);
    }
  }
  // generic Weyl tensor fails
  std::mt19937 rng(2);
  std::normal_distribution<double> d;
  const FrameLayout l{2, false, true};
  Tensor r(4, 4);
  for (int t = 0; t < 3; ++t) {
    Eigen::MatrixXd h(4, 4);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j <= i; ++j) h(i, j) = h(j, i) = d(rng);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k)
          for (int q = 0; q < 4; ++q) r(i, j, k, q) += (t % 2 ? -2.0 : 2.0) * (h(i, k) * h(j, q) - h(i, q) * h(j, k));
  }
  const Tensor w = weyl_part(r, l.pairing());
  CHECK(weyl_spin_residual(w, l, 0).value > 1e-3);
  const MetricModel flat = build_flat(4, "euclidean");
  FramedGeometry ff(flat.metric, flat.null_coframe, flat.sample(1, 1)[0]);
  CHECK(weyl_spin_residual(ff.project(ff.local().curvature().weyl), ff.layout(), 0).vacuous);
  CHECK_THROWS_AS(weyl_spin_residual(Tensor(5, 4), FrameLayout{2, true, true}, 0), PreconditionFailed);
}
