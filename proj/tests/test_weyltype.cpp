#include <cmath>
#include <random>

#include "doctest.h"
#include "yano/catalog.hpp"
#include "yano/weyltype.hpp"

using namespace yano;

namespace {

Eigen::MatrixXcd random_metric(int n, std::mt19937& rng) {
  std::normal_distribution<double> d;
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = 0.3 * d(rng);
  Eigen::MatrixXd g = a + a.transpose() + 3.0 * Eigen::MatrixXd::Identity(n, n);
  g(0, 0) = -g(0, 0);
  return g.cast<cplx>();
}

PForm random_two_form(int n, std::mt19937& rng) {
  std::normal_distribution<double> d;
  PForm f(n, 2);
  for (size_t k = 0; k < f.size(); ++k) f[k] = cplx(d(rng), d(rng));
  return f;
}

// sum of Kulkarni–Nomizu squares of random symmetric matrices: algebraic curvature tensor
Tensor random_curvature(int n, std::mt19937& rng) {
  std::normal_distribution<double> d;
  Tensor r(n, 4);
  for (int term = 0; term < 3; ++term) {
    Eigen::MatrixXd h(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j <= i; ++j) h(i, j) = h(j, i) = d(rng);
    const double s = term % 2 ? -1.0 : 1.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) r(i, j, k, l) += s * 2.0 * (h(i, k) * h(j, l) - h(i, l) * h(j, k));
  }
  return r;
}

PForm normal_form_phi(const std::vector<cplx>& lambda, const FrameLayout& l) {
  PForm phi(l.size(), 2);
  for (int mu = 0; mu < l.m; ++mu) phi.set({l.lower(mu), l.upper(mu)}, lambda[mu]);
  return phi;
}

PForm basis_two_form(int n, int a, int b) {
  PForm f(n, 2);
  f.set({a, b}, 1.0);
  return f;
}

double max_diff(const PForm& a, const PForm& b) {
  double r = 0.0;
  for (size_t k = 0; k < a.size(); ++k) r = std::max(r, std::abs(a[k] - b[k]));
  return r;
}

}  // namespace

TEST_CASE("phi hat is diagonal on the canonical basis of a normal-form frame") {
  const FrameLayout l{3, true, true};
  const std::vector<cplx> lambda{cplx(0.4, 1.3), cplx(-0.7, 0.2), cplx(2.1, -0.5)};
  const int n = l.size();
  const TwoFormOperator op = phi_hat(normal_form_phi(lambda, l), l.pairing());
  auto expect = [&](int a, int b, cplx v) {
    const PForm e = basis_two_form(n, a, b);
    PForm want = e;
    want *= v;
    CHECK(max_diff(op.apply(e), want) < 1e-14);
  };
  for (int mu = 0; mu < 3; ++mu) {
    expect(l.lower(mu), l.upper(mu), 0.0);
    expect(l.lower(mu), l.odd_leg(), lambda[mu]);
    expect(l.upper(mu), l.odd_leg(), -lambda[mu]);
    for (int nu = 0; nu < 3; ++nu) {
      if (nu == mu) continue;
      expect(l.lower(mu), l.upper(nu), lambda[mu] - lambda[nu]);
      if (mu < nu) {
        expect(l.lower(mu), l.lower(nu), lambda[mu] + lambda[nu]);
        expect(l.upper(mu), l.upper(nu), -(lambda[mu] + lambda[nu]));
      }
    }
  }
  CHECK(op.skew_defect() < 1e-12);
}

TEST_CASE("phi hat is the derivation extension of F") {
  std::mt19937 rng(3);
  for (int n : {3, 4, 6}) {
    const Eigen::MatrixXcd g = random_metric(n, rng);
    const PForm phi = random_two_form(n, rng);
    const TwoFormOperator op = phi_hat(phi, g);
    const Eigen::MatrixXcd gi = g.inverse();
    // F on 1-forms: (Fα)_b = −α_c g^{cd} φ_db
    auto act = [&](const PForm& a) {
      PForm out(n, 1);
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          for (int d = 0; d < n; ++d) out[b] -= a[c] * gi(c, d) * phi.component({d, b});
      return out;
    };
    for (int t = 0; t < 5; ++t) {
      PForm a(n, 1), b(n, 1);
      std::normal_distribution<double> d;
      for (int i = 0; i < n; ++i) {
        a[i] = cplx(d(rng), d(rng));
        b[i] = cplx(d(rng), d(rng));
      }
      const PForm lhs = op.apply(wedge(a, b));
      const PForm rhs = wedge(act(a), b) + wedge(a, act(b));
      CHECK(max_diff(lhs, rhs) < 1e-11);
    }
    CHECK(op.skew_defect() < 1e-10);
  }
}

TEST_CASE("curvature operator is symmetric and is K times the identity for constant curvature") {
  std::mt19937 rng(5);
  for (int n : {3, 4, 5}) {
    const Eigen::MatrixXcd g = random_metric(n, rng);
    CHECK(curvature_hat(random_curvature(n, rng), g).symmetry_defect() < 1e-10);
    Tensor r(n, 4);
    const double k = 0.7;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b) r(i, j, a, b) = k * (g(i, a) * g(j, b) - g(i, b) * g(j, a));
    const TwoFormOperator c = curvature_hat(r, g);
    const int N = static_cast<int>(c.basis.size());
    CHECK((c.matrix - k * Eigen::MatrixXcd::Identity(N, N)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(weyl_part(r, g).max_abs() < 1e-12);
  }
}

TEST_CASE("weyl part is traceless and matches the geometry module") {
  std::mt19937 rng(8);
  for (int n : {4, 5}) {
    const Eigen::MatrixXcd g = random_metric(n, rng);
    const Tensor w = weyl_part(random_curvature(n, rng), g);
    const Eigen::MatrixXcd gi = g.inverse();
    double tr = 0.0;
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l) {
        cplx s = 0.0;
        for (int i = 0; i < n; ++i)
          for (int k = 0; k < n; ++k) s += gi(i, k) * w(i, j, k, l);
        tr = std::max(tr, std::abs(s));
      }
    CHECK(tr < 1e-9 * w.max_abs());
  }
  const MetricModel model = build_kerr_nut_ads(2, 0);
  const Point p = model.sample(1, 4)[0];
  const CurvatureTable c = curvature(model.metric, p);
  const LocalGeometry geo(model.metric, p);
  const Tensor w = weyl_part(c.riemann, geo.metric().g());
  double d = 0.0;
  for (size_t k = 0; k < w.size(); ++k) d = std::max(d, std::abs(w[k] - c.weyl[k]));
  CHECK(d < 1e-12 * c.weyl.max_abs());
}

TEST_CASE("spectrum of phi hat matches the closed forms and has an m-dimensional kernel") {
  std::mt19937 rng(11);
  std::normal_distribution<double> d;
  for (int n = 4; n <= 9; ++n) {
    const FrameLayout l{n / 2, n % 2 == 1, true};
    std::vector<cplx> lambda;
    for (int mu = 0; mu < l.m; ++mu) lambda.emplace_back(d(rng), d(rng));
    const TwoFormOperator op = phi_hat(normal_form_phi(lambda, l), l.pairing());
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(op.matrix, false);
    std::vector<cplx> got(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
    const auto expect = phi_hat_spectrum(lambda, l.odd);
    REQUIRE(expect.size() == got.size());
    int zeros = 0;
    for (const cplx& e : got) zeros += std::abs(e) < 1e-9;
    CHECK(zeros == l.m);
    for (const cplx& e : expect) {
      auto it = std::min_element(got.begin(), got.end(),
                                 [&](const cplx& x, const cplx& y) { return std::abs(x - e) < std::abs(y - e); });
      CHECK(std::abs(*it - e) < 1e-9);
      got.erase(it);
    }
  }
}

TEST_CASE("type D permitted components") {
  const FrameLayout l{3, true, true};
  const int d0 = l.lower(0), u0 = l.upper(0), d1 = l.lower(1), u1 = l.upper(1), u2 = l.upper(2), o = l.odd_leg();
  CHECK(type_d_permitted({d0, d1, u0, u1}, l));
  CHECK(type_d_permitted({d0, u1, d1, u0}, l));
  CHECK(type_d_permitted({d0, u0, d1, u1}, l));
  CHECK(type_d_permitted({d0, u0, d0, u0}, l));
  CHECK(type_d_permitted({d0, o, u0, o}, l));
  CHECK_FALSE(type_d_permitted({d0, d1, u0, u2}, l));
  CHECK_FALSE(type_d_permitted({d0, u0, d1, o}, l));
  CHECK_FALSE(type_d_permitted({d0, d0, d1, d1}, l));
}

TEST_CASE("Kerr-NUT-(A)dS Weyl tensor is of type D with respect to its CKY frame") {
  for (auto [m, eps] : {std::pair{2, 0}, std::pair{3, 0}, std::pair{2, 1}, std::pair{3, 1}, std::pair{4, 0}}) {
    const MetricModel model = build_kerr_nut_ads(m, eps);
    CAPTURE(model.n);
    for (const Point& p : model.sample(3, 21)) {
      const TypeDReport r = type_d_report(model.metric, model.null_coframe, *model.cky, p);
      CHECK_FALSE(r.components.vacuous);
      CHECK(r.components.value < 1e-9);
      CHECK(r.commutator.value < 1e-9);
      CHECK(r.spectrum < 1e-9);
      CHECK(r.wand.size() == static_cast<size_t>(2 * m));
      CHECK(r.passes(1e-9));
    }
  }
}

TEST_CASE("generic tensors and vectors fail the type D checks") {
  std::mt19937 rng(17);
  const FrameLayout l{3, false, true};
  const Eigen::MatrixXcd pair = l.pairing();
  const Tensor w = weyl_part(random_curvature(6, rng), pair);
  CHECK(type_d_residual(w, l).value > 1e-2);
  const PForm phi = normal_form_phi({1.0, cplx(0, 2.0), -0.5}, l);
  CHECK(commutator_residual(curvature_hat(w, pair), phi_hat(phi, pair)).value > 1e-2);

  const MetricModel model = build_kerr_nut_ads(3, 0);
  const Point p = model.sample(1, 6)[0];
  FramedGeometry fg(model.metric, model.null_coframe, p);
  const Tensor kw = fg.project(fg.local().curvature().weyl);
  std::vector<cplx> k(6, 0.0);
  k[l.lower(0)] = 1.0;
  k[l.lower(1)] = 1.0;
  k[l.upper(0)] = 1.0;
  k[l.upper(1)] = -1.0;
  CHECK(wand_residual(kw, k, pair).value > 1e-3);
  k[l.upper(1)] = 1.0;
  CHECK_THROWS_AS(wand_residual(kw, k, pair), PreconditionFailed);
  for (int a = 0; a < 6; ++a) CHECK(wand_residual(kw, a, l).value < 1e-9);
}

TEST_CASE("flat space is vacuous") {
  const MetricModel model = build_flat(6, "euclidean");
  const TypeDReport r = type_d_report(model.metric, model.null_coframe, *model.cky, model.sample(1, 1)[0]);
  CHECK(r.components.vacuous);
  CHECK(r.commutator.vacuous);
  for (const auto& w : r.wand) CHECK(w.vacuous);
  CHECK(r.passes(1e-9));
}
