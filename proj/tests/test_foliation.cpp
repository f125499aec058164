#include <cmath>

#include "doctest.h"
#include "yano/foliation.hpp"

using namespace yano;

namespace {

std::vector<MetricModel> kerr_nut_models() {
  std::vector<MetricModel> out;
  for (auto [m, eps] : {std::pair{2, 0}, std::pair{3, 0}, std::pair{4, 0}, std::pair{2, 1}, std::pair{3, 1}})
    out.push_back(build_kerr_nut_ads(m, eps));
  return out;
}

double max_pattern(const std::vector<LabeledResidual>& r) {
  double v = 0.0;
  for (const auto& x : r) v = std::max(v, x.value);
  return v;
}

// constant-coefficient vector field
VectorField constant_field(int n, std::vector<cplx> v) {
  return VectorField{n, [n, v](const Point&) {
                       std::vector<Jet2> out;
                       for (int i = 0; i < n; ++i) out.emplace_back(n, v[i]);
                       return out;
                     }};
}

}  // namespace

TEST_CASE("enumeration gives 2^m selectors in mask order") {
  const auto sels = enumerate_distributions(4, true);
  REQUIRE(sels.size() == 16);
  for (unsigned s = 0; s < 16; ++s) {
    CHECK(sels[s].mask == s);
    CHECK(sels[s].adjoin_odd);
  }
  CHECK(enumerate_distributions(1, false).size() == 2);
  CHECK_THROWS_AS(enumerate_distributions(0, false), std::invalid_argument);
  const FrameLayout l{3, true, true};
  CHECK(spanning_labels({0b101, true}, l) == std::vector<int>{l.upper(0), l.lower(1), l.upper(2), l.odd_leg()});
  CHECK(annihilator_labels({0b101, true}, l).size() == 3);
  CHECK_THROWS_AS(spanning_labels({0b1000, false}, l), std::invalid_argument);
  CHECK_THROWS_AS(spanning_labels({0, true}, FrameLayout{2, false, true}), std::invalid_argument);
}

TEST_CASE("distributions are isotropic and annihilated by the complementary coframe") {
  for (const MetricModel& model : kerr_nut_models()) {
    CAPTURE(model.id);
    CAPTURE(model.n);
    for (const Point& p : model.sample(3, 5)) {
      FramedGeometry fg(model.metric, model.null_coframe, p);
      for (bool odd : {false, true}) {
        if (odd && !model.odd) continue;
        for (const auto& sel : enumerate_distributions(model.m, odd)) {
          const auto d = distribution_at(sel, fg.frame());
          CHECK(d.span.size() == static_cast<size_t>(model.m + (odd ? 1 : 0)));
          CHECK(d.span.size() + d.annihilators.size() == static_cast<size_t>(model.n));
          CHECK(d.isotropy_defect(fg.local().metric()) < 1e-10);
          CHECK(d.annihilator_defect() < 1e-10);
        }
      }
    }
  }
}

TEST_CASE("every Kerr-NUT-(A)dS distribution is integrable and totally geodesic") {
  for (const MetricModel& model : kerr_nut_models()) {
    CAPTURE(model.id);
    CAPTURE(model.n);
    for (const Point& p : model.sample(4, 11)) {
      FramedGeometry fg(model.metric, model.null_coframe, p);
      for (bool odd : {false, true}) {
        if (odd && !model.odd) continue;
        for (const auto& sel : enumerate_distributions(model.m, odd)) {
          CAPTURE(sel.label(model.m));
          CHECK(frobenius_residual(sel, fg) < 1e-9);
          if (!odd) CHECK(totally_geodesic_residual(sel, fg) < 1e-9);
        }
      }
      CHECK(max_pattern(connection_pattern_residual(fg)) < 1e-9);
    }
  }
}

TEST_CASE("the non-isotropic pair {V_1, V^1} is not closed under the bracket") {
  for (int m : {2, 3}) {
    const MetricModel model = build_kerr_nut_ads(m, 0);
    const FrameLayout& l = model.null_coframe.layout;
    for (const Point& p : model.sample(3, 2)) {
      FramedGeometry fg(model.metric, model.null_coframe, p);
      CHECK(bracket_closure_residual({l.lower(0), l.upper(0)}, fg) > 1e-3);
      // the escaping part lies along V_ν − V^ν for ν ≠ 1
      for (int nu = 1; nu < m; ++nu) {
        const cplx lo = fg.brackets()(l.lower(0), l.upper(0), l.lower(nu));
        const cplx hi = fg.brackets()(l.lower(0), l.upper(0), l.upper(nu));
        CHECK(std::abs(lo + hi) < 1e-10 * std::max(1.0, std::abs(lo)));
        CHECK(std::abs(lo) > 1e-6);
      }
    }
  }
}

TEST_CASE("LMP5 rank-two and rank-three distributions are integrable") {
  const MetricModel model = build_lmp5(default_lmp5_parameters());
  for (const Point& p : model.sample(5, 9)) {
    FramedGeometry fg(model.metric, model.null_coframe, p);
    for (const auto& sel : enumerate_distributions(2, false)) {
      CHECK(frobenius_residual(sel, fg) < 1e-9);
      CHECK(totally_geodesic_residual(sel, fg) < 1e-9);
    }
    for (const auto& sel : enumerate_distributions(2, true)) CHECK(frobenius_residual(sel, fg) < 1e-9);
    CHECK(max_pattern(connection_pattern_residual(fg)) < 1e-9);
  }
}

TEST_CASE("vanishing connection pattern implies integrability") {
  const MetricModel model = build_orthotoric(3, default_orthotoric_parameters(3));
  for (const Point& p : model.sample(3, 4)) {
    FramedGeometry fg(model.metric, model.null_coframe, p);
    REQUIRE(max_pattern(connection_pattern_residual(fg)) < 1e-9);
    for (const auto& sel : enumerate_distributions(3, false)) CHECK(frobenius_residual(sel, fg) < 1e-9);
  }
}

TEST_CASE("a frame not adapted to a CKY tensor violates the pattern") {
  // rotating the orthotoric frame mixes ξ and t directions pointwise-nonuniformly
  const MetricModel base = build_orthotoric(2, default_orthotoric_parameters(2));
  MetricModel model = base;
  const FrameLayout l = base.null_coframe.layout;
  model.null_coframe = CoframeField{base.n, l, [base, l](const Point& q) {
    const auto x = lift_coordinates(q);
                                      JetMatrix th = base.null_coframe.eval(q);
                                      const Jet2 c = cos(x[0] * 3.0), s = sin(x[0] * 3.0);
                                      JetMatrix out = th;
                                      for (int i = 0; i < base.n; ++i) {
                                        // θ^1 → cθ^1 + sθ^2, θ_1 → cθ_1 + sθ_2, preserving g
                                        out(l.lower(0), i) = c * th(l.lower(0), i) + s * th(l.lower(1), i);
                                        out(l.lower(1), i) = c * th(l.lower(1), i) - s * th(l.lower(0), i);
                                        out(l.upper(0), i) = c * th(l.upper(0), i) + s * th(l.upper(1), i);
                                        out(l.upper(1), i) = c * th(l.upper(1), i) - s * th(l.upper(0), i);
                                      }
                                      return out;
                                    }};
  const Point p = model.sample(1, 3)[0];
  FramedGeometry fg(model.metric, model.null_coframe, p);
  CHECK(fg.reconstruction_defect() < 1e-10);
  CHECK(max_pattern(connection_pattern_residual(fg)) > 1e-3);
}

TEST_CASE("a diagonal non-CKY form on flat space fails the pattern in a rotated frame") {
  // flat R^4 with e1 = c dx + s dz, e2 = −s dx + c dz, e3 = dy, e4 = dw, angle y: the frame of
  // the diagonal form e1∧e3 + 2 e2∧e4, which is not Killing-Yano
  const int n = 4;
  MetricField g{n, "cartesian", [](const Point&) {
                  JetMatrix m(4, 4);
                  for (int i = 0; i < 4; ++i)
                    for (int j = 0; j < 4; ++j) m(i, j) = Jet2(4, i == j ? 1.0 : 0.0);
                  return m;
                }};
  const FrameLayout l{2, false, true};
  CoframeField f{n, l, [l](const Point& q) {
                   const auto x = lift_coordinates(q);
                   const Jet2 c = cos(x[1]), s = sin(x[1]);
                   const double r = 1.0 / std::sqrt(2.0);
                   const cplx I(0, 1);
                   JetMatrix th(4, 4);
                   for (int a = 0; a < 4; ++a)
                     for (int i = 0; i < 4; ++i) th(a, i) = Jet2(4, 0.0);
                   for (double sg : {1.0, -1.0}) {
                     const int one = sg > 0 ? l.lower(0) : l.upper(0), two = sg > 0 ? l.lower(1) : l.upper(1);
                     th(one, 0) = c * r;
                     th(one, 2) = s * r;
                     th(one, 1) = Jet2(4, sg * I * r);
                     th(two, 0) = s * (-r);
                     th(two, 2) = c * r;
                     th(two, 3) = Jet2(4, sg * I * r);
                   }
                   return th;
                 }};
  FramedGeometry fg(g, f, Point{{0.3, 0.2, 0.7, 0.1}});
  CHECK(fg.reconstruction_defect() < 1e-12);
  CHECK(max_pattern(connection_pattern_residual(fg)) > 1e-3);
}

TEST_CASE("Frobenius verdict is invariant under rescaling the spanning fields") {
  const int n = 3;
  // span{∂_x + y ∂_z, ∂_y} is not integrable; span{∂_x, ∂_y} is
  VectorField u{n, [](const Point& q) { return std::vector<Jet2>{Jet2(3, 1.0), Jet2(3, 0.0), lift_coordinates(q)[1]}; }};
  VectorField w = constant_field(n, {0.0, 1.0, 0.0});
  VectorField a = constant_field(n, {1.0, 0.0, 0.0});
  auto scaled = [](const VectorField& v, double k) {
    return VectorField{v.n, [v, k](const Point& q) {
    const auto x = lift_coordinates(q);
                         auto out = v.eval(q);
                         const Jet2 f = exp(x[0] * k) * (1.0 + x[2] * x[2]);
                         for (auto& c : out) c = c * f;
                         return out;
                       }};
  };
  const Point p{{0.4, -0.3, 0.8}};
  CHECK(frobenius_residual({u, w}, p) > 0.1);
  CHECK(frobenius_residual({scaled(u, 0.7), scaled(w, -1.3)}, p) > 0.1);
  CHECK(frobenius_residual({a, w}, p) == 0.0);
  CHECK(frobenius_residual({scaled(a, 0.7), scaled(w, -1.3)}, p) < 1e-14);
}

TEST_CASE("complementary selectors agree on real Euclidean models") {
  for (const MetricModel& model : {build_lmp5(default_lmp5_parameters()),
                                   build_orthotoric(3, default_orthotoric_parameters(3))}) {
    REQUIRE(model.real_structure);
    const Point p = model.sample(1, 8)[0];
    FramedGeometry fg(model.metric, model.null_coframe, p);
    const unsigned full = (1u << model.m) - 1;
    for (const auto& sel : enumerate_distributions(model.m, false)) {
      const DistributionSelector comp{full ^ sel.mask, false};
      CHECK(std::abs(frobenius_residual(sel, fg) - frobenius_residual(comp, fg)) < 1e-12);
      CHECK(real_intersection_rank(sel, fg.frame()) == real_intersection_rank(comp, fg.frame()));
    }
  }
}

TEST_CASE("real intersection rank on flat models") {
  for (int n : {4, 5, 6, 7}) {
    const int m = n / 2;
    for (auto [sig, expect] : {std::pair{"euclidean", 0}, std::pair{"lorentzian", 1}, std::pair{"split", m}}) {
      CAPTURE(n);
      CAPTURE(sig);
      const MetricModel model = build_flat(n, sig);
      const Point p = model.sample(1, 1)[0];
      for (const auto& sel : enumerate_distributions(m, false)) {
        CHECK(real_intersection_rank(sel, model, p) == expect);
        CHECK(frobenius_residual(sel, model, p) == 0.0);
      }
      if (n % 2)
        for (const auto& sel : enumerate_distributions(m, true)) CHECK(real_intersection_rank(sel, model, p) == expect + 1);
    }
  }
}

TEST_CASE("real intersection rank needs a real structure") {
  const MetricModel model = build_kerr_nut_ads(2, 1);
  REQUIRE_FALSE(model.real_structure);
  CHECK_THROWS_AS(real_intersection_rank({0, false}, model, model.sample(1, 1)[0]), NoRealStructure);
}
