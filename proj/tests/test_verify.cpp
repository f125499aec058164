#include <algorithm>
#include <cmath>
#include <set>

#include <json.hpp>

#include "doctest.h"
#include "yano/errors.hpp"
#include "yano/verify.hpp"

using namespace yano;

namespace {

RunConfig small(const std::string& metric, int m, int odd, std::vector<std::string> suites, int points = 4) {
  RunConfig c;
  c.metric = metric;
  c.dim_m = m;
  c.odd = odd;
  c.suites = std::move(suites);
  c.points = points;
  c.threads = 1;
  return c;
}

const CheckSummary* find_summary(const VerificationReport& r, const std::string& id) {
  for (const auto& s : r.summary)
    if (s.check == id) return &s;
  return nullptr;
}

}  // namespace

TEST_CASE("YAML config round trip") {
  const RunConfig c = parse_config(R"(
metric: kerr_nut_ads
dim_m: 3
odd: 1
suites: [cky, weyl]
points: 7
seed: 9
threads: 2
tolerances:
  default: 1.0e-9
  floor: 1.0e-2
  checks:
    weyl: 1.0e-7
    weyl.type_d: 1.0e-6
parameters:
  g: 0.1
  M: [[0.5, 0.1], 0.3, 0.2]
)");
  CHECK(c.metric == "kerr_nut_ads");
  CHECK(c.dim_m == 3);
  CHECK(c.odd == 1);
  CHECK(c.suites == std::vector<std::string>{"cky", "weyl"});
  CHECK(c.points == 7);
  CHECK(c.seed == 9);
  CHECK(c.threads == 2);
  CHECK(c.tolerances.default_tol == 1e-9);
  CHECK(c.tolerances.floor == 1e-2);
  CHECK(c.tolerances.for_check("weyl.type_d") == 1e-6);
  CHECK(c.tolerances.for_check("weyl.commutator") == 1e-7);
  CHECK(c.tolerances.for_check("cky.residual") == 1e-9);
  REQUIRE(c.parameters);
  CHECK(c.parameters->g == 0.1);
  REQUIRE(c.parameters->M.size() == 3);
  CHECK(c.parameters->M[0] == cplx(0.5, 0.1));
  CHECK(c.parameters->a.size() == 3);
  CHECK_NOTHROW(c.validate());

  const RunConfig s = parse_config("suites: \"cky, foliation\"\n");
  CHECK(s.suites == std::vector<std::string>{"cky", "foliation"});
  CHECK(s.metric == "kerr_nut_ads");
}

TEST_CASE("config errors") {
  CHECK_THROWS_AS(parse_config("metrc: flat\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[1, 2]\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("points: many\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("parameters:\n  M: [[1, 2, 3]]\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("tolerances:\n  default: -1\n").validate(), ConfigError);
  CHECK_THROWS_AS(parse_config("tolerances:\n  checks:\n    cky: 0\n").validate(), ConfigError);
  CHECK_THROWS_AS(parse_config("suites: []\n").validate(), ConfigError);
  CHECK_THROWS_AS(parse_config("metric: schwarzschild\n").validate(), ConfigError);
  CHECK_THROWS_AS(parse_config("metric: orthotoric\nodd: 1\n").validate(), ConfigError);
  CHECK_THROWS_AS(parse_config("points: 0\n").validate(), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/config.yaml"), ConfigError);
}

TEST_CASE("suite expansion") {
  CHECK(expand_suites({"all"}) == known_suites());
  CHECK(expand_suites({"weyl", "cky", "weyl"}) == std::vector<std::string>{"cky", "weyl"});
  CHECK(expand_suites({"spin", "all"}).size() == known_suites().size());
  CHECK_THROWS_AS(expand_suites({}), ConfigError);
  CHECK_THROWS_AS(expand_suites({"cky", "bogus"}), ConfigError);
  CHECK(parse_suite_list(" cky ,, spin ") == std::vector<std::string>{"cky", "spin"});
  CHECK(parse_suite_list("").empty());
}

TEST_CASE("longest tolerance prefix wins") {
  Tolerances t;
  t.checks = {{"foliation", 1e-6}, {"foliation.frobenius", 1e-7}, {"foliation.frobenius[^_]", 1e-5}};
  CHECK(t.for_check("foliation.frobenius[^_]") == 1e-5);
  CHECK(t.for_check("foliation.frobenius[__]") == 1e-7);
  CHECK(t.for_check("foliation.totally_geodesic[^^]") == 1e-6);
  CHECK(t.for_check("weyl.type_d") == t.default_tol);
}

TEST_CASE("reports do not depend on the thread count") {
  RunConfig c = small("kerr_nut_ads", 2, 1, {"all"}, 6);
  const VerificationReport a = run(c);
  c.threads = 4;
  const VerificationReport b = run(c);
  CHECK(report_json(a) == report_json(b));
  c.seed = 43;
  CHECK(report_json(run(c)) != report_json(a));
}

TEST_CASE("summary invariants") {
  for (const RunConfig& c : {small("kerr_nut_ads", 2, 0, {"all"}), small("lmp5", 2, 1, {"all"}),
                             small("orthotoric", 2, 0, {"all"})}) {
    const VerificationReport r = run(c);
    CAPTURE(c.metric);
    REQUIRE(!r.records.empty());
    std::set<std::string> ids;
    bool all_pass = true;
    for (const CheckRecord& rec : r.records) {
      ids.insert(rec.check);
      all_pass = all_pass && rec.pass;
      CHECK(rec.point >= 0);
      CHECK(rec.point < c.points);
      if (rec.kind == CheckKind::Below) CHECK(rec.pass == (std::isfinite(rec.residual) && rec.residual < rec.tolerance));
      if (rec.kind == CheckKind::Above) CHECK(rec.pass == (std::isfinite(rec.residual) && rec.residual > rec.tolerance));
      if (rec.kind == CheckKind::Info) CHECK(rec.pass);
    }
    CHECK(ids.size() == r.summary.size());
    for (const CheckSummary& s : r.summary) {
      double mx = -1.0, mn = 1e300;
      int count = 0;
      bool pass = true;
      for (const CheckRecord& rec : r.records)
        if (rec.check == s.check) {
          mx = std::max(mx, rec.residual);
          mn = std::min(mn, rec.residual);
          pass = pass && rec.pass;
          ++count;
        }
      CHECK(s.max_residual == mx);
      CHECK(s.min_residual == mn);
      CHECK(s.count == count);
      CHECK(s.pass == pass);
    }
    CHECK(r.overall_pass == all_pass);
    CHECK(exit_status(r) == (all_pass ? 0 : 1));
  }
}

TEST_CASE("catalog models pass their suites") {
  for (const RunConfig& c : {small("kerr_nut_ads", 3, 0, {"all"}), small("kerr_nut_ads", 2, 1, {"all"}),
                             small("lmp5", 2, 1, {"all"}), small("orthotoric", 3, 0, {"all"}),
                             small("flat", 2, 1, {"all"})}) {
    CAPTURE(c.metric);
    CAPTURE(c.dim_m);
    const VerificationReport r = run(c);
    for (const CheckSummary& s : r.summary) {
      CAPTURE(s.check);
      CHECK(s.pass);
    }
    CHECK(r.overall_pass);
  }
}

TEST_CASE("negative checks are recorded above the floor") {
  const VerificationReport r = run(small("lmp5", 2, 1, {"cky-normal-form"}));
  bool found = false;
  for (const CheckSummary& s : r.summary)
    if (s.check.rfind("normal_form.negative.", 0) == 0) {
      found = true;
      CHECK(s.kind == CheckKind::Above);
      CHECK(s.min_residual > r.config.tolerances.floor);
      CHECK(s.pass);
    }
  CHECK(found);

  RunConfig strict = small("lmp5", 2, 1, {"cky-normal-form"});
  strict.tolerances.floor = 1e6;
  CHECK_FALSE(run(strict).overall_pass);
}

TEST_CASE("a tightened tolerance turns a pass into a failure") {
  RunConfig c = small("kerr_nut_ads", 2, 0, {"cky"});
  c.tolerances.checks["cky.residual"] = 1e-300;
  const VerificationReport r = run(c);
  const CheckSummary* s = find_summary(r, "cky.residual");
  REQUIRE(s);
  CHECK_FALSE(s->pass);
  CHECK_FALSE(r.overall_pass);
  CHECK(exit_status(r) == 1);
}

TEST_CASE("printed bracket errata are informational") {
  const VerificationReport r = run(small("lmp5", 2, 1, {"foliation"}));
  bool info = false;
  for (const CheckSummary& s : r.summary)
    if (s.check.rfind("brackets.", 0) == 0 && s.kind == CheckKind::Info) info = true;
  CHECK(info);
  CHECK(std::any_of(r.notes.begin(), r.notes.end(),
                    [](const std::string& n) { return n.rfind("brackets.", 0) == 0; }));
  CHECK(r.overall_pass);
}

TEST_CASE("degenerate CKY spectra are noted, not fatal") {
  const VerificationReport r = run(small("orthotoric", 2, 0, {"cky-normal-form"}));
  const CheckSummary* s = find_summary(r, "normal_form.degenerate_spectrum");
  REQUIRE(s);
  CHECK(s->kind == CheckKind::Info);
  CHECK(s->count == 4);
  CHECK(std::any_of(r.notes.begin(), r.notes.end(),
                    [](const std::string& n) { return n.find("degenerate") != std::string::npos; }));
}

TEST_CASE("inapplicable suites are noted") {
  const MetricModel flat = build_model("flat", default_parameters("flat", 2, 0));
  const auto out = inapplicable_suites(flat, {"weyl", "hamiltonian", "foliation"});
  REQUIRE(out.size() == 1);
  CHECK(out[0].rfind("hamiltonian", 0) == 0);
  const VerificationReport r = run(small("flat", 2, 0, {"hamiltonian"}));
  CHECK(r.records.empty());
  CHECK(std::any_of(r.notes.begin(), r.notes.end(),
                    [](const std::string& n) { return n.rfind("not applicable: hamiltonian", 0) == 0; }));
}

TEST_CASE("guards that reject every point raise") {
  RunConfig c = small("kerr_nut_ads", 2, 0, {"cky"});
  ParameterRecord p = default_parameters("kerr_nut_ads", 2, 0);
  p.guard = 1e6;
  c.parameters = p;
  CHECK_THROWS_AS(run(c), PreconditionFailed);
}

TEST_CASE("report JSON carries config, points, records and summary") {
  const VerificationReport r = run(small("kerr_nut_ads", 2, 0, {"cky", "weyl"}, 3));
  const auto j = nlohmann::json::parse(report_json(r));
  CHECK(j["config"]["metric"] == "kerr_nut_ads");
  CHECK(j["config"]["suites"] == nlohmann::json({"cky", "weyl"}));
  CHECK(j["config"]["seed"] == 42);
  CHECK(j["config"]["tolerances"]["default"] == 1e-8);
  CHECK(j["config"]["parameters"]["M"].size() == 2);
  CHECK(j["model"]["n"] == 4);
  CHECK(j["points"].size() == 3);
  CHECK(j["points"][0]["coords"].size() == 4);
  CHECK(j["records"].size() == r.records.size());
  CHECK(j["records"][0].contains("residual"));
  CHECK(j["records"][0].contains("kind"));
  CHECK(j["summary"]["overall_pass"] == r.overall_pass);
  CHECK(j["summary"]["checks"].size() == r.summary.size());
  CHECK(j["notes"].is_array());
}
