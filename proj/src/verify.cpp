#include "yano/verify.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <fstream>
#include <map>
#include <thread>

#include <json.hpp>

#include "yano/errors.hpp"
#include "yano/foliation.hpp"
#include "yano/spin.hpp"
#include "yano/weyltype.hpp"

namespace yano {

namespace {

const char* const kDegenerateCheck = "normal_form.degenerate_spectrum";

bool has(const std::vector<std::string>& v, const char* s) { return std::find(v.begin(), v.end(), s) != v.end(); }

class Recorder {
 public:
  Recorder(int index, const Tolerances& tol) : index_(index), tol_(tol) {}

  void below(const std::string& id, double r, bool vacuous = false) {
    const double t = tol_.for_check(id);
    push({id, index_, r, t, CheckKind::Below, std::isfinite(r) && r < t, vacuous});
  }
  void above(const std::string& id, double r) {
    const double t = tol_.floor;
    push({id, index_, r, t, CheckKind::Above, std::isfinite(r) && r > t, false});
  }
  void info(const std::string& id, double r) { push({id, index_, r, 0.0, CheckKind::Info, true, false}); }

  std::vector<CheckRecord> take() { return std::move(out_); }

 private:
  void push(CheckRecord r) { out_.push_back(std::move(r)); }

  int index_;
  const Tolerances& tol_;
  std::vector<CheckRecord> out_;
};

Point restrict_point(const Point& p, const std::vector<int>& coords) {
  Point q{{}, p.chart_id};
  for (int i : coords) q.coords.push_back(p.coords.at(i));
  return q;
}

double frame_alignment(const PForm& f, const FrameLayout& l) {
  double off = 0.0, scale = 0.0;
  const auto& masks = f.masks();
  for (size_t k = 0; k < masks.size(); ++k) {
    const auto idx = exterior::indices(masks[k]);
    const double v = std::abs(f[k]);
    scale = std::max(scale, v);
    const bool pair = idx[1] < 2 * l.m && l.pair_of(idx[0]) == l.pair_of(idx[1]);
    if (!pair) off = std::max(off, v);
  }
  return off == 0.0 ? 0.0 : off / scale;
}

void cky_suite(const MetricModel& model, const Point& p, Recorder& rec) {
  if (model.cky) {
    const CKYDecomposition d = cky_residual(model.metric, *model.cky, p);
    rec.below("cky.residual", d.relative_residual);
    FramedGeometry fg(model.metric, model.null_coframe, p);
    rec.below("cky.tau_condition", tau_condition_residual(d.tau, fg.frame(), d.nabla_norm));
    if (model.cky_closed) rec.below("cky.closed", d.nabla_norm > 0.0 ? norm(d.tau) / d.nabla_norm : norm(d.tau));
  }
  for (const AuxiliaryForm& aux : model.auxiliary) {
    if (aux.expect == Expectation::AboveFloor) continue;
    const Point q = restrict_point(p, aux.coordinates);
    const double r = cky_residual(aux.metric, aux.form, q).relative_residual;
    if (aux.expect == Expectation::Pass)
      rec.below("cky.aux." + aux.id, r);
    else
      rec.info("cky.aux." + aux.id, r);
  }
}

void normal_form_suite(const MetricModel& model, const Point& p, Recorder& rec) {
  if (model.cky) {
    const PForm phi = value_of(model.cky->eval(p));
    try {
      const NormalForm nf = normal_form(phi, LocalGeometry(model.metric, p).metric());
      rec.below("normal_form.reconstruction", nf.reconstruction_error);
      FramedGeometry fg(model.metric, model.null_coframe, p);
      rec.below("normal_form.frame_alignment", frame_alignment(fg.frame().to_frame(phi), fg.layout()));
    } catch (const DegenerateSpectrum&) {
      rec.info(kDegenerateCheck, 1.0);
    }
  }
  for (const AuxiliaryForm& aux : model.auxiliary) {
    if (aux.expect != Expectation::AboveFloor) continue;
    const Point q = restrict_point(p, aux.coordinates);
    rec.above("normal_form.negative." + aux.id, cky_residual(aux.metric, aux.form, q).relative_residual);
  }
}

void foliation_suite(const MetricModel& model, const Point& p, Recorder& rec) {
  FramedGeometry fg(model.metric, model.null_coframe, p);
  for (bool odd : {false, true}) {
    if (odd && !model.odd) continue;
    for (const auto& sel : enumerate_distributions(model.m, odd)) {
      const std::string tag = "[" + sel.label(model.m) + "]";
      rec.below("foliation.frobenius" + tag, frobenius_residual(sel, fg));
      if (!odd) rec.below("foliation.totally_geodesic" + tag, totally_geodesic_residual(sel, fg));
    }
  }
  if (model.cky)
    for (const auto& r : connection_pattern_residual(fg)) rec.below("foliation.pattern." + r.id, r.value);
  for (const BracketReference& ref : model.brackets) {
    const auto c = ref.coefficients(p);
    double err = 0.0, scale = 1.0;
    for (int k = 0; k < model.n; ++k) {
      err = std::max(err, std::abs(fg.brackets()(ref.a, ref.b, k) - c[k]));
      scale = std::max(scale, std::abs(fg.brackets()(ref.a, ref.b, k)));
    }
    if (ref.erratum.empty())
      rec.below("brackets." + ref.id, err / scale);
    else
      rec.info("brackets." + ref.id, err / scale);
  }
}

void weyl_suite(const MetricModel& model, const Point& p, Recorder& rec) {
  if (!model.cky) return;
  const TypeDReport r = type_d_report(model.metric, model.null_coframe, *model.cky, p);
  rec.below("weyl.type_d", r.components.value, r.components.vacuous);
  rec.below("weyl.commutator", r.commutator.value, r.commutator.vacuous);
  rec.below("weyl.spectrum", r.spectrum);
  for (size_t a = 0; a < r.wand.size(); ++a)
    rec.below("weyl.wand[" + std::to_string(a) + "]", r.wand[a].value, r.wand[a].vacuous);
}

void spin_suite(const MetricModel& model, const Point& p, Recorder& rec) {
  FramedGeometry fg(model.metric, model.null_coframe, p);
  const int m = model.m;
  Tensor w;
  if (!model.odd) w = fg.project(fg.local().curvature().weyl);
  for (Mask s = 0; s < (1u << m); ++s) {
    const std::string tag = "[" + DistributionSelector{s, false}.label(m) + "]";
    rec.below("spin.integrability" + tag, spinor_integrability_residual(constant_spinor_field(Spinor::basis(m, s)), fg));
    if (!model.odd) {
      const FlaggedResidual r = weyl_spin_residual(w, fg.layout(), s);
      rec.below("spin.weyl" + tag, r.value, r.vacuous);
    }
  }
}

void hamiltonian_suite(const MetricModel& model, const Point& p, Recorder& rec) {
  if (!model.hamiltonian) return;
  const HamiltonianData& h = *model.hamiltonian;
  const KahlerChecks k = kahler_checks(h, model.metric, p);
  rec.below("hamiltonian.kahler", std::max({k.j_square, k.compatibility, k.trace, k.parallel}));
  const PForm omega = value_of(h.omega.eval(p));
  const double dw = norm(exterior_derivative(h.omega, p));
  rec.below("hamiltonian.domega", norm(omega) > 0.0 ? dw / norm(omega) : dw);
  rec.below("hamiltonian.residual", hamiltonian_residual(h, model.metric, p));
  const HamiltonianCKY c = hamiltonian_to_cky(h, model.metric, p);
  rec.below("hamiltonian.cky", c.cky_residual);
  rec.below("hamiltonian.clcocl", c.clcocl_residual);
}

void identities_suite(const MetricModel& model, const Point& p, Recorder& rec) {
  if (!model.cky) return;
  for (const auto& r : eigenvalue_identity_residuals(model.metric, model.null_coframe, *model.cky, p))
    rec.below("identities." + r.id, r.value);
}

std::vector<std::string> convention_notes() {
  return {
      "square roots use the principal branch, approached from above on the negative real axis",
      "frame labels: a < m is V_mu, m <= a < 2m is V^mu, 2m is the odd leg; g(V_mu, V^mu) = 1",
      "directional derivatives V_a(f) = V_a^i d_i f with V_a the columns of the inverse coframe",
      "Clifford pairing: g(X+xi, Y+eta) = (xi(Y) + eta(X))/2, so gamma_a gamma_b + gamma_b gamma_a = -2 g_ab",
      "spinor inner product: top-degree coefficient of rev(eta) wedge zeta",
      "Weyl spinor wedge read slot-wise as the skew part of the tensor product with theta_A",
      "J acts on 1-forms by (J alpha)_b = -alpha_d J^d_b, so J(X*) = (JX)*",
      "codifferential includes the metric sign so that K = -d*phi in every signature",
      "negative checks pass when the residual exceeds the floor at every point",
  };
}

}  // namespace

const char* to_string(CheckKind k) {
  switch (k) {
    case CheckKind::Below:
      return "below";
    case CheckKind::Above:
      return "above";
    case CheckKind::Info:
      return "info";
  }
  return "?";
}

std::vector<CheckRecord> evaluate_point(const MetricModel& model, const std::vector<std::string>& suites,
                                        const Point& p, int index, const Tolerances& tol) {
  Recorder rec(index, tol);
  if (has(suites, "cky")) cky_suite(model, p, rec);
  if (has(suites, "cky-normal-form")) normal_form_suite(model, p, rec);
  if (has(suites, "foliation")) foliation_suite(model, p, rec);
  if (has(suites, "weyl")) weyl_suite(model, p, rec);
  if (has(suites, "spin")) spin_suite(model, p, rec);
  if (has(suites, "hamiltonian")) hamiltonian_suite(model, p, rec);
  if (has(suites, "identities")) identities_suite(model, p, rec);
  return rec.take();
}

std::vector<std::string> inapplicable_suites(const MetricModel& model, const std::vector<std::string>& suites) {
  std::vector<std::string> out;
  const bool aux_neg = std::any_of(model.auxiliary.begin(), model.auxiliary.end(),
                                   [](const AuxiliaryForm& a) { return a.expect == Expectation::AboveFloor; });
  for (const std::string& s : suites) {
    if ((s == "weyl" || s == "identities") && !model.cky)
      out.push_back(s + ": model " + model.id + " carries no CKY tensor");
    if (s == "cky-normal-form" && !model.cky && !aux_neg)
      out.push_back(s + ": model " + model.id + " carries no CKY tensor");
    if (s == "hamiltonian" && !model.hamiltonian)
      out.push_back(s + ": model " + model.id + " carries no Hamiltonian 2-form");
  }
  return out;
}

void summarize(VerificationReport& r) {
  std::map<std::string, size_t> pos;
  r.summary.clear();
  for (const CheckRecord& c : r.records) {
    auto it = pos.find(c.check);
    if (it == pos.end()) {
      it = pos.emplace(c.check, r.summary.size()).first;
      r.summary.push_back({c.check, c.kind, 0, c.residual, c.residual, true});
    }
    CheckSummary& s = r.summary[it->second];
    ++s.count;
    s.max_residual = std::max(s.max_residual, c.residual);
    s.min_residual = std::min(s.min_residual, c.residual);
    if (!std::isfinite(c.residual)) s.max_residual = c.residual;
    s.pass = s.pass && c.pass;
  }
  r.overall_pass = std::all_of(r.records.begin(), r.records.end(), [](const CheckRecord& c) { return c.pass; });
}

VerificationReport run(const RunConfig& config) {
  config.validate();
  VerificationReport r;
  r.config = config;
  r.suites = expand_suites(config.suites);
  r.parameters = config.resolved_parameters();
  const MetricModel model = build_model(config.metric, r.parameters);
  r.model_id = model.id;
  r.n = model.n;
  r.points = model.sample(config.points, config.seed);

  const int count = static_cast<int>(r.points.size());
  std::vector<std::vector<CheckRecord>> per_point(count);
  std::vector<std::exception_ptr> errors(count);
  int threads = config.threads > 0 ? config.threads : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::clamp(threads, 1, count);
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&, t] {
      for (int i = t; i < count; i += threads) {
        try {
          per_point[i] = evaluate_point(model, r.suites, r.points[i], i, config.tolerances);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  for (auto& th : pool) th.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  for (auto& v : per_point) r.records.insert(r.records.end(), v.begin(), v.end());

  r.notes = convention_notes();
  for (const std::string& s : model.notes) r.notes.push_back(model.id + ": " + s);
  for (const BracketReference& b : model.brackets)
    if (!b.erratum.empty() && has(r.suites, "foliation")) r.notes.push_back("brackets." + b.id + " (info only): " + b.erratum);
  for (const std::string& s : inapplicable_suites(model, r.suites)) r.notes.push_back("not applicable: " + s);
  const auto degenerate = std::count_if(r.records.begin(), r.records.end(),
                                        [](const CheckRecord& c) { return c.check == kDegenerateCheck; });
  if (degenerate > 0)
    r.notes.push_back("cky-normal-form: CKY spectrum degenerate at " + std::to_string(degenerate) + " of " +
                      std::to_string(count) + " points, normal form undefined there");
  summarize(r);
  return r;
}

namespace {

nlohmann::json number(double v) {
  if (std::isfinite(v)) return v;
  return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
}

nlohmann::json params_json(const ParameterRecord& p) {
  nlohmann::json j;
  j["m"] = p.m;
  j["eps"] = p.eps;
  j["a"] = p.a;
  nlohmann::json M = nlohmann::json::array();
  for (const cplx& v : p.M) M.push_back({v.real(), v.imag()});
  j["M"] = M;
  j["g"] = p.g;
  j["a0"] = p.a0;
  j["x_coeffs"] = p.x_coeffs;
  j["y_coeffs"] = p.y_coeffs;
  j["theta"] = p.theta;
  j["signature"] = p.signature;
  j["box_lo"] = p.box_lo;
  j["box_hi"] = p.box_hi;
  j["guard"] = p.guard;
  return j;
}

}  // namespace

std::string report_json(const VerificationReport& r, int indent) {
  using nlohmann::json;
  json cfg;
  cfg["metric"] = r.config.metric;
  cfg["dim_m"] = r.config.dim_m;
  cfg["odd"] = r.config.odd;
  cfg["parameters"] = params_json(r.parameters);
  cfg["suites"] = r.suites;
  cfg["points"] = r.config.points;
  cfg["seed"] = r.config.seed;
  json tol;
  tol["default"] = r.config.tolerances.default_tol;
  tol["floor"] = r.config.tolerances.floor;
  tol["checks"] = r.config.tolerances.checks;
  cfg["tolerances"] = tol;
  cfg["output"] = r.config.output;

  json j;
  j["config"] = cfg;
  j["model"] = {{"id", r.model_id}, {"n", r.n}};
  json pts = json::array();
  for (size_t i = 0; i < r.points.size(); ++i) pts.push_back({{"index", i}, {"coords", r.points[i].coords}});
  j["points"] = pts;
  json recs = json::array();
  for (const CheckRecord& c : r.records) {
    json x{{"check", c.check},         {"point", c.point}, {"residual", number(c.residual)},
           {"tolerance", c.tolerance}, {"kind", to_string(c.kind)}, {"pass", c.pass}};
    if (c.vacuous) x["vacuous"] = true;
    recs.push_back(x);
  }
  j["records"] = recs;
  json checks = json::array();
  for (const CheckSummary& s : r.summary)
    checks.push_back({{"check", s.check},
                      {"kind", to_string(s.kind)},
                      {"count", s.count},
                      {"max_residual", number(s.max_residual)},
                      {"min_residual", number(s.min_residual)},
                      {"pass", s.pass}});
  j["summary"] = {{"checks", checks}, {"overall_pass", r.overall_pass}};
  j["notes"] = r.notes;
  return j.dump(indent);
}

void write_report(const VerificationReport& r, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write report to " + path);
  out << report_json(r) << "\n";
}

int exit_status(const VerificationReport& r) { return r.overall_pass ? 0 : 1; }

}  // namespace yano
