#include <cmath>

#include "yano/catalog.hpp"

namespace yano {

namespace {

std::vector<double> flat_signature(int n, int m, const std::string& sig) {
  std::vector<double> s(n, 1.0);
  if (sig == "euclidean") return s;
  if (sig == "lorentzian") {
    s[0] = -1.0;
    return s;
  }
  if (sig == "split") {
    for (int mu = 0; mu < m; ++mu) s[mu] = -1.0;
    return s;
  }
  throw ConfigError("unknown flat signature: " + sig);
}

}  // namespace

MetricModel build_flat(int n, const std::string& signature) {
  if (n < 2 || n > kMaxDim) throw ConfigError("flat model needs 2 ≤ n ≤ 9");
  const int m = n / 2;
  const bool odd = n % 2 == 1;
  const std::vector<double> sig = flat_signature(n, m, signature);

  MetricModel model;
  model.id = "flat";
  model.n = n;
  model.m = m;
  model.odd = odd;
  model.params.m = m;
  model.params.eps = odd ? 1 : 0;
  model.params.signature = signature;
  model.metric.n = n;
  model.metric.chart = "flat";
  model.metric.eval = [n, sig](const Point&) {
    JetMatrix g(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) g(i, j) = Jet2(n, i == j ? sig[i] : 0.0);
    return g;
  };

  // Rows θ^μ, θ_μ, odd leg as constant coefficient matrices.
  Eigen::MatrixXcd rows = Eigen::MatrixXcd::Zero(n, n);
  const double r = 1.0 / std::sqrt(2.0);
  const cplx I(0.0, 1.0);
  std::vector<bool> real_pair(m, false);
  for (int mu = 0; mu < m; ++mu) {
    const bool negative = sig[mu] < 0.0;
    if (negative) {
      rows(mu, m + mu) = r;
      rows(mu, mu) = r;
      rows(m + mu, m + mu) = r;
      rows(m + mu, mu) = -r;
      real_pair[mu] = true;
    } else {
      rows(mu, mu) = r;
      rows(mu, m + mu) = r * I;
      rows(m + mu, mu) = r;
      rows(m + mu, m + mu) = -r * I;
    }
  }
  if (odd) rows(2 * m, 2 * m) = 1.0;
  auto constant_rows = [n](const Eigen::MatrixXcd& c) {
    return [n, c](const Point&) {
      JetMatrix e(n, n);
      for (int a = 0; a < n; ++a)
        for (int i = 0; i < n; ++i) e(a, i) = Jet2(n, c(a, i));
      return e;
    };
  };
  model.null_coframe = CoframeField{n, FrameLayout{m, odd, true}, constant_rows(rows)};
  if (signature == "euclidean")
    model.real_coframe = CoframeField{n, FrameLayout{m, odd, false}, constant_rows(Eigen::MatrixXcd::Identity(n, n))};

  std::vector<cplx> lambda(m);
  for (int mu = 0; mu < m; ++mu) lambda[mu] = real_pair[mu] ? cplx(mu + 1.0) : cplx(0.0, mu + 1.0);
  model.cky = catalog_detail::normal_form_field(model.null_coframe, [lambda, n](const Point&) {
    std::vector<Jet2> out;
    for (const cplx& l : lambda) out.push_back(Jet2(n, l));
    return out;
  });
  model.cky_closed = true;

  model.box.lo.assign(n, -1.0);
  model.box.hi.assign(n, 1.0);
  model.box.accept = [](const Point&) { return true; };
  model.real_structure = true;
  model.ricci_flat = true;
  model.notes.push_back("parallel CKY with constant distinct eigenvalues");
  return model;
}

}  // namespace yano
