#include <iostream>

#include <CLI11.hpp>

#include "yano/errors.hpp"
#include "yano/verify.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Checks conformal Killing-Yano geometry on catalog metrics"};
  app.require_subcommand(1);
  CLI::App* verify = app.add_subcommand("verify", "run verification suites on sampled points");

  std::string metric, suite, config_path, out;
  int dim_m = 0, odd = 0, points = 0, threads = 0;
  std::uint64_t seed = 0;
  double tol = 0.0;
  bool quiet = false;
  auto* o_metric = verify->add_option("--metric", metric, "catalog model id");
  auto* o_m = verify->add_option("--dim-m", dim_m, "rank m (n = 2m + odd)");
  auto* o_odd = verify->add_option("--odd", odd, "0 or 1");
  auto* o_suite = verify->add_option("--suite", suite, "comma-separated suites or 'all'");
  auto* o_points = verify->add_option("--points", points, "number of sampled points");
  auto* o_seed = verify->add_option("--seed", seed, "sampling seed");
  auto* o_tol = verify->add_option("--tol", tol, "default relative tolerance");
  verify->add_option("--config", config_path, "YAML run configuration");
  auto* o_out = verify->add_option("--out", out, "report path (JSON)");
  auto* o_threads = verify->add_option("--threads", threads, "worker threads (0 = all cores)");
  verify->add_flag("--quiet", quiet, "only print the verdict");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    yano::RunConfig cfg;
    if (!config_path.empty()) cfg = yano::load_config(config_path);
    const yano::RunConfig file = cfg;
    if (*o_metric) cfg.metric = metric;
    if (*o_m) cfg.dim_m = dim_m;
    if (*o_odd) cfg.odd = odd;
    // parameters read from a file were resolved against its own model and dimensions
    if (cfg.parameters && (cfg.metric != file.metric || cfg.dim_m != file.dim_m || cfg.odd != file.odd))
      throw yano::ConfigError("--metric/--dim-m/--odd differ from the config file that sets parameters");
    if (*o_suite) cfg.suites = yano::parse_suite_list(suite);
    if (*o_points) cfg.points = points;
    if (*o_seed) cfg.seed = seed;
    if (*o_tol) cfg.tolerances.default_tol = tol;
    if (*o_out) cfg.output = out;
    if (*o_threads) cfg.threads = threads;

    const yano::VerificationReport r = yano::run(cfg);
    if (!cfg.output.empty()) yano::write_report(r, cfg.output);
    if (!quiet)
      for (const auto& s : r.summary)
        std::cout << (s.pass ? "PASS " : "FAIL ") << s.check << " " << yano::to_string(s.kind) << " max "
                  << s.max_residual << " (" << s.count << ")\n";
    std::cout << (r.overall_pass ? "overall PASS" : "overall FAIL") << " model " << r.model_id << " n=" << r.n
              << " points " << r.points.size() << "\n";
    return yano::exit_status(r);
  } catch (const yano::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
  } catch (const yano::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return 2;
}
