#include <fstream>
#include <iostream>

#include "CLI11.hpp"

#include "bihyp/verifier.hpp"

namespace bihyp {

namespace {

void print_scan_roots(const ResidualReport& rep, std::ostream& os) {
  if (!rep.diagnostics.contains("roots")) return;
  const auto& roots = rep.diagnostics["roots"];
  if (roots.empty()) {
    os << "no biharmonic levels found in the scanned range\n";
    return;
  }
  for (const auto& r : roots)
    os << "biharmonic level c* = " << format_sig(r["c_star"].get<double>())
       << "  (closed form " << format_sig(r["closed_form"].get<double>())
       << ", |tau2 normal| " << format_sig(r["tau2_normal_at_root"].get<double>())
       << ")\n";
}

int finish_suite(ResidualReport rep, const RunConfig& cfg,
                 bool print_roots = false) {
  rep.print_summary(std::cout);
  if (print_roots) print_scan_roots(rep, std::cout);
  if (!cfg.out.empty()) {
    rep.write_json(cfg.out + ".json");
    rep.write_csv(cfg.out + ".csv");
    std::cout << "report written to " << cfg.out << ".json and " << cfg.out
              << ".csv\n";
  }
  bool ok = rep.all_pass();
  if (!ok) {
    std::cout << "failing checks:\n";
    for (const CheckRecord& r : rep.records)
      if (!r.pass)
        std::cout << "  " << r.check_id << " [point " << r.point_index
                  << "] residual " << format_sig(r.residual) << " > tolerance "
                  << format_sig(r.tolerance) << "\n";
  }
  std::cout << (ok ? "RESULT: PASS" : "RESULT: FAIL") << "\n";
  return ok ? 0 : 1;
}

int run_report_command(const RunConfig& cfg, const std::string& in,
                       const std::string& format) {
  std::ifstream is(in);
  if (!is) throw ConfigError("cannot read report file " + in);
  nlohmann::json j;
  try {
    is >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("malformed report file " + in + ": " + e.what());
  }
  ResidualReport rep;
  try {
    rep = ResidualReport::from_json(j);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("report file " + in +
                      " is missing required fields: " + e.what());
  }
  rep.print_summary(std::cout);
  if (!cfg.out.empty()) {
    if (format == "json" || format == "both")
      rep.write_json(cfg.out + ".json");
    if (format == "csv" || format == "both") rep.write_csv(cfg.out + ".csv");
    std::cout << "report written under " << cfg.out << "\n";
  }
  bool ok = rep.all_pass();
  std::cout << (ok ? "RESULT: PASS" : "RESULT: FAIL") << "\n";
  return ok ? 0 : 1;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
  CLI::App app{
      "Numerical verifier for a warped product ambient family, its graph "
      "hypersurfaces, and torse-forming vector field identities"};
  app.set_config("--config", "", "read options from an INI key=value file");
  app.require_subcommand(1);

  RunConfig cfg;
  std::vector<double> domain, t_interval, c_range;
  std::string report_in, report_format = "both";

  app.add_option("--u", cfg.u, "warp parameter u > 0");
  app.add_option("--v", cfg.v, "warp parameter v > 0 (0 in flat-limit mode)");
  app.add_option("--m", cfg.m, "hypersurface dimension m >= 2");
  app.add_option("--grid", cfg.grid,
                 "ambient sampling resolution; grid^3 points are checked");
  app.add_option("--domain", domain,
                 "graph domain box LO HI, applied on every axis")
      ->expected(2);
  app.add_option("--t-interval", t_interval,
                 "open interval LO HI restricting the t coordinate")
      ->expected(2);
  app.add_option("--seed", cfg.seed, "seed for all randomized sampling");
  app.add_option("--tol-tier", cfg.tol_override,
                 "override every tolerance tier with one value");
  app.add_option("--out", cfg.out,
                 "report path stem; .json and .csv are appended");
  app.add_flag("--flat-limit", cfg.flat_limit,
               "flat control mode: forces v = 0");
  app.add_flag("--corrupt-jets", cfg.corrupt_jets,
               "testing hook: perturb analytic metric jets so curvature "
               "checks must fail");
  app.add_option("--immersions", cfg.immersions,
                 "number of random graph immersions in verify-lemmas");
  app.add_option("--points-per-immersion", cfg.points_per_immersion,
                 "sample points per immersion in verify-lemmas");
  app.add_option("--c-range", c_range, "hyperplane scan range LO HI")
      ->expected(2);
  app.add_option("--c-samples", cfg.c_samples,
                 "lattice size for the hyperplane scan");
  app.add_option("--family", cfg.family,
                 "named graph family: hyperplane, affine, quadratic, sine");
  app.add_option("--fparams", cfg.family_params,
                 "parameters of the named graph family");

  CLI::App* cmd_metric = app.add_subcommand(
      "check-metric", "curvature, Ricci form, and torse-forming certification "
                      "of the ambient model");
  CLI::App* cmd_scan = app.add_subcommand(
      "scan-hyperplane", "locate biharmonic hyperplane levels t = c and "
                         "compare against closed forms");
  CLI::App* cmd_lemmas = app.add_subcommand(
      "verify-lemmas", "structure identities along random graph immersions "
                       "plus the obstruction scan");
  CLI::App* cmd_report = app.add_subcommand(
      "report", "reload a stored JSON report and re-emit it");
  cmd_report->add_option("--in", report_in, "stored JSON report")->required();
  cmd_report->add_option("--format", report_format,
                         "output format: json, csv, or both")
      ->check(CLI::IsMember({"json", "csv", "both"}));
  for (CLI::App* sub : {cmd_metric, cmd_scan, cmd_lemmas, cmd_report})
    sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (domain.size() == 2) {
      cfg.domain_lo = domain[0];
      cfg.domain_hi = domain[1];
      if (!(cfg.domain_lo < cfg.domain_hi))
        throw ConfigError("domain LO must be below HI");
    }
    if (t_interval.size() == 2) {
      cfg.t_interval = Interval{t_interval[0], t_interval[1]};
      if (!(cfg.t_interval.lo < cfg.t_interval.hi))
        throw ConfigError("t-interval LO must be below HI");
    }
    if (c_range.size() == 2) {
      cfg.c_lo = c_range[0];
      cfg.c_hi = c_range[1];
    }
    if (cfg.flat_limit) cfg.v = 0.0;

    if (cmd_metric->parsed()) return finish_suite(run_check_metric(cfg), cfg);
    if (cmd_scan->parsed())
      return finish_suite(run_scan_hyperplane(cfg), cfg, true);
    if (cmd_lemmas->parsed()) return finish_suite(run_verify_lemmas(cfg), cfg);
    if (cmd_report->parsed())
      return run_report_command(cfg, report_in, report_format);
    throw ConfigError("no command given");
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace bihyp
