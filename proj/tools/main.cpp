#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "commands.hpp"

using namespace batemanlab;
using namespace batemanlab::cli;

namespace {

int finish(const Report& r, const RunConfig& cfg) {
  print_report(std::cout, r);
  if (!cfg.out.empty()) {
    std::ofstream os(cfg.out);
    if (!os) throw ConfigError("cannot open '" + cfg.out + "' for writing");
    os << r.to_json().dump(2) << '\n';
  }
  return exit_code(r);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bateman oscillator laboratory"};
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig cfg;
  app.add_option("--m", cfg.params.m, "mass");
  app.add_option("--gamma", cfg.params.gamma, "friction coefficient");
  app.add_option("--k", cfg.params.k, "spring constant");
  app.add_option("--out", cfg.out, "JSON report path");
  app.add_option("--tol-scale", cfg.tol_scale, "multiplies every tolerance")->check(CLI::PositiveNumber);
  app.add_option("--seed", cfg.seed, "seed for randomized checks");

  auto* algebra = app.add_subcommand("verify-algebra", "symbolic identity suite");
  algebra->add_option("--max-level", cfg.max_level, "formal spectrum up to n1, n2 <= max-level");
  algebra->add_option("--degree-cap", cfg.degree_cap, "word-degree cap of the spectrum reduction");
  algebra->add_option("--cases", cfg.random_cases, "randomized substitution cases");

  auto* vacuum = app.add_subcommand("vacuum-search", "truncated Fock vacuum residual sweep");
  vacuum->add_option("--levels", cfg.levels, "N sweep")->delimiter(',');
  vacuum->add_option("--margin", cfg.margin, "edge margin K, clamped below N/2");
  vacuum->add_option("--kind", cfg.kind, "A, B or both");
  vacuum->add_option("--sweep", cfg.sweep_path, "sweep records JSON");
  vacuum->add_option("--spectra", cfg.spectra_path, "Hermitian truncation spectra CSV");

  auto* position = app.add_subcommand("position-study", "regularized vacua on a grid");
  position->add_option("--L", cfg.box, "half-width of the box");
  position->add_option("--n", cfg.points, "grid points per axis");
  position->add_option("--eps", cfg.eps, "width sweep")->delimiter(',');
  position->add_option("--kernel-n", cfg.kernel_points, "kernel-solve grid sweep")->delimiter(',');
  position->add_option("--weight", cfg.weight, "uniform, gaussian, polynomial_decay or all");
  position->add_option("--snapshot", cfg.snapshot_path, "kernel minimizer CSV");

  auto* classical = app.add_subcommand("classical", "classical trajectory");
  std::vector<double> start(cfg.start.begin(), cfg.start.end());
  classical->add_option("--dt", cfg.dt, "time step");
  classical->add_option("--horizon", cfg.horizon, "integration time");
  classical->add_option("--start", start, "x,y,px,py")->delimiter(',')->expected(4);
  classical->add_option("--trajectory", cfg.trajectory_path, "trajectory CSV");

  auto* report = app.add_subcommand("report", "merge JSON reports");
  std::vector<std::string> paths;
  report->add_option("paths", paths, "report files");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : exit_config_error;
  }

  try {
    if (*report) {
      const auto s = merge_reports(paths);
      print_summary(std::cout, s);
      return s.pass() ? exit_pass : exit_check_failure;
    }
    std::copy(start.begin(), start.end(), cfg.start.begin());
    if (*algebra) return finish(cmd_verify_algebra(cfg), cfg);
    if (*vacuum) return finish(cmd_vacuum_search(cfg), cfg);
    if (*position) return finish(cmd_position_study(cfg), cfg);
    if (*classical) return finish(cmd_classical(cfg), cfg);
  } catch (const BlowUpError& e) {
    std::cerr << "blow-up: " << e.what() << '\n';
    return exit_blow_up;
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return exit_config_error;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return exit_config_error;
  } catch (const UnsupportedRegime& e) {
    std::cerr << "unsupported regime: " << e.what() << '\n';
    return exit_config_error;
  } catch (const ResolutionError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return exit_config_error;
  } catch (const FitError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return exit_config_error;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_check_failure;
  }
  return exit_check_failure;
}
