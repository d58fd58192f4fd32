#pragma once

#include <array>
#include <string>
#include <vector>

#include "batemanlab/bateman_model.hpp"
#include "report.hpp"

namespace batemanlab::cli {

/// Everything a run depends on. Tolerance bounds are the shipped defaults
/// multiplied by `tol_scale`.
struct RunConfig {
  ModelParameters params{1.0, 0.4, 1.0};
  unsigned seed = 12345;
  double tol_scale = 1.0;
  std::string out;

  // verify-algebra
  int max_level = 4;
  int degree_cap = default_degree_cap;
  int random_cases = 200;

  // vacuum-search
  std::vector<int> levels{4, 8, 16, 32};
  int margin = 2;
  std::string kind = "both";
  std::string sweep_path;
  std::string spectra_path;

  // position-study
  double box = 4.0;
  int points = 257;
  std::vector<double> eps{0.4, 0.2, 0.1, 0.05};
  std::vector<int> kernel_points{65, 129, 257};
  std::string weight = "all";
  std::string snapshot_path;

  // classical
  double dt = 1e-3;
  double horizon = 10.0;
  std::array<double, 4> start{1.0, 0.5, 0.3, -0.2};
  std::string trajectory_path;

  /// The fields a study reads, for the report's config echo.
  nlohmann::json to_json(const std::string& study) const;
};

Report cmd_verify_algebra(const RunConfig& cfg);
Report cmd_vacuum_search(const RunConfig& cfg);
Report cmd_position_study(const RunConfig& cfg);
Report cmd_classical(const RunConfig& cfg);

/// 0 if every check passes, 2 otherwise.
int exit_code(const Report& r);

inline constexpr int exit_pass = 0;
inline constexpr int exit_check_failure = 2;
inline constexpr int exit_config_error = 3;
inline constexpr int exit_blow_up = 4;

}  // namespace batemanlab::cli
