#pragma once

#include <iosfwd>
#include <json.hpp>
#include <string>
#include <vector>

#include "batemanlab/errors.hpp"

namespace batemanlab::cli {

inline constexpr const char* schema_version = "batemanlab/1";

class ParseError : public Error {
 public:
  using Error::Error;
};

enum class Comparison { at_most, at_least, close };

/// One verdict: measured ≤ expected + tolerance (at_most),
/// measured ≥ expected − tolerance (at_least) or |measured − expected| ≤ tolerance (close).
struct Check {
  std::string name;
  double measured = 0;
  double expected = 0;
  double tolerance = 0;
  Comparison comparison = Comparison::at_most;
  bool pass = false;
  std::string note;
};

Check check_at_most(std::string name, double measured, double expected, double tolerance = 0, std::string note = {});
Check check_at_least(std::string name, double measured, double expected, double tolerance = 0, std::string note = {});
Check check_close(std::string name, double measured, double expected, double tolerance, std::string note = {});
Check check_true(std::string name, bool ok, std::string note = {});

struct Report {
  std::string study;
  nlohmann::json config;
  std::vector<Check> checks;
  nlohmann::json results = nlohmann::json::object();
  double wall_clock_seconds = 0;

  bool pass() const;
  /// Deterministic apart from the "environment" member.
  nlohmann::json to_json() const;
  static Report from_json(const nlohmann::json& j);
};

nlohmann::json environment_stamp(double wall_clock_seconds);

/// Human-readable table of one report.
void print_report(std::ostream& os, const Report& r);

struct Summary {
  std::vector<Report> reports;  // keyed by study, first-seen order
  std::vector<std::string> sources;
  std::vector<std::string> warnings;

  bool pass() const;
};

/// Merges report files by study; a later file with the same study replaces
/// the earlier one and a warning is recorded. Throws ParseError naming the file.
Summary merge_reports(const std::vector<std::string>& paths);
void print_summary(std::ostream& os, const Summary& s);

}  // namespace batemanlab::cli
