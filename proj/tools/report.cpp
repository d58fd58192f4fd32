#include "report.hpp"

#include <Eigen/Core>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

namespace batemanlab::cli {

namespace {

std::string comparison_name(Comparison c) {
  switch (c) {
    case Comparison::at_most: return "at_most";
    case Comparison::at_least: return "at_least";
    case Comparison::close: return "close";
  }
  return "?";
}

Comparison comparison_from(const std::string& s) {
  if (s == "at_most") return Comparison::at_most;
  if (s == "at_least") return Comparison::at_least;
  if (s == "close") return Comparison::close;
  throw ParseError("unknown comparison '" + s + "'");
}

bool evaluate(const Check& c) {
  if (!std::isfinite(c.measured)) return false;
  switch (c.comparison) {
    case Comparison::at_most: return c.measured <= c.expected + c.tolerance;
    case Comparison::at_least: return c.measured >= c.expected - c.tolerance;
    case Comparison::close: return std::abs(c.measured - c.expected) <= c.tolerance;
  }
  return false;
}

Check make(std::string name, double measured, double expected, double tolerance, Comparison cmp, std::string note) {
  Check c{std::move(name), measured, expected, tolerance, cmp, false, std::move(note)};
  c.pass = evaluate(c);
  return c;
}

// JSON has no NaN or infinity; they are stored as null.
nlohmann::json number(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

}  // namespace

Check check_at_most(std::string name, double measured, double expected, double tolerance, std::string note) {
  return make(std::move(name), measured, expected, tolerance, Comparison::at_most, std::move(note));
}

Check check_at_least(std::string name, double measured, double expected, double tolerance, std::string note) {
  return make(std::move(name), measured, expected, tolerance, Comparison::at_least, std::move(note));
}

Check check_close(std::string name, double measured, double expected, double tolerance, std::string note) {
  return make(std::move(name), measured, expected, tolerance, Comparison::close, std::move(note));
}

Check check_true(std::string name, bool ok, std::string note) {
  return make(std::move(name), ok ? 1.0 : 0.0, 1.0, 0.0, Comparison::close, std::move(note));
}

bool Report::pass() const {
  for (const auto& c : checks) {
    if (!c.pass) return false;
  }
  return true;
}

nlohmann::json environment_stamp(double wall_clock_seconds) {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  std::ostringstream ts;
  ts << std::put_time(&utc, "%Y-%m-%dT%H:%M:%SZ");
  std::ostringstream eigen;
  eigen << EIGEN_WORLD_VERSION << '.' << EIGEN_MAJOR_VERSION << '.' << EIGEN_MINOR_VERSION;
#ifdef __clang__
  const std::string compiler = std::string("clang ") + __clang_version__;
#else
  const std::string compiler = std::string("gcc ") + __VERSION__;
#endif
  return {{"compiler", compiler},
          {"eigen", eigen.str()},
          {"timestamp", ts.str()},
          {"wall_clock_seconds", wall_clock_seconds}};
}

nlohmann::json Report::to_json() const {
  nlohmann::json checks_json = nlohmann::json::array();
  for (const auto& c : checks) {
    nlohmann::json j{{"name", c.name},
                     {"measured", number(c.measured)},
                     {"expected", number(c.expected)},
                     {"tolerance", number(c.tolerance)},
                     {"comparison", comparison_name(c.comparison)},
                     {"pass", c.pass}};
    if (!c.note.empty()) j["note"] = c.note;
    checks_json.push_back(std::move(j));
  }
  return {{"schema", schema_version}, {"study", study},           {"config", config},
          {"checks", checks_json},    {"results", results},       {"pass", pass()},
          {"environment", environment_stamp(wall_clock_seconds)}};
}

Report Report::from_json(const nlohmann::json& j) {
  if (!j.is_object() || j.value("schema", std::string{}) != schema_version) {
    throw ParseError(std::string("missing or unsupported schema (expected ") + schema_version + ")");
  }
  Report r;
  try {
    r.study = j.at("study").get<std::string>();
    r.config = j.value("config", nlohmann::json::object());
    r.results = j.value("results", nlohmann::json::object());
    for (const auto& c : j.at("checks")) {
      auto num = [&](const char* key) {
        const auto& v = c.at(key);
        return v.is_null() ? std::nan("") : v.get<double>();
      };
      Check k{c.at("name").get<std::string>(), num("measured"), num("expected"), num("tolerance"),
              comparison_from(c.value("comparison", std::string("at_most"))), c.at("pass").get<bool>(),
              c.value("note", std::string{})};
      r.checks.push_back(std::move(k));
    }
    if (j.contains("environment")) r.wall_clock_seconds = j["environment"].value("wall_clock_seconds", 0.0);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed report: ") + e.what());
  }
  return r;
}

void print_report(std::ostream& os, const Report& r) {
  os << r.study << ": " << (r.pass() ? "PASS" : "FAIL") << " (" << r.checks.size() << " checks)\n";
  for (const auto& c : r.checks) {
    os << "  " << (c.pass ? "pass" : "FAIL") << "  " << std::left << std::setw(44) << c.name << std::right
       << std::setprecision(6) << " measured " << std::setw(13) << c.measured << "  " << comparison_name(c.comparison)
       << ' ' << c.expected;
    if (c.tolerance != 0) os << " ± " << c.tolerance;
    if (!c.note.empty()) os << "  [" << c.note << "]";
    os << '\n';
  }
}

bool Summary::pass() const {
  for (const auto& r : reports) {
    if (!r.pass()) return false;
  }
  return true;
}

Summary merge_reports(const std::vector<std::string>& paths) {
  Summary s;
  std::map<std::string, std::size_t> slot;
  for (const auto& path : paths) {
    std::ifstream in(path);
    if (!in) throw ParseError(path + ": cannot open report");
    Report r;
    try {
      r = Report::from_json(nlohmann::json::parse(in));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(path + ": " + e.what());
    } catch (const ParseError& e) {
      throw ParseError(path + ": " + e.what());
    }
    const auto it = slot.find(r.study);
    if (it != slot.end()) {
      s.warnings.push_back("study '" + r.study + "' from " + s.sources[it->second] + " replaced by " + path);
      s.reports[it->second] = std::move(r);
      s.sources[it->second] = path;
    } else {
      slot[r.study] = s.reports.size();
      s.sources.push_back(path);
      s.reports.push_back(std::move(r));
    }
  }
  return s;
}

void print_summary(std::ostream& os, const Summary& s) {
  for (const auto& w : s.warnings) os << "warning: " << w << '\n';
  os << std::left << std::setw(18) << "study" << std::setw(8) << "status" << std::setw(8) << "checks"
     << "failing\n";
  for (std::size_t i = 0; i < s.reports.size(); ++i) {
    const auto& r = s.reports[i];
    std::string failing;
    for (const auto& c : r.checks) {
      if (!c.pass) failing += (failing.empty() ? "" : ", ") + c.name;
    }
    os << std::setw(18) << r.study << std::setw(8) << (r.pass() ? "PASS" : "FAIL") << std::setw(8)
       << r.checks.size() << (failing.empty() ? "-" : failing) << '\n';
  }
  os << std::right << "overall: " << (s.pass() ? "PASS" : "FAIL") << " (" << s.reports.size() << " reports)\n";
}

}  // namespace batemanlab::cli
