#include "commands.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>

#include "batemanlab/classical_dynamics.hpp"
#include "batemanlab/fock_numeric.hpp"
#include "batemanlab/position_space.hpp"

namespace batemanlab::cli {

namespace {

using cd = std::complex<double>;
using Poly = OperatorPolynomial;
using json = nlohmann::json;
using steady = std::chrono::steady_clock;

json complex_json(cd z) { return json::array({z.real(), z.imag()}); }

double elapsed(steady::time_point t0) {
  return std::chrono::duration<double>(steady::now() - t0).count();
}

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

std::ofstream open_output(const std::string& path) {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot open '" + path + "' for writing");
  os << std::setprecision(17);
  return os;
}

void write_json_file(const std::string& path, const json& j) {
  auto os = open_output(path);
  os << j.dump(2) << '\n';
}

Poly identity(cd c, AlgebraId id) { return Poly::identity(c, id); }

// ---------------------------------------------------------------- algebra

void add_form_checks(Report& r, const ModelParameters& p, double tol) {
  const auto ps = phase_space_table();
  const auto lad = ladder_table(p.regime());
  const auto pb = pseudo_table();
  const auto ladders = build_ladder_pairs(p);
  const auto ops = build_pseudo_ops(p);
  const Poly hps = build_phase_space_hamiltonian(p);
  const Poly hlad = build_ladder_hamiltonian(p);

  HamiltonianForms forms;
  try {
    forms = pseudo_form(p);
    r.checks.push_back(check_true("pseudo form consistency", true));
  } catch (const InternalConsistencyError& e) {
    r.checks.push_back(check_true("pseudo form consistency", false, e.what()));
    return;
  }
  const Poly hpb = forms.pseudo();

  r.checks.push_back(check_at_most("H: Bateman coordinates -> phase space",
                                   residual(substitute(bateman_hamiltonian(p), rotation_to_normal_modes(), ps), hps, ps),
                                   0, tol));
  r.checks.push_back(check_at_most("H: ladder -> phase space",
                                   residual(substitute(hlad, ladders.to_phase_space, ps), hps, ps), 0, tol));
  r.checks.push_back(
      check_at_most("H: ladder -> pseudo-boson", residual(substitute(hlad, ops.from_ladder, pb), hpb, pb), 0, tol));
  r.checks.push_back(
      check_at_most("H: pseudo-boson -> ladder", residual(substitute(hpb, ops.to_ladder, lad), hlad, lad), 0, tol));

  bool number_only = true;
  for (const auto& [w, c] : hpb.terms()) {
    const bool ok = w.empty() || w == Word{Tag::B1, Tag::A1} || w == Word{Tag::B2, Tag::A2};
    number_only = number_only && ok;
  }
  r.checks.push_back(check_true("pseudo form uses only B_jA_j and the identity", number_only));

  const cd w = p.omega(), rate(0, p.damping_rate());
  const cd c11 = hpb.coefficient({Tag::B1, Tag::A1}), c22 = hpb.coefficient({Tag::B2, Tag::A2});
  const cd c0 = hpb.coefficient({});
  r.checks.push_back(check_at_most("coefficient of B1A1 = omega + i gamma/2m", std::abs(c11 - (w + rate)), 0, tol));
  r.checks.push_back(check_at_most("coefficient of B2A2 = -omega + i gamma/2m", std::abs(c22 - (-w + rate)), 0, tol));
  r.checks.push_back(check_at_most("identity coefficient = i gamma/2m", std::abs(c0 - rate), 0, tol));
  const double hi_identity = forms.hi.coefficient({}).imag();
  r.checks.push_back(check_close("H_I identity coefficient", hi_identity, p.damping_rate(), tol));

  json h0 = json::object(), hi = json::object();
  h0["B1A1"] = complex_json(forms.h0.coefficient({Tag::B1, Tag::A1}));
  h0["B2A2"] = complex_json(forms.h0.coefficient({Tag::B2, Tag::A2}));
  hi["B1A1"] = complex_json(forms.hi.coefficient({Tag::B1, Tag::A1}));
  hi["B2A2"] = complex_json(forms.hi.coefficient({Tag::B2, Tag::A2}));
  hi["identity"] = complex_json(forms.hi.coefficient({}));
  r.results["h0"] = h0;
  r.results["hi"] = hi;
  r.results["form_max_residual"] = forms.max_residual;

  r.checks.push_back(check_at_most("H = H^dag (phase space)", residual(adjoint(hps), hps, ps), 0, tol));
  const auto bt = bateman_table();
  const Poly hb = bateman_hamiltonian(p);
  r.checks.push_back(check_at_most("H = H^dag (Bateman coordinates)", residual(adjoint(hb), hb, bt), 0, tol));
}

void add_pseudo_checks(Report& r, const ModelParameters& p, double tol) {
  const auto lad = ladder_table(p.regime());
  const auto ps = phase_space_table();
  const auto ops = build_pseudo_ops(p);
  const auto ladders = build_ladder_pairs(p);
  const AlgebraId lid = lad.id();

  for (int j = 0; j < 2; ++j) {
    for (int k = 0; k < 2; ++k) {
      const Poly c = commutator(ops.lowering[j], ops.raising[k], lad);
      const std::string name = "[A" + std::to_string(j + 1) + ",B" + std::to_string(k + 1) + "] = " +
                               (j == k ? "1" : "0");
      r.checks.push_back(check_at_most(name, residual(c, identity(j == k ? 1.0 : 0.0, lid), lad), 0, tol));
    }
  }
  r.checks.push_back(check_at_most(
      "[A1,A2] = 0", max_abs_coefficient(commutator(ops.lowering[0], ops.lowering[1], lad)), 0, tol));
  r.checks.push_back(
      check_at_most("[B1,B2] = 0", max_abs_coefficient(commutator(ops.raising[0], ops.raising[1], lad)), 0, tol));

  // The physical adjoint is taken on the phase-space images.
  auto ph = [&](const Poly& q) { return substitute(q, ladders.to_phase_space, ps); };
  const Poly A1 = ph(ops.lowering[0]), A2 = ph(ops.lowering[1]);
  const Poly B1 = ph(ops.raising[0]), B2 = ph(ops.raising[1]);
  const std::string note = p.regime() == Regime::overdamped ? "physical adjoint, omega = i tau" : "";
  r.checks.push_back(check_at_most("A1 = -A2^dag", max_abs_coefficient(normal_order(A1 + adjoint(A2), ps)), 0, tol,
                                   note));
  r.checks.push_back(check_at_most("B1 = B2^dag", max_abs_coefficient(normal_order(B1 - adjoint(B2), ps)), 0, tol,
                                   note));
  r.checks.push_back(check_at_least("B1 != A1^dag", residual(B1, adjoint(A1), ps), 1e-6));
  r.checks.push_back(check_at_least("B2 != A2^dag", residual(B2, adjoint(A2), ps), 1e-6));
}

void add_ladder_checks(Report& r, const ModelParameters& p, double tol) {
  const auto ps = phase_space_table();
  const auto l = build_ladder_pairs(p);
  const auto one = [](bool on, cd c) { return identity(on ? c : cd(0), AlgebraId::phase_space); };
  const bool over = p.regime() == Regime::overdamped;

  for (int j = 0; j < 2; ++j) {
    for (int k = 0; k < 2; ++k) {
      const std::string jk = std::to_string(j + 1) + ",a" + std::to_string(k + 1);
      const Poly c = commutator(l.lowering[j], adjoint(l.lowering[k]), ps);
      if (over) {
        r.checks.push_back(check_at_most("[a" + jk + "^dag] = " + (j == k ? "i" : "0"),
                                         residual(c, one(j == k, cd(0, 1)), ps), 0, tol,
                                         "measured |[a,a^dag]-i delta|; the commutator itself has norm " +
                                             fmt(max_abs_coefficient(c))));
        const Poly e = commutator(l.lowering[j], l.raising[k], ps);
        r.checks.push_back(check_at_most("[a" + std::to_string(j + 1) + ",b" + std::to_string(k + 1) + "] = " +
                                             (j == k ? "1" : "0"),
                                         residual(e, one(j == k, 1.0), ps), 0, tol));
      } else {
        r.checks.push_back(check_at_most("[a" + jk + "^dag] = " + (j == k ? "1" : "0"),
                                         residual(c, one(j == k, 1.0), ps), 0, tol));
      }
    }
  }
  r.checks.push_back(
      check_at_most("[a1,a2] = 0", max_abs_coefficient(commutator(l.lowering[0], l.lowering[1], ps)), 0, tol));
}

void add_spectrum_checks(Report& r, const RunConfig& cfg) {
  const auto& p = cfg.params;
  double value_err = 0, relation = 0;
  json levels = json::array();
  for (int n1 = 0; n1 <= cfg.max_level; ++n1) {
    for (int n2 = 0; n2 <= cfg.max_level; ++n2) {
      const cd closed = p.omega() * double(n1 - n2) + cd(0, p.damping_rate() * (n1 + n2 + 1));
      const cd e = formal_spectrum(n1, n2, p, cfg.degree_cap);
      value_err = std::max(value_err, std::abs(e - closed));
      relation = std::max(relation, eigenrelation_residual(n1, n2, closed, p));
      levels.push_back({{"n1", n1}, {"n2", n2}, {"energy", complex_json(e)}});
    }
  }
  const std::string range = " (n1,n2 <= " + std::to_string(cfg.max_level) + ")";
  r.checks.push_back(check_at_most("formal spectrum matches omega(n1-n2)+i(gamma/2m)(n1+n2+1)" + range, value_err, 0,
                                   1e-10 * cfg.tol_scale));
  r.checks.push_back(check_at_most("eigenrelation residual modulo the right ideal" + range, relation, 0,
                                   1e-10 * cfg.tol_scale));
  r.results["formal_spectrum"] = levels;
}

void add_random_checks(Report& r, const RunConfig& cfg, double tol) {
  const auto ops = build_pseudo_ops(cfg.params);
  const auto lad = ladder_table(cfg.params.regime());
  const auto pb = pseudo_table();
  std::mt19937 rng(cfg.seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const std::vector<Tag> tags{Tag::A1, Tag::A2, Tag::B1, Tag::B2};
  auto random_poly = [&] {
    Poly q(AlgebraId::pseudo);
    const int terms = 1 + static_cast<int>(rng() % 4);
    for (int t = 0; t < terms; ++t) {
      Word w(rng() % 4);
      for (auto& g : w) g = tags[rng() % tags.size()];
      q.add_term(w, cd(u(rng), u(rng)));
    }
    return q;
  };
  double round_trip = 0, homomorphism = 0;
  for (int c = 0; c < cfg.random_cases; ++c) {
    const Poly a = random_poly(), b = random_poly();
    const Poly back = substitute(substitute(a, ops.to_ladder, lad), ops.from_ladder, pb);
    round_trip = std::max(round_trip, residual(back, normal_order(a, pb), pb));
    const Poly lhs = substitute(multiply(a, b), ops.to_ladder, lad);
    const Poly rhs = normal_order(multiply(substitute(a, ops.to_ladder, lad), substitute(b, ops.to_ladder, lad)), lad);
    homomorphism = std::max(homomorphism, residual(lhs, rhs, lad) / std::max(1.0, max_abs_coefficient(rhs)));
  }
  const std::string n = " (" + std::to_string(cfg.random_cases) + " random cases)";
  r.checks.push_back(check_at_most("pseudo -> ladder -> pseudo round trip" + n, round_trip, 0, tol));
  r.checks.push_back(check_at_most("pseudo -> ladder is multiplicative" + n, homomorphism, 0, tol));
}

// ---------------------------------------------------------------- vacuum

std::vector<VacuumKind> kinds_of(const std::string& s) {
  if (s == "A") return {VacuumKind::A};
  if (s == "B") return {VacuumKind::B};
  if (s == "both") return {VacuumKind::A, VacuumKind::B};
  throw ConfigError("kind must be A, B or both, got '" + s + "'");
}

std::string kind_str(VacuumKind k) { return std::string(vacuum_kind_name(k)); }

FockTruncation truncation_for(int N, int margin) { return {N, std::clamp(margin, 0, (N - 1) / 2)}; }

double brute_force_sigma(const FockTruncation& tr, VacuumKind kind) {
  const Eigen::MatrixXcd s(stacked_annihilators(tr, kind));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(s.adjoint() * s);
  return std::sqrt(std::max(es.eigenvalues()[0], 0.0));
}

VacuumSearchReport run_kind(const ModelParameters& p, const FockTruncation& tr, VacuumKind kind,
                            SolverPath path = SolverPath::automatic) {
  return kind == VacuumKind::A ? vacuum_residual_min(p, tr, path) : bvacuum_residual_min(p, tr, path);
}

double overlap_for(const VacuumSearchReport& rep, const FockTruncation& tr) {
  if (rep.kind == VacuumKind::A) return regularized_diagonal_overlap(rep, tr);
  VacuumSearchReport mirrored = rep;
  mirrored.minimizer = mode2_parity(tr) * rep.minimizer;
  std::swap(mirrored.u2, mirrored.v2);
  return regularized_diagonal_overlap(mirrored, tr);
}

void add_trend_checks(Report& r, const std::vector<VacuumSearchReport>& reps, double scale) {
  const std::string k = kind_str(reps.front().kind);
  const bool is_a = reps.front().kind == VacuumKind::A;
  const std::string width = is_a ? "<v2>" : "<u2>";
  auto spread = [&](const VacuumSearchReport& x) { return is_a ? x.v2 : x.u2; };
  for (std::size_t i = 0; i < reps.size(); ++i) {
    const std::string at = " (" + k + ", N=" + std::to_string(reps[i].levels) + ")";
    r.checks.push_back(check_at_least("sigma_min > 0" + at, reps[i].sigma_min, 1e-12));
    if (i == 0) continue;
    const std::string step =
        " (" + k + ", N=" + std::to_string(reps[i - 1].levels) + "->" + std::to_string(reps[i].levels) + ")";
    r.checks.push_back(check_at_most("sigma_min non-increasing" + step, reps[i].sigma_min, reps[i - 1].sigma_min,
                                     1e-12 * scale));
    const double inc = spread(reps[i]) - spread(reps[i - 1]);
    r.checks.push_back(check_at_least(width + " strictly increasing" + step, inc, 1e-9));
    if (i >= 2) {
      const double prev = spread(reps[i - 1]) - spread(reps[i - 2]);
      r.checks.push_back(
          check_at_least(width + " increments non-decreasing" + step, inc, prev, 1e-9 * scale, "no saturation"));
    }
  }
}

json record_json(const ModelParameters& p, const FockTruncation& tr, const VacuumSearchReport& rep, double overlap,
                 const SpectrumStudy& spec) {
  return {{"m", p.m},
          {"gamma", p.gamma},
          {"k", p.k},
          {"N", tr.levels},
          {"K", tr.margin},
          {"kind", kind_str(rep.kind)},
          {"sigma_min", rep.sigma_min},
          {"moments", {{"u2", rep.u2}, {"v2", rep.v2}}},
          {"participation_ratio", rep.participation_ratio},
          {"overlap", overlap},
          {"solver", rep.solver},
          {"cutoff_kernel_residual", rep.cutoff_kernel_residual},
          {"gamma_independent", rep.gamma_independent},
          {"spectrum_window_count", spec.window_count},
          {"spectrum_form", spec.form}};
}

// ---------------------------------------------------------------- position

WeightFunction weight_named(const std::string& name, const GridSpec& g) {
  for (auto& w : shipped_weights(g)) {
    if (w.name == name) return w;
  }
  throw ConfigError("unknown weight '" + name + "'");
}

std::vector<std::string> weight_names(const RunConfig& cfg) {
  std::vector<std::string> names;
  for (const auto& w : shipped_weights(GridSpec{4.0, 33})) names.push_back(w.name);
  if (cfg.weight == "all") return names;
  if (std::find(names.begin(), names.end(), cfg.weight) == names.end()) {
    throw ConfigError("unknown weight '" + cfg.weight + "'");
  }
  return {cfg.weight};
}

}  // namespace

json RunConfig::to_json(const std::string& study) const {
  json j{{"study", study},
         {"params", {{"m", params.m}, {"gamma", params.gamma}, {"k", params.k}}},
         {"seed", seed},
         {"tol_scale", tol_scale},
         {"out", out}};
  if (study == "verify-algebra") {
    j["max_level"] = max_level;
    j["degree_cap"] = degree_cap;
    j["random_cases"] = random_cases;
  } else if (study == "vacuum-search") {
    j["levels"] = levels;
    j["margin"] = margin;
    j["kind"] = kind;
    j["sweep"] = sweep_path;
    j["spectra"] = spectra_path;
  } else if (study == "position-study") {
    j["L"] = box;
    j["n"] = points;
    j["eps"] = eps;
    j["kernel_n"] = kernel_points;
    j["weight"] = weight;
    j["snapshot"] = snapshot_path;
  } else if (study == "classical") {
    j["dt"] = dt;
    j["horizon"] = horizon;
    j["start"] = start;
    j["trajectory"] = trajectory_path;
  }
  return j;
}

Report cmd_verify_algebra(const RunConfig& cfg) {
  const auto t0 = steady::now();
  cfg.params.validate();
  if (cfg.max_level < 0 || cfg.random_cases < 0) throw ConfigError("max level and case count must be non-negative");
  Report r;
  r.study = "verify-algebra";
  r.config = cfg.to_json("verify-algebra");
  const double tol = 1e-12 * cfg.tol_scale;
  r.results["regime"] = std::string(regime_name(cfg.params.regime()));
  r.results["omega"] = complex_json(cfg.params.omega());
  add_form_checks(r, cfg.params, tol);
  add_pseudo_checks(r, cfg.params, tol);
  add_ladder_checks(r, cfg.params, tol);
  add_spectrum_checks(r, cfg);
  add_random_checks(r, cfg, tol);
  r.wall_clock_seconds = elapsed(t0);
  return r;
}

Report cmd_vacuum_search(const RunConfig& cfg) {
  const auto t0 = steady::now();
  const auto& p = cfg.params;
  p.validate();
  if (p.regime() != Regime::underdamped) throw UnsupportedRegime("the vacuum search needs the underdamped regime");
  if (cfg.levels.empty()) throw ConfigError("the N sweep is empty");
  for (std::size_t i = 0; i < cfg.levels.size(); ++i) {
    if (cfg.levels[i] < 2) throw ConfigError("every N must be at least 2");
    if (i > 0 && cfg.levels[i] <= cfg.levels[i - 1]) throw ConfigError("the N sweep must be strictly increasing");
  }
  const auto kinds = kinds_of(cfg.kind);
  const double scale = cfg.tol_scale;
  Report r;
  r.study = "vacuum-search";
  r.config = cfg.to_json("vacuum-search");

  std::vector<VacuumSearchReport> a, b;
  std::vector<SpectrumStudy> spectra;
  for (int N : cfg.levels) {
    const auto tr = truncation_for(N, cfg.margin);
    a.push_back(run_kind(p, tr, VacuumKind::A));
    b.push_back(run_kind(p, tr, VacuumKind::B));
    spectra.push_back(hermitian_spectrum_study(p, tr));
  }

  json records = json::array();
  for (VacuumKind k : kinds) {
    const auto& reps = k == VacuumKind::A ? a : b;
    for (std::size_t i = 0; i < reps.size(); ++i) {
      const auto tr = truncation_for(cfg.levels[i], cfg.margin);
      records.push_back(record_json(p, tr, reps[i], overlap_for(reps[i], tr), spectra[i]));
    }
    add_trend_checks(r, reps, scale);
  }

  for (std::size_t i = 0; i < cfg.levels.size(); ++i) {
    const int N = cfg.levels[i];
    const auto tr = truncation_for(N, cfg.margin);
    const std::string at = " (N=" + std::to_string(N) + ")";
    if (std::find(kinds.begin(), kinds.end(), VacuumKind::B) != kinds.end()) {
      const Eigen::VectorXcd mapped = mode2_parity(tr) * a[i].minimizer;
      r.checks.push_back(check_at_most("B mirrors A under parity: sigma_min" + at,
                                       std::abs(a[i].sigma_min - b[i].sigma_min), 0, 1e-10 * scale));
      r.checks.push_back(check_at_most("B mirrors A under parity: moments" + at,
                                       std::max(std::abs(a[i].u2 - b[i].v2), std::abs(a[i].v2 - b[i].u2)), 0,
                                       1e-10 * scale));
      r.checks.push_back(check_at_most("B mirrors A under parity: minimizer" + at,
                                       1.0 - std::abs(mapped.dot(b[i].minimizer)), 0, 1e-10 * scale));
    }
    if (N == 2) {
      for (VacuumKind k : kinds) {
        const auto& rep = k == VacuumKind::A ? a[i] : b[i];
        r.checks.push_back(check_at_most("N=2 brute-force agreement (" + kind_str(k) + ")",
                                         std::abs(rep.sigma_min - brute_force_sigma(tr, k)), 0, 1e-10 * scale));
      }
    }
    if (N == 16) {
      const auto dense = run_kind(p, tr, VacuumKind::A, SolverPath::dense);
      const auto iter = run_kind(p, tr, VacuumKind::A, SolverPath::iterative);
      r.checks.push_back(check_at_most("dense and iterative solvers agree (A, N=16)",
                                       std::abs(dense.sigma_min - iter.sigma_min), 0, 1e-9 * scale));
    }
  }

  r.results["records"] = records;
  if (cfg.levels.size() >= 2) {
    std::vector<double> x, y;
    for (std::size_t i = 0; i < cfg.levels.size(); ++i) {
      x.push_back(cfg.levels[i]);
      y.push_back(a[i].sigma_min);
    }
    r.results["sigma_min_power_law_exponent"] = fit_power_law(x, y).exponent;
  }

  if (!cfg.sweep_path.empty()) {
    write_json_file(cfg.sweep_path, {{"schema", schema_version}, {"config", r.config}, {"records", records}});
  }
  if (!cfg.spectra_path.empty()) {
    auto os = open_output(cfg.spectra_path);
    os << "N,index,eigenvalue\n";
    for (std::size_t i = 0; i < spectra.size(); ++i) {
      for (Eigen::Index j = 0; j < spectra[i].eigenvalues.size(); ++j) {
        os << cfg.levels[i] << ',' << j << ',' << spectra[i].eigenvalues[j] << '\n';
      }
    }
  }
  r.wall_clock_seconds = elapsed(t0);
  return r;
}

Report cmd_position_study(const RunConfig& cfg) {
  const auto t0 = steady::now();
  const auto& p = cfg.params;
  p.validate();
  const GridSpec g{cfg.box, cfg.points};
  g.validate();
  if (cfg.kernel_points.empty()) throw ConfigError("the kernel grid sweep is empty");
  const double scale = cfg.tol_scale;
  const auto names = weight_names(cfg);
  Report r;
  r.study = "position-study";
  r.config = cfg.to_json("position-study");

  json norms = json::object();
  for (const auto& name : names) {
    const auto ng = norm_growth(cfg.eps, g, weight_named(name, g));
    r.checks.push_back(check_close("norm growth exponent (" + name + ")", ng.exponent, -1.0, 0.1 * scale));
    norms[name] = {{"eps", ng.eps}, {"norms", ng.norms}, {"exponent", ng.exponent}};
  }
  const auto blob = [&](double) {
    GridFunction::Matrix v(g.n, g.n);
    const Eigen::VectorXd x = g.axis();
    for (int j = 0; j < g.n; ++j) {
      for (int i = 0; i < g.n; ++i) v(i, j) = std::exp(-(x[i] * x[i] + x[j] * x[j]) / 2.0) / std::sqrt(M_PI);
    }
    return GridFunction(g, v);
  };
  const auto control = norm_growth(cfg.eps, blob, uniform_weight(g));
  r.checks.push_back(check_close("norm growth exponent (fixed Gaussian control)", control.exponent, 0.0, 0.1 * scale));
  r.results["norm_growth"] = norms;

  const auto basket = default_basket(g);
  std::vector<WeakResidual> weak;
  for (double e : cfg.eps) weak.push_back(weak_residual(sample_regularized_vacuum(e, g, VacuumKind::A), basket, p,
                                                        VacuumKind::A));
  double worst_ratio = 0, worst_derivative = 0;
  json weak_json = json::array();
  for (std::size_t i = 0; i < weak.size(); ++i) {
    worst_derivative = std::max(worst_derivative, weak[i].max_derivative);
    weak_json.push_back({{"eps", cfg.eps[i]},
                         {"multiplication", weak[i].multiplication},
                         {"derivative", weak[i].derivative},
                         {"convention", weak[i].convention}});
    if (i == 0) continue;
    for (std::size_t m = 0; m < basket.members.size(); ++m) {
      if (weak[0].multiplication[m] < 1e-10) continue;  // vanishes by symmetry
      const double now = weak[i].multiplication[m] / cfg.eps[i];
      const double before = weak[i - 1].multiplication[m] / cfg.eps[i - 1];
      worst_ratio = std::max(worst_ratio, now / before);
    }
  }
  r.checks.push_back(check_at_most("weak multiplication residual / eps non-increasing", worst_ratio, 1.0, 1e-12,
                                   "largest ratio between successive widths"));
  r.checks.push_back(check_at_most("weak derivative pairing", worst_derivative, 0, 1e-10 * scale));
  r.results["weak_residual"] = weak_json;
  r.results["basket_box_leak"] = basket.worst_box_leak();

  json kernel = json::object();
  GridFunction snapshot;
  bool have_snapshot = false;
  for (const auto& name : names) {
    json rows = json::array();
    std::vector<KernelSolveResult> res;
    for (int n : cfg.kernel_points) {
      const GridSpec gk{cfg.box, n};
      gk.validate();
      res.push_back(discrete_kernel_solve(gk, weight_named(name, gk), p, VacuumKind::A));
      const auto& k = res.back();
      const std::string at = " (" + name + ", n=" + std::to_string(n) + ")";
      r.checks.push_back(check_at_most("kernel minimizer transverse width <= 2h" + at, k.transverse_width, 2 * gk.h()));
      rows.push_back({{"n", n},
                      {"h", gk.h()},
                      {"residual", k.residual},
                      {"sup_norm", k.sup_norm},
                      {"transverse_width", k.transverse_width},
                      {"iterations", k.iterations},
                      {"convention", k.convention}});
      if (res.size() < 2) continue;
      const auto& prev = res[res.size() - 2];
      r.checks.push_back(check_at_least("kernel sup-norm increasing" + at, k.sup_norm - prev.sup_norm, 1e-12));
      r.checks.push_back(check_at_least("kernel residual decreasing" + at, prev.residual - k.residual, 1e-15));
    }
    kernel[name] = rows;
    if (!have_snapshot) {
      snapshot = res.back().minimizer;
      have_snapshot = true;
    }
  }
  {
    const GridSpec gk{cfg.box, cfg.kernel_points.front()};
    const auto w = weight_named(names.front(), gk);
    const auto ka = discrete_kernel_solve(gk, w, p, VacuumKind::A);
    const auto kb = discrete_kernel_solve(gk, w, p, VacuumKind::B);
    r.checks.push_back(check_at_most("B kernel minimizer mirrors A (" + names.front() + ")",
                                     std::abs(ka.residual - kb.residual) / ka.residual, 0, 1e-6 * scale,
                                     "relative residual difference"));
  }
  r.results["kernel_solve"] = kernel;

  if (!cfg.snapshot_path.empty()) {
    auto os = open_output(cfg.snapshot_path);
    write_csv(os, snapshot);
  }
  r.wall_clock_seconds = elapsed(t0);
  return r;
}

Report cmd_classical(const RunConfig& cfg) {
  const auto t0 = steady::now();
  const auto& p = cfg.params;
  p.validate();
  Report r;
  r.study = "classical";
  r.config = cfg.to_json("classical");
  const ClassicalState s0{cfg.start[0], cfg.start[1], cfg.start[2], cfg.start[3], 0.0};
  const auto tr = integrate(s0, cfg.dt, cfg.horizon, p);
  const double scale = cfg.tol_scale;

  double xmax = 0, ymax = 0;
  for (const auto& s : tr.states) {
    xmax = std::max(xmax, std::abs(s.x));
    ymax = std::max(ymax, std::abs(s.y));
  }
  const auto eom = eom_residual(tr, p);
  const double unit = cfg.dt * cfg.dt;
  r.checks.push_back(check_at_most("EOM residual m x'' + gamma x' + k x (per unit amplitude, dt^2)",
                                   eom.r_x / (std::max(xmax, 1e-300) * p.k * unit), 1.0 * scale));
  r.checks.push_back(check_at_most("EOM residual m y'' - gamma y' + k y (per unit amplitude, dt^2)",
                                   eom.r_y / (std::max(ymax, 1e-300) * p.k * unit), 1.0 * scale));
  const double drift = energy_drift(tr, p);
  r.checks.push_back(check_at_most("H conserved (relative drift)", drift, 0, 1e-8 * scale));

  json env = json::object();
  if (p.regime() == Regime::underdamped) {
    const double rate = p.damping_rate();
    const double tol = std::max(0.02 * rate, 1e-6) * scale;
    const double ey = envelope_exponent(tr, p, Coordinate::y), ex = envelope_exponent(tr, p, Coordinate::x);
    r.checks.push_back(check_close("y envelope growth exponent = gamma/2m", ey, rate, tol));
    r.checks.push_back(check_close("x envelope decay exponent = -gamma/2m", ex, -rate, tol));
    env = {{"x", ex}, {"y", ey}, {"gamma_over_2m", rate}};
  }
  r.results["envelope"] = env;
  r.results["eom_residual"] = {{"r_x", eom.r_x}, {"r_y", eom.r_y}};
  r.results["energy_drift"] = drift;
  r.results["steps"] = tr.steps;

  if (!cfg.trajectory_path.empty()) {
    auto os = open_output(cfg.trajectory_path);
    os << "t,x,y,px,py\n";
    for (const auto& s : tr.states) os << s.t << ',' << s.x << ',' << s.y << ',' << s.px << ',' << s.py << '\n';
  }
  r.wall_clock_seconds = elapsed(t0);
  return r;
}

int exit_code(const Report& r) { return r.pass() ? exit_pass : exit_check_failure; }

}  // namespace batemanlab::cli
