#include "batemanlab/bateman_model.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <string>

namespace batemanlab {

namespace {

using cd = std::complex<double>;
using Poly = OperatorPolynomial;

constexpr cd I{0.0, 1.0};

Poly gen(Tag t, AlgebraId id, cd c = 1.0) { return Poly::generator(t, id, c); }

void require_non_critical(const ModelParameters& params) {
  params.validate();
}

}  // namespace

std::string_view regime_name(Regime r) {
  switch (r) {
    case Regime::underdamped: return "underdamped";
    case Regime::critical: return "critical";
    case Regime::overdamped: return "overdamped";
  }
  return "?";
}

Regime ModelParameters::regime() const {
  const double w2 = omega2();
  // Relative guard so that e.g. (m, γ, k) = (1, 2, 1) is classified critical.
  if (std::abs(w2) <= 1e-12 * (k / m)) return Regime::critical;
  return w2 > 0 ? Regime::underdamped : Regime::overdamped;
}

std::complex<double> ModelParameters::omega() const {
  const double w2 = omega2();
  return w2 >= 0 ? cd(std::sqrt(w2), 0.0) : cd(0.0, std::sqrt(-w2));
}

double ModelParameters::tau() const { return std::sqrt(std::max(0.0, -omega2())); }

void ModelParameters::validate() const {
  if (!(m > 0) || !std::isfinite(m)) throw ConfigError("mass must be positive and finite");
  if (!(k > 0) || !std::isfinite(k)) throw ConfigError("spring constant must be positive and finite");
  if (!(gamma >= 0) || !std::isfinite(gamma)) throw ConfigError("friction must be non-negative and finite");
  if (regime() == Regime::critical) {
    throw UnsupportedRegime("critical damping (omega^2 = 0) is not supported");
  }
}

std::string_view vacuum_kind_name(VacuumKind k) { return k == VacuumKind::A ? "A" : "B"; }

OperatorPolynomial bateman_hamiltonian(const ModelParameters& params) {
  require_non_critical(params);
  const double m = params.m, g = params.gamma;
  const auto id = AlgebraId::bateman;
  const auto table = bateman_table();
  const Poly x = gen(Tag::x, id), y = gen(Tag::y, id), px = gen(Tag::px, id), py = gen(Tag::py, id);
  // Symmetric products; [y,py] and [x,px] corrections cancel in the difference.
  const Poly ypy = 0.5 * (y * py + py * y);
  const Poly xpx = 0.5 * (x * px + px * x);
  Poly h = (1.0 / m) * (px * py) + (g / (2.0 * m)) * (ypy - xpx) +
           (params.k - g * g / (4.0 * m)) * (x * y);
  return normal_order(h, table);
}

Substitution<std::complex<double>> rotation_to_normal_modes() {
  const auto id = AlgebraId::phase_space;
  const double r = 1.0 / std::sqrt(2.0);
  Substitution<cd> s(AlgebraId::bateman, id);
  s.set(Tag::x, r * (gen(Tag::x1, id) + gen(Tag::x2, id)));
  s.set(Tag::y, r * (gen(Tag::x1, id) - gen(Tag::x2, id)));
  s.set(Tag::px, r * (gen(Tag::p1, id) + gen(Tag::p2, id)));
  s.set(Tag::py, r * (gen(Tag::p1, id) - gen(Tag::p2, id)));
  return s;
}

OperatorPolynomial build_phase_space_hamiltonian(const ModelParameters& params) {
  require_non_critical(params);
  const double m = params.m, w2 = params.omega2(), g = params.gamma;
  const auto id = AlgebraId::phase_space;
  const Poly x1 = gen(Tag::x1, id), x2 = gen(Tag::x2, id), p1 = gen(Tag::p1, id), p2 = gen(Tag::p2, id);
  Poly h = (1.0 / (2.0 * m)) * (p1 * p1) + (m * w2 / 2.0) * (x1 * x1) -
           (1.0 / (2.0 * m)) * (p2 * p2) - (m * w2 / 2.0) * (x2 * x2) -
           (g / (2.0 * m)) * (p1 * x2 + p2 * x1);
  return normal_order(h, phase_space_table());
}

CommutationTable<std::complex<double>> ladder_table(Regime regime) {
  return regime == Regime::overdamped ? extended_boson_table() : boson_table();
}

LadderPairs build_ladder_pairs(const ModelParameters& params) {
  require_non_critical(params);
  const Regime regime = params.regime();
  const cd w = params.omega();
  const double m = params.m;
  // Principal square roots; for ω = iτ these give e^{iπ/4}√(mτ/2) and
  // i·e^{−iπ/4}/√(2mτ).
  const cd cx = std::sqrt(m * w / 2.0);
  const cd cp = I * std::sqrt(1.0 / (2.0 * m * w));

  const auto ps = AlgebraId::phase_space;
  const AlgebraId ladder_id = regime == Regime::overdamped ? AlgebraId::extended_boson : AlgebraId::boson;
  const std::array<Tag, 2> xs{Tag::x1, Tag::x2}, ps_tags{Tag::p1, Tag::p2};
  const std::array<Tag, 2> low{Tag::a1, Tag::a2};
  const std::array<Tag, 2> high = regime == Regime::overdamped ? std::array<Tag, 2>{Tag::b1, Tag::b2}
                                                               : std::array<Tag, 2>{Tag::a1d, Tag::a2d};

  LadderPairs out{regime, {}, {}, Substitution<cd>(ladder_id, ps), ladder_table(regime)};
  for (int j = 0; j < 2; ++j) {
    out.lowering[j] = cx * gen(xs[j], ps) + cp * gen(ps_tags[j], ps);
    if (regime == Regime::overdamped) {
      out.raising[j] = cx * gen(xs[j], ps) - cp * gen(ps_tags[j], ps);
    } else {
      out.raising[j] = adjoint(out.lowering[j]);
    }
    out.to_phase_space.set(low[j], out.lowering[j]);
    out.to_phase_space.set(high[j], out.raising[j]);
  }
  out.to_phase_space.complete_adjoints();
  return out;
}

PseudoOps build_pseudo_ops(const ModelParameters& params, PseudoVariant variant) {
  require_non_critical(params);
  const Regime regime = params.regime();
  const AlgebraId lid = regime == Regime::overdamped ? AlgebraId::extended_boson : AlgebraId::boson;
  const std::array<Tag, 4> ladder_tags =
      regime == Regime::overdamped ? std::array<Tag, 4>{Tag::a1, Tag::a2, Tag::b1, Tag::b2}
                                   : std::array<Tag, 4>{Tag::a1, Tag::a2, Tag::a1d, Tag::a2d};
  const std::array<Tag, 4> pseudo_tags{Tag::A1, Tag::A2, Tag::B1, Tag::B2};

  // Rows: A1, A2, B1, B2 over columns (a1, a2, r1, r2), r = a† or b.
  const double s = 1.0 / std::sqrt(2.0);
  Eigen::Matrix4cd map;
  if (variant == PseudoVariant::standard) {
    map << s, 0, 0, -s,
           0, s, -s, 0,
           0, s, s, 0,
           s, 0, 0, s;
  } else {
    map << s, 0, 0, -s,
           0, -s, s, 0,
           0, s, s, 0,
           -s, 0, 0, -s;
  }
  const Eigen::Matrix4cd inverse = map.inverse();

  auto combination = [](const Eigen::Matrix4cd& mat, int row, const std::array<Tag, 4>& tags, AlgebraId id) {
    Poly p(id);
    for (int c = 0; c < 4; ++c) {
      if (std::abs(mat(row, c)) > 1e-15) p += gen(tags[c], id, mat(row, c));
    }
    return p;
  };

  PseudoOps out{regime, variant, {}, {}, Substitution<cd>(AlgebraId::pseudo, lid),
                Substitution<cd>(lid, AlgebraId::pseudo)};
  for (int r = 0; r < 4; ++r) {
    Poly image = combination(map, r, ladder_tags, lid);
    if (r < 2) {
      out.lowering[r] = image;
    } else {
      out.raising[r - 2] = image;
    }
    out.to_ladder.set(pseudo_tags[r], image);
    out.from_ladder.set(ladder_tags[r], combination(inverse, r, pseudo_tags, AlgebraId::pseudo));
  }
  out.to_ladder.complete_adjoints();

  const auto table = ladder_table(regime);
  double worst = 0.0;
  for (int j = 0; j < 2; ++j) {
    for (int k = 0; k < 2; ++k) {
      const Poly expected = Poly::identity(j == k ? 1.0 : 0.0, lid);
      worst = std::max(worst, residual(commutator(out.lowering[j], out.raising[k], table), expected, table));
      worst = std::max(worst, max_abs_coefficient(commutator(out.lowering[j], out.lowering[k], table)));
      worst = std::max(worst, max_abs_coefficient(commutator(out.raising[j], out.raising[k], table)));
    }
  }
  if (worst > equality_tolerance) {
    throw InternalConsistencyError("pseudo-boson map violates [A_j,B_k]=delta_jk: residual " +
                                   std::to_string(worst));
  }
  return out;
}

OperatorPolynomial build_ladder_hamiltonian(const ModelParameters& params) {
  require_non_critical(params);
  const Regime regime = params.regime();
  const AlgebraId id = regime == Regime::overdamped ? AlgebraId::extended_boson : AlgebraId::boson;
  const Tag r1 = regime == Regime::overdamped ? Tag::b1 : Tag::a1d;
  const Tag r2 = regime == Regime::overdamped ? Tag::b2 : Tag::a2d;
  const cd w = params.omega();
  const cd c = I * params.gamma / (2.0 * params.m);
  Poly h = w * (gen(r1, id) * gen(Tag::a1, id) - gen(r2, id) * gen(Tag::a2, id)) +
           c * (gen(Tag::a1, id) * gen(Tag::a2, id) - gen(r1, id) * gen(r2, id));
  return normal_order(h, ladder_table(regime));
}

HamiltonianForms pseudo_form(const ModelParameters& params) {
  require_non_critical(params);
  const auto ps_table = phase_space_table();
  const auto lad_table = ladder_table(params.regime());
  const auto pb_table = pseudo_table();
  const auto id = AlgebraId::pseudo;

  HamiltonianForms forms;
  forms.phase_space = build_phase_space_hamiltonian(params);
  forms.ladder = build_ladder_hamiltonian(params);

  const cd w = params.omega();
  const cd c = I * params.gamma / (2.0 * params.m);
  const Poly n1 = gen(Tag::B1, id) * gen(Tag::A1, id);
  const Poly n2 = gen(Tag::B2, id) * gen(Tag::A2, id);
  forms.h0 = normal_order(w * (n1 - n2), pb_table);
  forms.hi = normal_order(c * (n1 + n2 + Poly::identity(1.0, id)), pb_table);

  const auto ladders = build_ladder_pairs(params);
  const auto pseudo = build_pseudo_ops(params);

  const Poly from_bateman = substitute(bateman_hamiltonian(params), rotation_to_normal_modes(), ps_table);
  const Poly ladder_in_phase = substitute(forms.ladder, ladders.to_phase_space, ps_table);
  const Poly ladder_in_pseudo = substitute(forms.ladder, pseudo.from_ladder, pb_table);
  const Poly pseudo_in_ladder = substitute(forms.pseudo(), pseudo.to_ladder, lad_table);

  forms.max_residual = std::max({residual(from_bateman, forms.phase_space, ps_table),
                                 residual(ladder_in_phase, forms.phase_space, ps_table),
                                 residual(ladder_in_pseudo, forms.pseudo(), pb_table),
                                 residual(pseudo_in_ladder, forms.ladder, lad_table)});
  if (forms.max_residual > equality_tolerance) {
    throw InternalConsistencyError("Hamiltonian forms disagree: residual " +
                                   std::to_string(forms.max_residual));
  }
  return forms;
}

double eigenrelation_residual(int n1, int n2, std::complex<double> energy, const ModelParameters& params) {
  require_non_critical(params);
  const auto table = pseudo_table();
  const auto id = AlgebraId::pseudo;
  const auto pseudo = build_pseudo_ops(params);
  const Poly h = substitute(build_ladder_hamiltonian(params), pseudo.from_ladder, table);
  const Poly state = power(gen(Tag::B1, id), n1) * power(gen(Tag::B2, id), n2);
  const Poly applied = normal_order(h * state, table) - energy * state;
  const Poly reduced =
      reduce_mod_right_ideal(normal_order(applied, table), make_tag_set({Tag::A1, Tag::A2}), table);
  return max_abs_coefficient(reduced);
}

std::complex<double> formal_spectrum(int n1, int n2, const ModelParameters& params, int degree_cap) {
  require_non_critical(params);
  if (n1 < 0 || n2 < 0) throw ConfigError("levels must be non-negative");
  if (n1 > degree_cap || n2 > degree_cap) {
    throw ConfigError("level exceeds the verification degree cap " + std::to_string(degree_cap));
  }
  const cd energy = params.omega() * static_cast<double>(n1 - n2) +
                    I * params.damping_rate() * static_cast<double>(n1 + n2 + 1);
  const double r = eigenrelation_residual(n1, n2, energy, params);
  if (r > 1e-10) {
    throw EigenrelationFailure("eigenrelation residual " + std::to_string(r) + " at (" +
                               std::to_string(n1) + "," + std::to_string(n2) + ")");
  }
  return energy;
}

VacuumPdeSystem vacuum_pde_system(const ModelParameters& params, VacuumKind kind) {
  require_non_critical(params);
  if (params.regime() != Regime::underdamped) {
    throw UnsupportedRegime("the position representation is built for the underdamped regime only");
  }
  const auto ps_table = phase_space_table();
  const auto ladders = build_ladder_pairs(params);
  const auto pseudo = build_pseudo_ops(params);
  auto in_phase = [&](const Poly& ladder_poly) {
    return substitute(ladder_poly, ladders.to_phase_space, ps_table);
  };

  Poly mult, deriv;
  if (kind == VacuumKind::A) {
    mult = in_phase(pseudo.lowering[0] - pseudo.lowering[1]);
    deriv = in_phase(pseudo.lowering[0] + pseudo.lowering[1]);
  } else {
    const Poly b1d = adjoint(pseudo.raising[0]), b2d = adjoint(pseudo.raising[1]);
    mult = in_phase(b1d + b2d);
    deriv = in_phase(b1d - b2d);
  }

  auto extract = [](const Poly& p) {
    FirstOrderOperator op;
    for (const auto& [w, c] : p.terms()) {
      if (w.size() != 1) throw InternalConsistencyError("vacuum operator is not first order");
      switch (w[0]) {
        case Tag::x1: op.position[0] = c; break;
        case Tag::x2: op.position[1] = c; break;
        case Tag::p1: op.derivative[0] = -I * c; break;  // p = −i∂
        case Tag::p2: op.derivative[1] = -I * c; break;
        default: throw InternalConsistencyError("unexpected generator in vacuum operator");
      }
    }
    return op;
  };

  VacuumPdeSystem sys{kind, extract(mult), extract(deriv)};
  auto pure = [](const std::array<cd, 2>& part) { return std::abs(part[0]) + std::abs(part[1]) < 1e-12; };
  if (!pure(sys.multiplication.derivative) || !pure(sys.derivative.position)) {
    throw InternalConsistencyError("vacuum system does not split into multiplication and derivative parts");
  }
  return sys;
}

}  // namespace batemanlab
