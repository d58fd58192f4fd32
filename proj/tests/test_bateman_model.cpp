#include <doctest.h>

#include <cmath>

#include "batemanlab/bateman_model.hpp"

using namespace batemanlab;
using cd = std::complex<double>;
using Poly = OperatorPolynomial;

namespace {

const ModelParameters damped{1.0, 0.4, 1.0};
const ModelParameters overdamped{1.0, 4.0, 1.0};

}  // namespace

TEST_CASE("model parameters and regimes") {
  CHECK(damped.regime() == Regime::underdamped);
  CHECK(damped.omega2() == doctest::Approx(0.96));
  const ModelParameters p{2.0, 4.0, 1.0};
  CHECK(p.omega2() == doctest::Approx(-0.5));
  CHECK(p.regime() == Regime::overdamped);
  CHECK(overdamped.tau() == doctest::Approx(std::sqrt(3.0)));
  CHECK(overdamped.omega().imag() == doctest::Approx(std::sqrt(3.0)));

  const ModelParameters critical{1.0, 2.0, 1.0};
  CHECK(critical.regime() == Regime::critical);
  CHECK_THROWS_AS(build_phase_space_hamiltonian(critical), UnsupportedRegime);
  CHECK_THROWS_AS(build_ladder_pairs(critical), UnsupportedRegime);
  CHECK_THROWS_AS(build_pseudo_ops(critical), UnsupportedRegime);
  CHECK_THROWS_AS(pseudo_form(critical), UnsupportedRegime);
  CHECK_THROWS_AS(ModelParameters({-1.0, 0.0, 1.0}).validate(), ConfigError);
}

TEST_CASE("phase-space Hamiltonian") {
  SUBCASE("gamma = 0 decouples") {
    const Poly h = build_phase_space_hamiltonian({1.0, 0.0, 1.0});
    CHECK(h.size() == 4);
    CHECK(h.coefficient({Tag::p1, Tag::p1}) == cd(0.5));
    CHECK(h.coefficient({Tag::x1, Tag::x1}) == cd(0.5));
    CHECK(h.coefficient({Tag::p2, Tag::p2}) == cd(-0.5));
    CHECK(h.coefficient({Tag::x2, Tag::x2}) == cd(-0.5));
  }
  SUBCASE("cross term") {
    const Poly h = build_phase_space_hamiltonian(damped);
    CHECK(std::abs(h.coefficient({Tag::x2, Tag::p1}) + 0.2) < 1e-15);
    CHECK(std::abs(h.coefficient({Tag::x1, Tag::p2}) + 0.2) < 1e-15);
  }
  SUBCASE("Bateman coordinates rotate onto the normal-mode form") {
    for (const auto& params : {damped, overdamped, ModelParameters{2.0, 0.3, 5.0}}) {
      const Poly rotated = substitute(bateman_hamiltonian(params), rotation_to_normal_modes(), phase_space_table());
      CHECK(residual(rotated, build_phase_space_hamiltonian(params), phase_space_table()) < 1e-12);
    }
  }
}

TEST_CASE("ladder pairs") {
  SUBCASE("a1 = (x1 + i p1)/sqrt2 at m omega = 1") {
    const auto l = build_ladder_pairs({1.0, 0.0, 1.0});
    const double r = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(l.lowering[0].coefficient({Tag::x1}) - r) < 1e-15);
    CHECK(std::abs(l.lowering[0].coefficient({Tag::p1}) - cd(0, r)) < 1e-15);
    CHECK(l.table.id() == AlgebraId::boson);
  }
  SUBCASE("underdamped CCR under the phase-space table") {
    const auto l = build_ladder_pairs(damped);
    const auto t = phase_space_table();
    for (int j = 0; j < 2; ++j) {
      for (int k = 0; k < 2; ++k) {
        const Poly c = commutator(l.lowering[j], l.raising[k], t);
        CHECK(residual(c, Poly::identity(j == k ? 1.0 : 0.0, AlgebraId::phase_space), t) < 1e-12);
      }
    }
    CHECK(l.to_phase_space.is_adjoint_consistent(t));
  }
  SUBCASE("overdamped extended CCR [a_j, b_k] = delta") {
    const auto l = build_ladder_pairs(overdamped);
    const auto t = phase_space_table();
    CHECK(l.regime == Regime::overdamped);
    CHECK(l.table.id() == AlgebraId::extended_boson);
    for (int j = 0; j < 2; ++j) {
      for (int k = 0; k < 2; ++k) {
        const Poly c = commutator(l.lowering[j], l.raising[k], t);
        CHECK(residual(c, Poly::identity(j == k ? 1.0 : 0.0, AlgebraId::phase_space), t) < 1e-12);
      }
    }
    // b_k is not the adjoint of a_k.
    CHECK(residual(l.raising[0], adjoint(l.lowering[0]), t) > 0.1);
  }
  SUBCASE("overdamped [a1, a1^dag] under the formal adjoint") {
    // With a = e^{iπ/4}(c1 x + c2 p), a† = e^{−iπ/4}(c1 x + c2 p) commutes with a.
    const auto l = build_ladder_pairs(overdamped);
    const auto t = phase_space_table();
    const Poly c = commutator(l.lowering[0], adjoint(l.lowering[0]), t);
    CHECK(max_abs_coefficient(c) < 1e-12);
    CHECK(residual(c, Poly::identity(cd(0, 1), AlgebraId::phase_space), t) == doctest::Approx(1.0));
  }
}

TEST_CASE("pseudo-bosonic operators") {
  for (const auto& params : {damped, overdamped}) {
    const auto ops = build_pseudo_ops(params);
    const auto t = ladder_table(params.regime());
    const AlgebraId lid = t.id();
    for (int j = 0; j < 2; ++j) {
      for (int k = 0; k < 2; ++k) {
        CHECK(residual(commutator(ops.lowering[j], ops.raising[k], t), Poly::identity(j == k ? 1.0 : 0.0, lid), t) <
              1e-12);
        CHECK(max_abs_coefficient(commutator(ops.lowering[j], ops.lowering[k], t)) < 1e-12);
        CHECK(max_abs_coefficient(commutator(ops.raising[j], ops.raising[k], t)) < 1e-12);
      }
    }
  }

  SUBCASE("adjoint relations hold underdamped") {
    const auto ops = build_pseudo_ops(damped);
    const auto t = boson_table();
    CHECK(max_abs_coefficient(normal_order(adjoint(ops.lowering[0]) + ops.lowering[1], t)) < 1e-12);
    CHECK(max_abs_coefficient(normal_order(adjoint(ops.raising[0]) - ops.raising[1], t)) < 1e-12);
    // B_j ≠ A_j†
    CHECK(residual(ops.raising[0], adjoint(ops.lowering[0]), t) > 0.1);
  }

  SUBCASE("adjoint relations fail overdamped") {
    // The adjoint of an extended-boson polynomial leaves the algebra (b_k† tags),
    // so compare in phase space.
    const auto ops = build_pseudo_ops(overdamped);
    const auto l = build_ladder_pairs(overdamped);
    const auto t = phase_space_table();
    auto ph = [&](const Poly& p) { return substitute(p, l.to_phase_space, t); };
    CHECK(max_abs_coefficient(normal_order(adjoint(ph(ops.lowering[0])) + ph(ops.lowering[1]), t)) > 0.1);
    CHECK(max_abs_coefficient(normal_order(adjoint(ph(ops.raising[0])) - ph(ops.raising[1]), t)) > 0.1);
  }

  SUBCASE("the map is invertible") {
    const auto ops = build_pseudo_ops(damped);
    const Poly a1 = ops.from_ladder.image(Tag::a1);
    const double r = 1.0 / std::sqrt(2.0);
    CHECK(a1.size() == 2);
    CHECK(std::abs(a1.coefficient({Tag::A1}) - r) < 1e-15);
    CHECK(std::abs(a1.coefficient({Tag::B2}) - r) < 1e-15);
    // Round trip back to the ladder generators.
    const auto t = boson_table();
    for (Tag tag : {Tag::a1, Tag::a2, Tag::a1d, Tag::a2d}) {
      const Poly back = substitute(ops.from_ladder.image(tag), ops.to_ladder, t);
      CHECK(residual(back, Poly::generator(tag, AlgebraId::boson), t) < 1e-12);
    }
  }

  SUBCASE("alternate transformation") {
    const auto ops = build_pseudo_ops(damped, PseudoVariant::alternate);
    const auto t = boson_table();
    CHECK(residual(ops.lowering[0], adjoint(ops.lowering[1]), t) < 1e-12);        // A1 = A2†
    CHECK(residual(ops.raising[0], -1.0 * adjoint(ops.raising[1]), t) < 1e-12);  // B1 = −B2†
    const Poly h = substitute(build_ladder_hamiltonian(damped), ops.from_ladder, pseudo_table());
    CHECK(residual(h, pseudo_form(damped).pseudo(), pseudo_table()) < 1e-12);
  }
}

TEST_CASE("pseudo form") {
  SUBCASE("coefficients at m=1, gamma=0.4, k=1") {
    const auto f = pseudo_form(damped);
    const Poly h = f.pseudo();
    const double w = std::sqrt(1.0 - 0.04);
    CHECK(std::abs(h.coefficient({Tag::B1, Tag::A1}) - cd(w, 0.2)) < 1e-12);
    CHECK(std::abs(h.coefficient({Tag::B2, Tag::A2}) - cd(-w, 0.2)) < 1e-12);
    CHECK(std::abs(h.coefficient({}) - cd(0, 0.2)) < 1e-12);
    CHECK(h.size() == 3);
    CHECK(f.max_residual < 1e-12);
  }
  SUBCASE("gamma = 0") {
    const auto f = pseudo_form({1.0, 0.0, 1.0});
    CHECK(f.hi.empty());
    CHECK(f.h0.coefficient({Tag::B1, Tag::A1}) == cd(1.0));
    CHECK(f.h0.coefficient({Tag::B2, Tag::A2}) == cd(-1.0));
  }
  SUBCASE("overdamped keeps the same structure") {
    const auto f = pseudo_form(overdamped);
    const double tau = std::sqrt(3.0);
    CHECK(std::abs(f.pseudo().coefficient({Tag::B1, Tag::A1}) - cd(0, tau + 2.0)) < 1e-12);
    CHECK(std::abs(f.pseudo().coefficient({}) - cd(0, 2.0)) < 1e-12);
  }
  SUBCASE("formal hermiticity of the ladder form") {
    const auto t = boson_table();
    for (const auto& params : {damped, ModelParameters{0.7, 0.9, 3.0}}) {
      const Poly h = build_ladder_hamiltonian(params);
      CHECK(residual(adjoint(h), h, t) < 1e-12);
    }
  }
}

TEST_CASE("formal spectrum") {
  CHECK(std::abs(formal_spectrum(0, 0, damped) - cd(0, 0.2)) < 1e-14);
  CHECK(std::abs(formal_spectrum(1, 0, {1.0, 0.0, 1.0}) - cd(1.0, 0.0)) < 1e-14);
  CHECK(std::abs(formal_spectrum(1, 1, damped) - cd(0, 0.6)) < 1e-14);
  CHECK_THROWS_AS(formal_spectrum(7, 0, damped), ConfigError);
  CHECK_THROWS_AS(formal_spectrum(-1, 0, damped), ConfigError);

  // A wrong energy leaves a residual equal to the energy error.
  const cd e = formal_spectrum(2, 1, damped);
  CHECK(eigenrelation_residual(2, 1, e + 0.5, damped) == doctest::Approx(0.5));

  for (int n1 = 0; n1 <= 4; ++n1) {
    for (int n2 = 0; n2 <= 4; ++n2) {
      CHECK(eigenrelation_residual(n1, n2, formal_spectrum(n1, n2, overdamped), overdamped) < 1e-10);
    }
  }
}

TEST_CASE("vacuum PDE systems") {
  const ModelParameters params{2.0, 0.4, 3.0};
  const double smw = std::sqrt(params.m * params.omega().real());
  SUBCASE("A-kind") {
    const auto s = vacuum_pde_system(params, VacuumKind::A);
    CHECK(std::abs(s.multiplication.position[0] - smw) < 1e-12);
    CHECK(std::abs(s.multiplication.position[1] + smw) < 1e-12);
    CHECK(std::abs(s.derivative.derivative[0] - 1.0 / smw) < 1e-12);
    CHECK(std::abs(s.derivative.derivative[1] - 1.0 / smw) < 1e-12);
  }
  SUBCASE("B-kind") {
    const auto s = vacuum_pde_system(params, VacuumKind::B);
    CHECK(std::abs(s.multiplication.position[0] - smw) < 1e-12);
    CHECK(std::abs(s.multiplication.position[1] - smw) < 1e-12);
    CHECK(std::abs(s.derivative.derivative[0] - 1.0 / smw) < 1e-12);
    CHECK(std::abs(s.derivative.derivative[1] + 1.0 / smw) < 1e-12);
  }
  CHECK_THROWS_AS(vacuum_pde_system(overdamped, VacuumKind::A), UnsupportedRegime);
}
