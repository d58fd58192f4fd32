#include <doctest.h>

#include <cmath>

#include "batemanlab/classical_dynamics.hpp"
#include "oracles.hpp"

using namespace batemanlab;
using oracles::closed_form_x;
using oracles::closed_form_y;

namespace {

const ModelParameters damped{1.0, 0.4, 1.0};
const ClassicalState start{1.0, 0.5, 0.3, -0.2, 0.0};

}  // namespace

TEST_CASE("vector field") {
  SUBCASE("decoupled turning point") {
    const auto d = hamiltonian_vector_field({1, 1, 0, 0, 0}, {1.0, 0.0, 1.0});
    CHECK(d[0] == 0.0);
    CHECK(d[1] == 0.0);
    CHECK(d[2] == -1.0);
    CHECK(d[3] == -1.0);
  }
  SUBCASE("damped example") {
    const auto d = hamiltonian_vector_field({1, 0, 0, 0, 0}, damped);
    CHECK(d[0] == doctest::Approx(-0.2));
    CHECK(d[1] == doctest::Approx(0.0));
    CHECK(d[2] == doctest::Approx(0.0));
    CHECK(d[3] == doctest::Approx(-0.96));
  }
  SUBCASE("flow is tangent to level sets of H") {
    for (const auto& s : {start, ClassicalState{-0.3, 2.0, 1.1, 0.7, 0.0}}) {
      const auto grad = classical_hamiltonian_gradient(s, damped);
      const auto f = hamiltonian_vector_field(s, damped);
      CHECK(std::abs(grad.dot(f)) < 1e-14);
    }
  }
  SUBCASE("gradient matches finite differences of H") {
    const double h = 1e-6;
    const auto grad = classical_hamiltonian_gradient(start, damped);
    for (int i = 0; i < 4; ++i) {
      Eigen::Vector4d e = Eigen::Vector4d::Zero();
      e[i] = h;
      const double fd = (classical_hamiltonian(ClassicalState::from_phase(start.phase() + e, 0), damped) -
                         classical_hamiltonian(ClassicalState::from_phase(start.phase() - e, 0), damped)) /
                        (2 * h);
      CHECK(std::abs(fd - grad[i]) < 1e-8);
    }
  }
}

TEST_CASE("integration") {
  SUBCASE("energy conserved without friction") {
    const ModelParameters p{1.0, 0.0, 1.0};
    const auto tr = integrate(start, 1e-3, 10.0, p);
    CHECK(tr.states.size() == 10001);
    CHECK(energy_drift(tr, p) < 1e-9);
  }
  SUBCASE("damped trajectory matches the closed form") {
    const auto tr = integrate(start, 1e-3, 10.0, damped);
    double ex = 0, ey = 0;
    for (const auto& s : tr.states) {
      ex = std::max(ex, std::abs(s.x - closed_form_x(s.t, start, damped)));
      ey = std::max(ey, std::abs(s.y - closed_form_y(s.t, start, damped)));
    }
    CHECK(ex < 1e-6);
    CHECK(ey < 1e-6);
    CHECK(energy_drift(tr, damped) < 1e-8);
  }
  SUBCASE("envelopes") {
    const auto tr = integrate(start, 1e-3, 10.0, damped);
    CHECK(envelope_exponent(tr, damped, Coordinate::y) == doctest::Approx(0.2).epsilon(0.02));
    CHECK(envelope_exponent(tr, damped, Coordinate::x) == doctest::Approx(-0.2).epsilon(0.02));
    const auto back = integrate(start, 1e-3, 10.0, damped, TimeDirection::backward);
    CHECK(back.states.back().t == doctest::Approx(-10.0));
    const double reversed_x = envelope_exponent(back, damped, Coordinate::x);
    const double forward_y = envelope_exponent(tr, damped, Coordinate::y);
    CHECK(std::abs(reversed_x - forward_y) < 0.02 * std::abs(forward_y));
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(integrate(start, 0.0, 1.0, damped), ConfigError);
    CHECK_THROWS_AS(integrate(start, 0.1, 0.05, damped), ConfigError);
    const ModelParameters stiff{1.0, 0.0, 1e8};
    try {
      integrate(start, 1.0, 1000.0, stiff);
      FAIL("expected blow-up");
    } catch (const BlowUpError& e) {
      CHECK(e.time() > 0.0);
      CHECK(e.time() <= 1000.0);
    }
    CHECK_THROWS_AS(envelope_exponent(integrate(start, 0.1, 1.0, {1.0, 4.0, 1.0}), {1.0, 4.0, 1.0}, Coordinate::x),
                    UnsupportedRegime);
  }
}

TEST_CASE("equation-of-motion residuals") {
  const auto tr = integrate(start, 1e-3, 10.0, damped);
  const auto r = eom_residual(tr, damped);
  CHECK(r.r_x < 1e-5);
  CHECK(r.r_y < 1e-4);

  const auto zero = integrate({}, 1e-2, 1.0, damped);
  const auto rz = eom_residual(zero, damped);
  CHECK(rz.r_x == 0.0);
  CHECK(rz.r_y == 0.0);

  CHECK_THROWS_AS(eom_residual(integrate(start, 0.1, 0.3, damped), damped), TooFewPoints);
}
