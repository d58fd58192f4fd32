#pragma once

#include <Eigen/Core>
#include <vector>

#include "batemanlab/bateman_model.hpp"

namespace batemanlab {

struct ClassicalState {
  double x = 0, y = 0, px = 0, py = 0;
  double t = 0;

  Eigen::Vector4d phase() const { return {x, y, px, py}; }
  static ClassicalState from_phase(const Eigen::Vector4d& v, double t) { return {v[0], v[1], v[2], v[3], t}; }
};

/// (ẋ, ẏ, ṗx, ṗy) from Hamilton's equations of the classical Bateman Hamiltonian.
Eigen::Vector4d hamiltonian_vector_field(const ClassicalState& s, const ModelParameters& params);

/// (1/m)px·py + (γ/2m)(y·py − x·px) + (k − γ²/4m)·x·y
double classical_hamiltonian(const ClassicalState& s, const ModelParameters& params);

Eigen::Vector4d classical_hamiltonian_gradient(const ClassicalState& s, const ModelParameters& params);

enum class TimeDirection { forward, backward };

struct Trajectory {
  double t0 = 0;
  double dt = 0;  // signed: negative for a backward run
  int steps = 0;
  std::vector<ClassicalState> states;  // steps + 1 entries
};

/// Fixed-step fourth-order Runge–Kutta. Throws BlowUpError on non-finite state.
Trajectory integrate(const ClassicalState& s0, double dt, double horizon, const ModelParameters& params,
                     TimeDirection direction = TimeDirection::forward);

struct EomResidual {
  double r_x = 0;  // max |m ẍ + γ ẋ + k x|
  double r_y = 0;  // max |m ÿ − γ ẏ + k y|
};

/// Central finite differences over interior points.
EomResidual eom_residual(const Trajectory& tr, const ModelParameters& params);

enum class Coordinate { x, y };

/// Least-squares slope of log E(t), where E = √(q² + ((q̇ ∓ γq/2m)/ω)²) is
/// the exact envelope of the damped (x) or amplified (y) oscillation.
/// Requires the underdamped regime.
double envelope_exponent(const Trajectory& tr, const ModelParameters& params, Coordinate which);

/// Largest |H(t) − H(t0)| / |H(t0)| along the trajectory.
double energy_drift(const Trajectory& tr, const ModelParameters& params);

}  // namespace batemanlab
