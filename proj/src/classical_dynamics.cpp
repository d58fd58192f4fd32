#include "batemanlab/classical_dynamics.hpp"

#include <cmath>
#include <string>

namespace batemanlab {

Eigen::Vector4d hamiltonian_vector_field(const ClassicalState& s, const ModelParameters& params) {
  const double m = params.m, g = params.gamma;
  const double kappa = params.k - g * g / (4.0 * m);
  return {s.py / m - g * s.x / (2.0 * m),
          s.px / m + g * s.y / (2.0 * m),
          g * s.px / (2.0 * m) - kappa * s.y,
          -g * s.py / (2.0 * m) - kappa * s.x};
}

double classical_hamiltonian(const ClassicalState& s, const ModelParameters& params) {
  const double m = params.m, g = params.gamma;
  return s.px * s.py / m + g / (2.0 * m) * (s.y * s.py - s.x * s.px) +
         (params.k - g * g / (4.0 * m)) * s.x * s.y;
}

Eigen::Vector4d classical_hamiltonian_gradient(const ClassicalState& s, const ModelParameters& params) {
  const double m = params.m, g = params.gamma;
  const double kappa = params.k - g * g / (4.0 * m);
  // (∂H/∂x, ∂H/∂y, ∂H/∂px, ∂H/∂py)
  return {-g * s.px / (2.0 * m) + kappa * s.y,
          g * s.py / (2.0 * m) + kappa * s.x,
          s.py / m - g * s.x / (2.0 * m),
          s.px / m + g * s.y / (2.0 * m)};
}

Trajectory integrate(const ClassicalState& s0, double dt, double horizon, const ModelParameters& params,
                     TimeDirection direction) {
  if (!(dt > 0)) throw ConfigError("time step must be positive");
  if (!(horizon >= dt)) throw ConfigError("horizon must be at least one step");

  const double h = direction == TimeDirection::forward ? dt : -dt;
  const int steps = static_cast<int>(std::llround(horizon / dt));
  Trajectory tr{s0.t, h, steps, {}};
  tr.states.reserve(static_cast<std::size_t>(steps) + 1);
  tr.states.push_back(s0);

  auto field = [&](const Eigen::Vector4d& v, double t) {
    return hamiltonian_vector_field(ClassicalState::from_phase(v, t), params);
  };

  Eigen::Vector4d v = s0.phase();
  for (int i = 1; i <= steps; ++i) {
    const double t = s0.t + (i - 1) * h;
    const Eigen::Vector4d k1 = field(v, t);
    const Eigen::Vector4d k2 = field(v + 0.5 * h * k1, t + 0.5 * h);
    const Eigen::Vector4d k3 = field(v + 0.5 * h * k2, t + 0.5 * h);
    const Eigen::Vector4d k4 = field(v + h * k3, t + h);
    v += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    const double tn = s0.t + i * h;
    if (!v.allFinite()) throw BlowUpError("non-finite state at t = " + std::to_string(tn), tn);
    tr.states.push_back(ClassicalState::from_phase(v, tn));
  }
  return tr;
}

EomResidual eom_residual(const Trajectory& tr, const ModelParameters& params) {
  if (tr.states.size() < 5) throw TooFewPoints("EOM residual needs at least 4 steps");
  const double h = tr.dt;
  EomResidual r;
  for (std::size_t i = 1; i + 1 < tr.states.size(); ++i) {
    const auto& a = tr.states[i - 1];
    const auto& b = tr.states[i];
    const auto& c = tr.states[i + 1];
    const double xdd = (c.x - 2.0 * b.x + a.x) / (h * h), xd = (c.x - a.x) / (2.0 * h);
    const double ydd = (c.y - 2.0 * b.y + a.y) / (h * h), yd = (c.y - a.y) / (2.0 * h);
    r.r_x = std::max(r.r_x, std::abs(params.m * xdd + params.gamma * xd + params.k * b.x));
    r.r_y = std::max(r.r_y, std::abs(params.m * ydd - params.gamma * yd + params.k * b.y));
  }
  return r;
}

double envelope_exponent(const Trajectory& tr, const ModelParameters& params, Coordinate which) {
  if (params.regime() != Regime::underdamped) {
    throw UnsupportedRegime("envelope fits need an oscillating (underdamped) solution");
  }
  if (tr.states.size() < 3) throw FitError("envelope fit needs at least 3 samples");
  const double w = params.omega().real();
  const double rate = params.damping_rate();
  const auto n = static_cast<Eigen::Index>(tr.states.size());
  Eigen::VectorXd elapsed(n), log_env(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& s = tr.states[static_cast<std::size_t>(i)];
    const Eigen::Vector4d d = hamiltonian_vector_field(s, params);
    const double q = which == Coordinate::x ? s.x : s.y;
    const double qd = which == Coordinate::x ? d[0] + rate * s.x : d[1] - rate * s.y;
    elapsed[i] = static_cast<double>(i) * std::abs(tr.dt);
    log_env[i] = 0.5 * std::log(q * q + (qd / w) * (qd / w));
  }
  if (!log_env.allFinite()) throw FitError("envelope vanishes; nothing to fit");
  const double tm = elapsed.mean(), lm = log_env.mean();
  const double sxy = ((elapsed.array() - tm) * (log_env.array() - lm)).sum();
  const double sxx = (elapsed.array() - tm).square().sum();
  return sxy / sxx;
}

double energy_drift(const Trajectory& tr, const ModelParameters& params) {
  const double h0 = classical_hamiltonian(tr.states.front(), params);
  double worst = 0.0;
  for (const auto& s : tr.states) {
    worst = std::max(worst, std::abs(classical_hamiltonian(s, params) - h0));
  }
  return h0 != 0.0 ? worst / std::abs(h0) : worst;
}

}  // namespace batemanlab
