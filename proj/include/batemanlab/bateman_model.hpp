#pragma once

#include <array>
#include <complex>

#include "batemanlab/opalg.hpp"

namespace batemanlab {

enum class Regime { underdamped, critical, overdamped };

std::string_view regime_name(Regime r);

/// Physical constants of the oscillator pair; ħ = 1.
struct ModelParameters {
  double m = 1.0;
  double gamma = 0.0;
  double k = 1.0;

  /// k/m − γ²/(4m²)
  double omega2() const { return k / m - gamma * gamma / (4.0 * m * m); }
  Regime regime() const;
  /// √ω² for ω² > 0, i·τ with τ = √(−ω²) for ω² < 0.
  std::complex<double> omega() const;
  double tau() const;
  /// γ/(2m), the rate appearing in the damped and amplified envelopes.
  double damping_rate() const { return gamma / (2.0 * m); }

  /// Throws ConfigError on non-physical constants, UnsupportedRegime on ω² = 0.
  void validate() const;
};

/// The quantum Hamiltonian in the Bateman coordinates x, y, px, py.
OperatorPolynomial bateman_hamiltonian(const ModelParameters& params);

/// x = (x1+x2)/√2, y = (x1−x2)/√2 and the matching canonical momenta.
Substitution<std::complex<double>> rotation_to_normal_modes();

/// (1/2m)p1² + (mω²/2)x1² − (1/2m)p2² − (mω²/2)x2² − (γ/2m)(p1x2 + p2x1).
OperatorPolynomial build_phase_space_hamiltonian(const ModelParameters& params);

/// Lowering operators a_k together with their partners (a_k† underdamped,
/// b_k overdamped) expressed in phase space, plus the table they satisfy.
struct LadderPairs {
  Regime regime;
  std::array<OperatorPolynomial, 2> lowering;
  std::array<OperatorPolynomial, 2> raising;
  Substitution<std::complex<double>> to_phase_space;
  CommutationTable<std::complex<double>> table;
};

LadderPairs build_ladder_pairs(const ModelParameters& params);

enum class PseudoVariant {
  standard,   // A1=(a1−a2†)/√2, A2=(a2−a1†)/√2, B1=(a1†+a2)/√2, B2=(a1+a2†)/√2
  alternate,  // A1=(a1−a2†)/√2=A2†, B1=(a1†+a2)/√2=−B2†
};

/// A_j, B_j expressed in the ladder algebra (boson underdamped, extended
/// overdamped), with the substitutions in both directions.
struct PseudoOps {
  Regime regime;
  PseudoVariant variant;
  std::array<OperatorPolynomial, 2> lowering;  // A1, A2
  std::array<OperatorPolynomial, 2> raising;   // B1, B2
  Substitution<std::complex<double>> to_ladder;    // pseudo → ladder
  Substitution<std::complex<double>> from_ladder;  // ladder → pseudo
};

PseudoOps build_pseudo_ops(const ModelParameters& params,
                           PseudoVariant variant = PseudoVariant::standard);

/// Table for the ladder algebra of a regime.
CommutationTable<std::complex<double>> ladder_table(Regime regime);

/// Ladder form of the Hamiltonian: ω(a1†a1 − a2†a2) + (iγ/2m)(a1a2 − a1†a2†),
/// with a_k† replaced by b_k in the overdamped regime.
OperatorPolynomial build_ladder_hamiltonian(const ModelParameters& params);

struct HamiltonianForms {
  OperatorPolynomial phase_space;
  OperatorPolynomial ladder;
  OperatorPolynomial h0;  // ω(B1A1 − B2A2)
  OperatorPolynomial hi;  // (iγ/2m)(B1A1 + B2A2 + 𝟙)
  double max_residual = 0.0;

  OperatorPolynomial pseudo() const { return h0 + hi; }
};

/// Builds all three forms and checks them against each other; throws
/// InternalConsistencyError if any pair disagrees beyond 1e-12.
HamiltonianForms pseudo_form(const ModelParameters& params);

inline constexpr int default_degree_cap = 6;

/// ω(n1−n2) + i(γ/2m)(n1+n2+1), verified on the formal vacuum of A1, A2.
std::complex<double> formal_spectrum(int n1, int n2, const ModelParameters& params,
                                     int degree_cap = default_degree_cap);

/// Residual of the eigenrelation H·B1^n1 B2^n2 ≡ E·B1^n1 B2^n2 modulo the
/// right ideal generated by A1, A2.
double eigenrelation_residual(int n1, int n2, std::complex<double> energy,
                              const ModelParameters& params);

enum class VacuumKind { A, B };

std::string_view vacuum_kind_name(VacuumKind k);

/// Position-space first-order operator c1·x1 + c2·x2 + d1·∂1 + d2·∂2.
struct FirstOrderOperator {
  std::array<std::complex<double>, 2> position{};
  std::array<std::complex<double>, 2> derivative{};
};

/// The two equations a vacuum must satisfy: a multiplication operator and a
/// directional derivative. A-kind comes from A1∓A2, B-kind from B1†±B2†.
struct VacuumPdeSystem {
  VacuumKind kind;
  FirstOrderOperator multiplication;
  FirstOrderOperator derivative;
};

VacuumPdeSystem vacuum_pde_system(const ModelParameters& params, VacuumKind kind);

}  // namespace batemanlab
