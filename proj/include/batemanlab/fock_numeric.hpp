#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <complex>
#include <string>
#include <vector>

#include "batemanlab/bateman_model.hpp"

namespace batemanlab {

using SparseMatrixXcd = Eigen::SparseMatrix<std::complex<double>>;

/// Hard cutoff at `levels` number states per mode; `margin` top levels are
/// excluded from interior assertions. Basis index is n1·levels + n2.
struct FockTruncation {
  int levels = 8;
  int margin = 2;

  void validate() const;
  Eigen::Index dimension() const { return static_cast<Eigen::Index>(levels) * levels; }
  Eigen::Index index(int n1, int n2) const { return static_cast<Eigen::Index>(n1) * levels + n2; }
};

struct MaterializedOperator {
  SparseMatrixXcd matrix;
  OperatorPolynomial source;
  FockTruncation truncation;

  Eigen::MatrixXcd dense() const { return Eigen::MatrixXcd(matrix); }
};

/// Words map to ordered products of truncated ladder matrices. Entries are
/// assembled so that materialize(adjoint(p)) is bit-for-bit the conjugate
/// transpose of materialize(p). Only boson-algebra polynomials are accepted.
MaterializedOperator materialize(const OperatorPolynomial& p, const FockTruncation& tr);

/// Dispatching form: phase-space polynomials go through
/// x = (a + a†)/√(2mΩ), p = i√(mΩ/2)(a† − a) with Ω = ω underdamped and Ω = 1
/// overdamped; pseudo-boson polynomials through the standard A, B map.
MaterializedOperator materialize(const OperatorPolynomial& p, const FockTruncation& tr,
                                 const ModelParameters& params);

/// Phase space in terms of bosons of reference frequency Ω.
Substitution<std::complex<double>> phase_space_from_bosons(double m, double reference_frequency);

/// Restriction to the states with n1, n2 < levels − margin.
Eigen::MatrixXcd interior_block(const Eigen::MatrixXcd& full, const FockTruncation& tr);

struct SpectrumStudy {
  Eigen::VectorXd eigenvalues;  // ascending, from the Hermitian solver
  double max_imag = -1;         // from the general solver; −1 when skipped
  double hermiticity_defect = 0;
  double window = 1.0;
  int window_count = 0;
  double reference_frequency = 0;  // Ω used for phase-space materialization
  std::string form;                // "ladder" or "phase_space"
};

/// Full spectrum of the materialized Hamiltonian. `general_solver_limit` caps
/// the dimension for which the non-Hermitian solver is also run.
SpectrumStudy hermitian_spectrum_study(const ModelParameters& params, const FockTruncation& tr,
                                       double window = 1.0, Eigen::Index general_solver_limit = 576);

enum class SolverPath { automatic, dense, iterative };

struct VacuumSearchReport {
  VacuumKind kind = VacuumKind::A;
  int levels = 0;
  double sigma_min = 0;
  Eigen::VectorXcd minimizer;
  double u2 = 0;  // ⟨u²⟩, u = (x1 − x2)/√2, in units m·ω = 1
  double v2 = 0;  // ⟨v²⟩, v = (x1 + x2)/√2
  double participation_ratio = 0;
  std::string solver;
  int iterations = 0;
  double cutoff_kernel_residual = 0;  // ‖S̃ d‖ for the square cutoff stack S̃ and the uniform diagonal d
  bool gamma_independent = true;  // the A, B operators do not involve γ
};

/// [A1; A2] or [B1†; B2†] acting on the span of the first N levels per mode
/// and evaluated exactly, i.e. with rows in the (N+1)-level space:
/// a 2(N+1)²×N² matrix. With `square_cutoff` the rows are cut back to N levels
/// instead (2N²×N²); that matrix annihilates Σ_n |n,n⟩ at every N.
SparseMatrixXcd stacked_annihilators(const FockTruncation& tr, VacuumKind kind, bool square_cutoff = false);

VacuumSearchReport vacuum_residual_min(const ModelParameters& params, const FockTruncation& tr,
                                       SolverPath path = SolverPath::automatic);
VacuumSearchReport bvacuum_residual_min(const ModelParameters& params, const FockTruncation& tr,
                                        SolverPath path = SolverPath::automatic);

/// Diagonal matrix (−1)^{n2}: conjugation maps the A-system onto the B-system.
SparseMatrixXcd mode2_parity(const FockTruncation& tr);

/// |⟨minimizer, g⟩| with g the normalized Fock projection of the Gaussian
/// state exp(−u²/(4⟨u²⟩) − v²/(4⟨v²⟩)) whose widths match the minimizer.
double regularized_diagonal_overlap(const VacuumSearchReport& report, const FockTruncation& tr);

struct PowerLawFit {
  double exponent = 0;
  double prefactor = 0;
};

/// Least squares on log y = log c + p log x.
PowerLawFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace batemanlab
