#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "batemanlab/bateman_model.hpp"

namespace batemanlab {

/// Square box [−L, L]² sampled with n points per axis, n odd so that both
/// diagonals pass through grid nodes.
struct GridSpec {
  double L = 4.0;
  int n = 257;

  void validate() const;
  double h() const { return 2.0 * L / (n - 1); }
  double coordinate(int i) const { return -L + i * h(); }
  Eigen::VectorXd axis() const { return Eigen::VectorXd::LinSpaced(n, -L, L); }
  bool operator==(const GridSpec& o) const { return L == o.L && n == o.n; }
};

/// Samples values(i, j) at (x1_i, x2_j).
template <class Scalar>
struct BasicGridFunction {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  GridSpec grid;
  Matrix values;

  BasicGridFunction() = default;
  BasicGridFunction(const GridSpec& g, Matrix v) : grid(g), values(std::move(v)) {
    if (values.rows() != g.n || values.cols() != g.n) throw GridMismatch("sample array does not match the grid");
    if (!values.allFinite()) throw NumericError("grid function has non-finite samples");
  }

  /// (x1, x2) ↦ (x1, −x2).
  BasicGridFunction reflected() const { return {grid, values.rowwise().reverse()}; }
};

using GridFunction = BasicGridFunction<std::complex<double>>;

/// Tensor-product trapezoid weights h²·τ_i·τ_j with τ = 1/2 on the boundary.
Eigen::MatrixXd trapezoid_weights(const GridSpec& g);

struct WeightFunction {
  std::string name;
  GridSpec grid;
  Eigen::MatrixXd samples;

  void validate() const;
};

WeightFunction uniform_weight(const GridSpec& g);
WeightFunction gaussian_weight(const GridSpec& g);         // exp(−(x1² + x2²)/4)
WeightFunction polynomial_decay_weight(const GridSpec& g);  // (1 + x1² + x2²)^−2
std::vector<WeightFunction> shipped_weights(const GridSpec& g);

/// Σ conj(f)·g·w·(trapezoid weight).
std::complex<double> inner_product(const GridFunction& f, const GridFunction& g, const WeightFunction& w);
double norm_squared(const GridFunction& f, const WeightFunction& w);
double sup_norm(const GridFunction& f);

/// (x1 − c1)^k1 (x2 − c2)^k2 exp(−|x − c|²/(2σ²)), k_i ∈ {0, 1}.
struct GaussianTestFunction {
  double c1 = 0, c2 = 0, sigma = 0.5;
  int k1 = 0, k2 = 0;

  double operator()(double x1, double x2) const;
  Eigen::Vector2d gradient(double x1, double x2) const;
  /// ∫_box f² / ∫_ℝ² f², from closed-form one-dimensional moments.
  double box_mass_fraction(double L) const;
  std::string label() const;
};

struct TestFunctionBasket {
  GridSpec grid;
  std::vector<GaussianTestFunction> members;
  std::vector<Eigen::MatrixXd> samples;
  std::vector<Eigen::MatrixXd> d1, d2;  // exact partial derivatives on the grid

  /// Throws ConfigError when a member leaks more than 1e−8 of its mass out of the box.
  TestFunctionBasket(const GridSpec& g, std::vector<GaussianTestFunction> fs);
  double worst_box_leak() const;
};

/// Gaussians and Gaussian-times-linear factors of width ≤ 0.6.
TestFunctionBasket default_basket(const GridSpec& g);

/// Smallest ε accepted as resolvable, in units of h.
inline constexpr double min_resolvable_width = 1.5;

/// (2πε²)^{−1/2} exp(−(x1 ∓ x2)²/(2ε²)): x1 − x2 for the A-vacuum, x1 + x2 for
/// the B-vacuum. Requires 1.5h ≤ ε ≤ L/4.
GridFunction sample_regularized_vacuum(double eps, const GridSpec& g, VacuumKind kind);

struct WeakResidual {
  std::vector<double> multiplication;  // |⟨Mφ, f⟩| per basket member
  std::vector<double> derivative;      // |⟨φ, D†f⟩|, derivative moved onto f
  double max_multiplication = 0;
  double max_derivative = 0;
  std::string convention = "derivative acts on the test function";
};

/// Pairings of φ with the vacuum equations of the given kind, whose
/// coefficients are taken from the parameter-dependent PDE system.
WeakResidual weak_residual(const GridFunction& phi, const TestFunctionBasket& basket, const ModelParameters& params,
                           VacuumKind kind);

struct NormGrowth {
  std::string weight;
  std::vector<double> eps;
  std::vector<double> norms;  // ‖φ_ε‖²_w
  double exponent = 0;        // slope of log‖φ_ε‖² against log ε
};

NormGrowth norm_growth(const std::vector<double>& eps_sweep, const GridSpec& g, const WeightFunction& w,
                       VacuumKind kind = VacuumKind::A);
/// Same fit for an arbitrary ε-indexed family.
NormGrowth norm_growth(const std::vector<double>& eps_sweep, const std::function<GridFunction(double)>& family,
                       const WeightFunction& w);

struct KernelSolveOptions {
  int block = 6;
  int max_iterations = 400;
  double tolerance = 1e-8;
  unsigned seed = 12345;
};

struct KernelSolveResult {
  GridFunction minimizer;  // unit w-norm, largest sample real positive
  double residual = 0;     // value of the functional at the minimizer
  double sup_norm = 0;
  double transverse_width = 0;  // w-RMS distance to the line x1 = ±x2
  int iterations = 0;
  std::string convention = "derivative acts on the candidate";
};

/// Minimizes ‖Mφ‖²_w + ‖Dφ‖²_w over ‖φ‖_w = 1, with M and D the multiplication
/// and derivative operators of the vacuum system (second-order central
/// differences, one-sided on the boundary).
KernelSolveResult discrete_kernel_solve(const GridSpec& g, const WeightFunction& w, const ModelParameters& params,
                                        VacuumKind kind, const KernelSolveOptions& opt = {});

/// The discretized functional evaluated on an arbitrary grid function.
double kernel_functional(const GridFunction& phi, const WeightFunction& w, const ModelParameters& params,
                         VacuumKind kind);

enum class CsvPart { real, imag, abs };

/// Matrix CSV: header row of x2 values, then one row per x1 value.
void write_csv(std::ostream& os, const GridFunction& f, CsvPart part = CsvPart::real);

}  // namespace batemanlab
