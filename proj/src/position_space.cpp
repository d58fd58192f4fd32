#include "batemanlab/position_space.hpp"

#include <Eigen/SparseCore>
#include <cmath>
#include <ostream>
#include <sstream>

#include "batemanlab/fock_numeric.hpp"
#include "batemanlab/linalg/subspace_iteration.hpp"

namespace batemanlab {

namespace {

using cd = std::complex<double>;
using SparseMatrixXd = Eigen::SparseMatrix<double>;

void require_same_grid(const GridSpec& a, const GridSpec& b, const char* what) {
  if (!(a == b)) throw GridMismatch(std::string(what) + ": grids differ");
}

// Coefficients of a first-order operator after removing a global phase; the
// vacuum systems are real up to that phase.
std::array<double, 2> real_coefficients(std::array<cd, 2> c) {
  const std::size_t lead = std::abs(c[0]) >= std::abs(c[1]) ? 0 : 1;
  const cd phase = c[lead] / std::abs(c[lead]);
  std::array<double, 2> out{};
  for (std::size_t i = 0; i < 2; ++i) {
    const cd z = c[i] / phase;
    if (std::abs(z.imag()) > 1e-12 * std::abs(c[lead])) {
      throw InternalConsistencyError("vacuum operator coefficients are not real up to a phase");
    }
    out[i] = z.real();
  }
  return out;
}

// Central differences, second-order one-sided at the two ends.
SparseMatrixXd difference_1d(int n, double h) {
  std::vector<Eigen::Triplet<double>> t;
  const double s = 1.0 / (2.0 * h);
  t.emplace_back(0, 0, -3 * s);
  t.emplace_back(0, 1, 4 * s);
  t.emplace_back(0, 2, -s);
  for (int i = 1; i + 1 < n; ++i) {
    t.emplace_back(i, i - 1, -s);
    t.emplace_back(i, i + 1, s);
  }
  t.emplace_back(n - 1, n - 1, 3 * s);
  t.emplace_back(n - 1, n - 2, -4 * s);
  t.emplace_back(n - 1, n - 3, s);
  SparseMatrixXd d(n, n);
  d.setFromTriplets(t.begin(), t.end());
  return d;
}

SparseMatrixXd kron(const SparseMatrixXd& a, const SparseMatrixXd& b) {
  std::vector<Eigen::Triplet<double>> t;
  for (int ka = 0; ka < a.outerSize(); ++ka) {
    for (SparseMatrixXd::InnerIterator ia(a, ka); ia; ++ia) {
      for (int kb = 0; kb < b.outerSize(); ++kb) {
        for (SparseMatrixXd::InnerIterator ib(b, kb); ib; ++ib) {
          t.emplace_back(ia.row() * b.rows() + ib.row(), ia.col() * b.cols() + ib.col(), ia.value() * ib.value());
        }
      }
    }
  }
  SparseMatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
  out.setFromTriplets(t.begin(), t.end());
  return out;
}

SparseMatrixXd identity(int n) {
  SparseMatrixXd i(n, n);
  i.setIdentity();
  return i;
}

// Discretized multiplication and derivative operators on column-major
// vectorized samples (index i + j·n for values(i, j)).
struct Discretization {
  Eigen::VectorXd multiplier;
  SparseMatrixXd derivative;
  Eigen::VectorXd transverse;  // signed distance to the vacuum line
};

Discretization discretize(const GridSpec& g, const ModelParameters& params, VacuumKind kind) {
  const auto sys = vacuum_pde_system(params, kind);
  const auto cm = real_coefficients(sys.multiplication.position);
  const auto cdv = real_coefficients(sys.derivative.derivative);
  const Eigen::VectorXd x = g.axis();
  const int n = g.n;

  Discretization out;
  out.multiplier.resize(static_cast<Eigen::Index>(n) * n);
  out.transverse.resize(out.multiplier.size());
  const double sign = kind == VacuumKind::A ? -1.0 : 1.0;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      out.multiplier[i + j * n] = cm[0] * x[i] + cm[1] * x[j];
      out.transverse[i + j * n] = (x[i] + sign * x[j]) / std::sqrt(2.0);
    }
  }
  const SparseMatrixXd d = difference_1d(n, g.h());
  const SparseMatrixXd in = identity(n);
  out.derivative = cdv[0] * kron(in, d) + cdv[1] * kron(d, in);
  return out;
}

Eigen::VectorXd mass_vector(const WeightFunction& w) {
  const Eigen::MatrixXd m = w.samples.cwiseProduct(trapezoid_weights(w.grid));
  return Eigen::Map<const Eigen::VectorXd>(m.data(), m.size());
}

double erfc_tail_k0(double b, double sigma) { return 0.5 * std::erfc(b / sigma); }

// ∫_b^∞ t² e^{−t²/σ²} dt relative to ∫_ℝ t² e^{−t²/σ²} dt.
double erfc_tail_k1(double b, double sigma) {
  return b * std::exp(-b * b / (sigma * sigma)) / (sigma * std::sqrt(M_PI)) + 0.5 * std::erfc(b / sigma);
}

double axis_leak(double c, int k, double sigma, double L) {
  const double upper = L - c, lower = L + c;
  return k == 0 ? erfc_tail_k0(upper, sigma) + erfc_tail_k0(lower, sigma)
                : erfc_tail_k1(upper, sigma) + erfc_tail_k1(lower, sigma);
}

}  // namespace

void GridSpec::validate() const {
  if (!(L > 0)) throw ConfigError("box half-width must be positive");
  if (n < 33) throw ConfigError("grid needs at least 33 points per axis");
  if (n % 2 == 0) throw ConfigError("grid size must be odd so the diagonals pass through nodes");
}

Eigen::MatrixXd trapezoid_weights(const GridSpec& g) {
  g.validate();
  Eigen::VectorXd tau = Eigen::VectorXd::Constant(g.n, g.h());
  tau[0] = tau[g.n - 1] = 0.5 * g.h();
  return tau * tau.transpose();
}

void WeightFunction::validate() const {
  grid.validate();
  if (samples.rows() != grid.n || samples.cols() != grid.n) throw GridMismatch("weight samples do not match the grid");
  if (!samples.allFinite() || !(samples.minCoeff() > 0)) throw ConfigError("weight '" + name + "' must be positive");
}

namespace {

WeightFunction make_weight(const std::string& name, const GridSpec& g, const std::function<double(double, double)>& f) {
  g.validate();
  const Eigen::VectorXd x = g.axis();
  WeightFunction w{name, g, Eigen::MatrixXd(g.n, g.n)};
  for (int j = 0; j < g.n; ++j) {
    for (int i = 0; i < g.n; ++i) w.samples(i, j) = f(x[i], x[j]);
  }
  w.validate();
  return w;
}

}  // namespace

WeightFunction uniform_weight(const GridSpec& g) {
  return make_weight("uniform", g, [](double, double) { return 1.0; });
}

WeightFunction gaussian_weight(const GridSpec& g) {
  return make_weight("gaussian", g, [](double a, double b) { return std::exp(-(a * a + b * b) / 4.0); });
}

WeightFunction polynomial_decay_weight(const GridSpec& g) {
  return make_weight("polynomial_decay", g, [](double a, double b) {
    const double r = 1.0 + a * a + b * b;
    return 1.0 / (r * r);
  });
}

std::vector<WeightFunction> shipped_weights(const GridSpec& g) {
  return {uniform_weight(g), gaussian_weight(g), polynomial_decay_weight(g)};
}

std::complex<double> inner_product(const GridFunction& f, const GridFunction& g, const WeightFunction& w) {
  require_same_grid(f.grid, g.grid, "inner product");
  require_same_grid(f.grid, w.grid, "inner product weight");
  const Eigen::MatrixXd m = w.samples.cwiseProduct(trapezoid_weights(w.grid));
  return (f.values.conjugate().cwiseProduct(g.values).cwiseProduct(m.cast<cd>())).sum();
}

double norm_squared(const GridFunction& f, const WeightFunction& w) {
  require_same_grid(f.grid, w.grid, "norm");
  return (f.values.cwiseAbs2().cwiseProduct(w.samples).cwiseProduct(trapezoid_weights(w.grid))).sum();
}

double sup_norm(const GridFunction& f) { return f.values.cwiseAbs().maxCoeff(); }

double GaussianTestFunction::operator()(double x1, double x2) const {
  const double u = x1 - c1, v = x2 - c2;
  const double p = (k1 ? u : 1.0) * (k2 ? v : 1.0);
  return p * std::exp(-(u * u + v * v) / (2.0 * sigma * sigma));
}

Eigen::Vector2d GaussianTestFunction::gradient(double x1, double x2) const {
  const double u = x1 - c1, v = x2 - c2, s2 = sigma * sigma;
  const double gauss = std::exp(-(u * u + v * v) / (2.0 * s2));
  const double pu = k1 ? u : 1.0, pv = k2 ? v : 1.0;
  return {((k1 ? 1.0 : 0.0) - pu * u / s2) * pv * gauss, ((k2 ? 1.0 : 0.0) - pv * v / s2) * pu * gauss};
}

double GaussianTestFunction::box_mass_fraction(double L) const {
  const double l1 = axis_leak(c1, k1, sigma, L), l2 = axis_leak(c2, k2, sigma, L);
  return (1.0 - l1) * (1.0 - l2);
}

std::string GaussianTestFunction::label() const {
  std::ostringstream os;
  os << "gauss(c=" << c1 << "," << c2 << ";s=" << sigma << ";k=" << k1 << "," << k2 << ")";
  return os.str();
}

TestFunctionBasket::TestFunctionBasket(const GridSpec& g, std::vector<GaussianTestFunction> fs)
    : grid(g), members(std::move(fs)) {
  g.validate();
  if (members.empty()) throw ConfigError("test-function basket is empty");
  const Eigen::VectorXd x = g.axis();
  for (const auto& f : members) {
    if (!(f.sigma > 0) || f.k1 < 0 || f.k1 > 1 || f.k2 < 0 || f.k2 > 1) {
      throw ConfigError("test function " + f.label() + " is outside the supported family");
    }
    const double leak = 1.0 - f.box_mass_fraction(g.L);
    if (leak > 1e-8) throw ConfigError("test function " + f.label() + " leaks out of the box");
    Eigen::MatrixXd s(g.n, g.n), a(g.n, g.n), b(g.n, g.n);
    for (int j = 0; j < g.n; ++j) {
      for (int i = 0; i < g.n; ++i) {
        s(i, j) = f(x[i], x[j]);
        const Eigen::Vector2d grad = f.gradient(x[i], x[j]);
        a(i, j) = grad[0];
        b(i, j) = grad[1];
      }
    }
    samples.push_back(std::move(s));
    d1.push_back(std::move(a));
    d2.push_back(std::move(b));
  }
}

double TestFunctionBasket::worst_box_leak() const {
  double worst = 0;
  for (const auto& f : members) worst = std::max(worst, 1.0 - f.box_mass_fraction(grid.L));
  return worst;
}

TestFunctionBasket default_basket(const GridSpec& g) {
  return TestFunctionBasket(g, {
                                   {0.0, 0.0, 0.5, 0, 0},
                                   {0.4, -0.3, 0.6, 0, 0},
                                   {-0.5, 0.5, 0.4, 0, 0},
                                   {0.2, 0.1, 0.5, 1, 0},
                                   {-0.3, 0.2, 0.55, 0, 1},
                                   {0.1, -0.2, 0.45, 1, 1},
                               });
}

GridFunction sample_regularized_vacuum(double eps, const GridSpec& g, VacuumKind kind) {
  g.validate();
  if (!(eps >= min_resolvable_width * g.h() * (1 - 1e-12))) {
    std::ostringstream os;
    os << "width " << eps << " is below " << min_resolvable_width << "h = " << min_resolvable_width * g.h();
    throw ResolutionError(os.str());
  }
  if (!(eps <= g.L / 4)) throw ResolutionError("width exceeds L/4; the delta line is not localized in the box");
  const Eigen::VectorXd x = g.axis();
  const double sign = kind == VacuumKind::A ? -1.0 : 1.0;
  const double peak = 1.0 / std::sqrt(2.0 * M_PI * eps * eps);
  GridFunction::Matrix v(g.n, g.n);
  for (int j = 0; j < g.n; ++j) {
    for (int i = 0; i < g.n; ++i) {
      const double t = x[i] + sign * x[j];
      v(i, j) = peak * std::exp(-t * t / (2.0 * eps * eps));
    }
  }
  return {g, std::move(v)};
}

WeakResidual weak_residual(const GridFunction& phi, const TestFunctionBasket& basket, const ModelParameters& params,
                           VacuumKind kind) {
  require_same_grid(phi.grid, basket.grid, "weak residual");
  const auto sys = vacuum_pde_system(params, kind);
  const auto& cm = sys.multiplication.position;
  const auto& dv = sys.derivative.derivative;
  const GridSpec& g = phi.grid;
  const Eigen::VectorXd x = g.axis();
  const Eigen::MatrixXd trap = trapezoid_weights(g);

  GridFunction::Matrix mphi(g.n, g.n);
  for (int j = 0; j < g.n; ++j) {
    for (int i = 0; i < g.n; ++i) mphi(i, j) = (cm[0] * x[i] + cm[1] * x[j]) * phi.values(i, j);
  }

  WeakResidual out;
  for (std::size_t k = 0; k < basket.members.size(); ++k) {
    const Eigen::MatrixXcd f = basket.samples[k].cast<cd>();
    const cd m = (mphi.conjugate().cwiseProduct(f).cwiseProduct(trap.cast<cd>())).sum();
    // D† = −(conj(d1)∂1 + conj(d2)∂2)
    const Eigen::MatrixXcd dadj =
        -(std::conj(dv[0]) * basket.d1[k].cast<cd>() + std::conj(dv[1]) * basket.d2[k].cast<cd>());
    const cd d = (phi.values.conjugate().cwiseProduct(dadj).cwiseProduct(trap.cast<cd>())).sum();
    out.multiplication.push_back(std::abs(m));
    out.derivative.push_back(std::abs(d));
    out.max_multiplication = std::max(out.max_multiplication, std::abs(m));
    out.max_derivative = std::max(out.max_derivative, std::abs(d));
  }
  return out;
}

NormGrowth norm_growth(const std::vector<double>& eps_sweep, const std::function<GridFunction(double)>& family,
                       const WeightFunction& w) {
  if (eps_sweep.size() < 3) throw FitError("norm-growth fit needs at least three widths");
  w.validate();
  NormGrowth out;
  out.weight = w.name;
  out.eps = eps_sweep;
  for (double e : eps_sweep) out.norms.push_back(norm_squared(family(e), w));
  out.exponent = fit_power_law(out.eps, out.norms).exponent;
  return out;
}

NormGrowth norm_growth(const std::vector<double>& eps_sweep, const GridSpec& g, const WeightFunction& w,
                       VacuumKind kind) {
  return norm_growth(eps_sweep, [&](double e) { return sample_regularized_vacuum(e, g, kind); }, w);
}

double kernel_functional(const GridFunction& phi, const WeightFunction& w, const ModelParameters& params,
                         VacuumKind kind) {
  require_same_grid(phi.grid, w.grid, "kernel functional");
  const auto disc = discretize(phi.grid, params, kind);
  const Eigen::VectorXd mass = mass_vector(w);
  const Eigen::Map<const Eigen::VectorXcd> v(phi.values.data(), phi.values.size());
  const Eigen::VectorXcd mv = disc.multiplier.cast<cd>().cwiseProduct(v);
  const Eigen::VectorXcd dv = disc.derivative.cast<cd>() * v;
  const double num = (mv.cwiseAbs2().dot(mass)) + (dv.cwiseAbs2().dot(mass));
  return num / v.cwiseAbs2().dot(mass);
}

KernelSolveResult discrete_kernel_solve(const GridSpec& g, const WeightFunction& w, const ModelParameters& params,
                                        VacuumKind kind, const KernelSolveOptions& opt) {
  g.validate();
  w.validate();
  require_same_grid(g, w.grid, "kernel solve");
  const auto disc = discretize(g, params, kind);
  const Eigen::VectorXd mass = mass_vector(w);

  SparseMatrixXd k = SparseMatrixXd(disc.derivative.transpose()) * mass.asDiagonal() * disc.derivative;
  k += SparseMatrixXd((disc.multiplier.cwiseAbs2().cwiseProduct(mass)).asDiagonal());
  k.prune(0.0);

  linalg::SubspaceOptions so;
  so.block = opt.block;
  so.max_iterations = opt.max_iterations;
  so.tolerance = opt.tolerance;
  so.seed = opt.seed;
  auto pair = linalg::smallest_eigenpair(k, mass, so);

  Eigen::Index imax = 0;
  pair.vector.cwiseAbs().maxCoeff(&imax);
  if (pair.vector[imax] < 0) pair.vector = -pair.vector;
  pair.vector /= std::sqrt(pair.vector.cwiseAbs2().dot(mass));

  KernelSolveResult out;
  out.minimizer = GridFunction(g, Eigen::Map<const Eigen::MatrixXd>(pair.vector.data(), g.n, g.n).cast<cd>());
  out.residual = pair.value;
  out.sup_norm = sup_norm(out.minimizer);
  out.transverse_width = std::sqrt(pair.vector.cwiseAbs2().cwiseProduct(disc.transverse.cwiseAbs2()).dot(mass));
  out.iterations = pair.iterations;
  return out;
}

void write_csv(std::ostream& os, const GridFunction& f, CsvPart part) {
  const Eigen::VectorXd x = f.grid.axis();
  os.precision(17);
  os << "x1\\x2";
  for (int j = 0; j < f.grid.n; ++j) os << ',' << x[j];
  os << '\n';
  for (int i = 0; i < f.grid.n; ++i) {
    os << x[i];
    for (int j = 0; j < f.grid.n; ++j) {
      const cd z = f.values(i, j);
      os << ',' << (part == CsvPart::real ? z.real() : part == CsvPart::imag ? z.imag() : std::abs(z));
    }
    os << '\n';
  }
}

}  // namespace batemanlab
