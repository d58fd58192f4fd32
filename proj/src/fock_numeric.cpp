#include "batemanlab/fock_numeric.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>

#include "batemanlab/linalg/subspace_iteration.hpp"

namespace batemanlab {

namespace {

using cd = std::complex<double>;
using Poly = OperatorPolynomial;

struct Contribution {
  Eigen::Index row, col;
  double re, im;
};

// Sum that is exactly odd under negation of every input: equal-magnitude
// opposite pairs cancel first, the rest accumulates by increasing magnitude.
double negation_symmetric_sum(std::vector<double>& v) {
  std::sort(v.begin(), v.end(), [](double a, double b) {
    const double aa = std::abs(a), ab = std::abs(b);
    return aa != ab ? aa < ab : a < b;
  });
  double sum = 0.0;
  std::size_t i = 0;
  while (i < v.size()) {
    const double mag = std::abs(v[i]);
    long net = 0;
    std::size_t j = i;
    for (; j < v.size() && std::abs(v[j]) == mag; ++j) net += v[j] > 0 ? 1 : (v[j] < 0 ? -1 : 0);
    const double term = net > 0 ? mag : -mag;
    for (long c = 0; c < std::labs(net); ++c) sum += term;
    i = j;
  }
  return sum;
}

bool is_boson_tag(Tag t) { return t == Tag::a1 || t == Tag::a2 || t == Tag::a1d || t == Tag::a2d; }

Poly boson(Tag t, cd c = 1.0) { return Poly::generator(t, AlgebraId::boson, c); }

// Quadratures in units m·ω = 1.
Poly quadrature_u() { return 0.5 * (boson(Tag::a1) + boson(Tag::a1d) - boson(Tag::a2) - boson(Tag::a2d)); }
Poly quadrature_v() { return 0.5 * (boson(Tag::a1) + boson(Tag::a1d) + boson(Tag::a2) + boson(Tag::a2d)); }

void normalize_phase(Eigen::VectorXcd& v) {
  Eigen::Index imax = 0;
  v.cwiseAbs().maxCoeff(&imax);
  const cd ph = v[imax] / std::abs(v[imax]);
  v /= ph;
  v.normalize();
}

}  // namespace

void FockTruncation::validate() const {
  if (levels < 2) throw ConfigError("a Fock truncation needs at least 2 levels per mode");
  if (margin < 0 || 2 * margin >= levels) throw ConfigError("edge margin must satisfy 0 <= K < N/2");
}

MaterializedOperator materialize(const OperatorPolynomial& p, const FockTruncation& tr) {
  tr.validate();
  if (p.algebra() != AlgebraId::free_algebra && p.algebra() != AlgebraId::boson) {
    throw RepresentationError("only boson-algebra polynomials have a direct Fock representation, got '" +
                              std::string(algebra_name(p.algebra())) + "'");
  }
  const int N = tr.levels;
  constexpr std::uint64_t exact_limit = std::uint64_t{1} << 53;

  std::vector<Contribution> contributions;
  for (const auto& [w, c] : p.terms()) {
    for (Tag t : w) {
      if (!is_boson_tag(t)) throw RepresentationError("generator " + std::string(name(t)) + " is not a boson");
    }
    for (int n1 = 0; n1 < N; ++n1) {
      for (int n2 = 0; n2 < N; ++n2) {
        int level[2] = {n1, n2};
        std::uint64_t product = 1;
        long double fallback = 1.0L;
        bool exact = true, alive = true;
        for (auto it = w.rbegin(); it != w.rend() && alive; ++it) {
          const int j = mode(*it) - 1;
          std::uint64_t factor = 0;
          if (kind(*it) == Kind::annihilation_like) {
            if (level[j] == 0) { alive = false; break; }
            factor = static_cast<std::uint64_t>(level[j]--);
          } else {
            if (level[j] + 1 >= N) { alive = false; break; }
            factor = static_cast<std::uint64_t>(++level[j]);
          }
          fallback *= std::sqrt(static_cast<long double>(factor));
          if (exact && product > exact_limit / factor) exact = false;
          if (exact) product *= factor;
        }
        if (!alive) continue;
        // The amplitude depends only on the multiset of visited levels, so a
        // reversed (adjoint) word reproduces it bit for bit.
        const double amp = exact ? std::sqrt(static_cast<double>(product)) : static_cast<double>(fallback);
        contributions.push_back({tr.index(level[0], level[1]), tr.index(n1, n2), c.real() * amp, c.imag() * amp});
      }
    }
  }

  std::sort(contributions.begin(), contributions.end(), [](const Contribution& a, const Contribution& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  std::vector<Eigen::Triplet<cd>> triplets;
  std::vector<double> re, im;
  for (std::size_t i = 0; i < contributions.size();) {
    std::size_t j = i;
    re.clear();
    im.clear();
    for (; j < contributions.size() && contributions[j].row == contributions[i].row &&
           contributions[j].col == contributions[i].col;
         ++j) {
      re.push_back(contributions[j].re);
      im.push_back(contributions[j].im);
    }
    const cd value(negation_symmetric_sum(re), negation_symmetric_sum(im));
    if (value != cd(0.0)) triplets.emplace_back(contributions[i].row, contributions[i].col, value);
    i = j;
  }

  MaterializedOperator out{SparseMatrixXcd(tr.dimension(), tr.dimension()), p, tr};
  out.matrix.setFromTriplets(triplets.begin(), triplets.end());
  return out;
}

Substitution<std::complex<double>> phase_space_from_bosons(double m, double reference_frequency) {
  const double sx = 1.0 / std::sqrt(2.0 * m * reference_frequency);
  const double sp = std::sqrt(m * reference_frequency / 2.0);
  const cd i(0.0, 1.0);
  Substitution<cd> s(AlgebraId::phase_space, AlgebraId::boson);
  s.set(Tag::x1, sx * (boson(Tag::a1) + boson(Tag::a1d)));
  s.set(Tag::x2, sx * (boson(Tag::a2) + boson(Tag::a2d)));
  s.set(Tag::p1, (i * sp) * (boson(Tag::a1d) - boson(Tag::a1)));
  s.set(Tag::p2, (i * sp) * (boson(Tag::a2d) - boson(Tag::a2)));
  return s;
}

MaterializedOperator materialize(const OperatorPolynomial& p, const FockTruncation& tr,
                                 const ModelParameters& params) {
  switch (p.algebra()) {
    case AlgebraId::free_algebra:
    case AlgebraId::boson:
      return materialize(p, tr);
    case AlgebraId::phase_space: {
      params.validate();
      const double ref = params.regime() == Regime::underdamped ? params.omega().real() : 1.0;
      auto out = materialize(substitute(p, phase_space_from_bosons(params.m, ref), boson_table()), tr);
      out.source = p;
      return out;
    }
    case AlgebraId::pseudo: {
      params.validate();
      if (params.regime() != Regime::underdamped) {
        throw RepresentationError("overdamped pseudo-bosons have no boson Fock representation here");
      }
      const auto ops = build_pseudo_ops(params);
      auto out = materialize(substitute(p, ops.to_ladder, boson_table()), tr);
      out.source = p;
      return out;
    }
    default:
      throw RepresentationError("no Fock representation for algebra '" + std::string(algebra_name(p.algebra())) +
                                "'");
  }
}

Eigen::MatrixXcd interior_block(const Eigen::MatrixXcd& full, const FockTruncation& tr) {
  const int n = tr.levels - tr.margin;
  std::vector<Eigen::Index> idx;
  for (int n1 = 0; n1 < n; ++n1) {
    for (int n2 = 0; n2 < n; ++n2) idx.push_back(tr.index(n1, n2));
  }
  return full(idx, idx);
}

SpectrumStudy hermitian_spectrum_study(const ModelParameters& params, const FockTruncation& tr, double window,
                                       Eigen::Index general_solver_limit) {
  params.validate();
  tr.validate();
  SpectrumStudy out;
  out.window = window;
  MaterializedOperator h;
  if (params.regime() == Regime::underdamped) {
    h = materialize(build_ladder_hamiltonian(params), tr);
    out.form = "ladder";
    out.reference_frequency = params.omega().real();
  } else {
    h = materialize(build_phase_space_hamiltonian(params), tr, params);
    out.form = "phase_space";
    out.reference_frequency = 1.0;
  }
  const Eigen::MatrixXcd dense = h.dense();
  out.hermiticity_defect = (dense - dense.adjoint()).cwiseAbs().maxCoeff();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(dense, Eigen::EigenvaluesOnly);
  out.eigenvalues = es.eigenvalues();
  out.window_count = static_cast<int>((out.eigenvalues.array().abs() <= window).count());

  if (dense.rows() <= general_solver_limit) {
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> ces(dense, false);
    out.max_imag = ces.eigenvalues().imag().cwiseAbs().maxCoeff();
  }
  return out;
}

SparseMatrixXcd stacked_annihilators(const FockTruncation& tr, VacuumKind kind, bool square_cutoff) {
  // A_j and B_j do not depend on (m, γ, k); any underdamped parameters do.
  const auto ops = build_pseudo_ops(ModelParameters{1.0, 0.0, 1.0});
  std::array<Poly, 2> rows;
  if (kind == VacuumKind::A) {
    rows = ops.lowering;
  } else {
    rows = {adjoint(ops.raising[0]), adjoint(ops.raising[1])};
  }
  // One extra level holds every image of a linear operator exactly.
  const FockTruncation range{square_cutoff ? tr.levels : tr.levels + 1, 0};
  const Eigen::Index d = range.dimension();
  std::vector<Eigen::Triplet<cd>> triplets;
  for (int b = 0; b < 2; ++b) {
    const auto m = materialize(rows[b], range).matrix;
    for (int n1 = 0; n1 < tr.levels; ++n1) {
      for (int n2 = 0; n2 < tr.levels; ++n2) {
        for (SparseMatrixXcd::InnerIterator it(m, range.index(n1, n2)); it; ++it) {
          triplets.emplace_back(it.row() + b * d, tr.index(n1, n2), it.value());
        }
      }
    }
  }
  SparseMatrixXcd s(2 * d, tr.dimension());
  s.setFromTriplets(triplets.begin(), triplets.end());
  return s;
}

namespace {

VacuumSearchReport residual_min(const ModelParameters& params, const FockTruncation& tr, SolverPath path,
                                VacuumKind kind) {
  params.validate();
  tr.validate();
  if (params.regime() != Regime::underdamped) {
    throw UnsupportedRegime("the Fock vacuum search uses the underdamped boson representation");
  }
  const SparseMatrixXcd s = stacked_annihilators(tr, kind);
  const Eigen::Index d = tr.dimension();

  VacuumSearchReport rep;
  Eigen::VectorXcd diag = Eigen::VectorXcd::Zero(d);
  for (int n = 0; n < tr.levels; ++n) diag[tr.index(n, n)] = (kind == VacuumKind::B && n % 2) ? -1.0 : 1.0;
  rep.cutoff_kernel_residual = (stacked_annihilators(tr, kind, true) * diag.normalized()).norm();
  rep.kind = kind;
  rep.levels = tr.levels;
  const bool dense = path == SolverPath::dense || (path == SolverPath::automatic && d <= 4096);
  if (dense) {
    const Eigen::MatrixXcd sd(s);
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(sd, Eigen::ComputeThinV);
    rep.sigma_min = svd.singularValues()[d - 1];
    rep.minimizer = svd.matrixV().col(d - 1);
    rep.solver = "dense-svd";
  } else {
    const SparseMatrixXcd gram = SparseMatrixXcd(s.adjoint()) * s;
    linalg::SubspaceOptions opt;
    opt.tolerance = 1e-12;
    const auto pair = linalg::smallest_eigenpair(gram, Eigen::VectorXd::Ones(d), opt);
    rep.sigma_min = std::sqrt(std::max(pair.value, 0.0));
    rep.minimizer = pair.vector;
    rep.iterations = pair.iterations;
    rep.solver = "subspace-iteration";
  }
  normalize_phase(rep.minimizer);

  const SparseMatrixXcd u = materialize(quadrature_u(), tr).matrix;
  const SparseMatrixXcd v = materialize(quadrature_v(), tr).matrix;
  rep.u2 = (u * rep.minimizer).squaredNorm();
  rep.v2 = (v * rep.minimizer).squaredNorm();
  rep.participation_ratio = 1.0 / rep.minimizer.cwiseAbs2().cwiseAbs2().sum();
  return rep;
}

}  // namespace

VacuumSearchReport vacuum_residual_min(const ModelParameters& params, const FockTruncation& tr, SolverPath path) {
  return residual_min(params, tr, path, VacuumKind::A);
}

VacuumSearchReport bvacuum_residual_min(const ModelParameters& params, const FockTruncation& tr, SolverPath path) {
  return residual_min(params, tr, path, VacuumKind::B);
}

SparseMatrixXcd mode2_parity(const FockTruncation& tr) {
  SparseMatrixXcd p(tr.dimension(), tr.dimension());
  std::vector<Eigen::Triplet<cd>> t;
  for (int n1 = 0; n1 < tr.levels; ++n1) {
    for (int n2 = 0; n2 < tr.levels; ++n2) t.emplace_back(tr.index(n1, n2), tr.index(n1, n2), n2 % 2 ? -1.0 : 1.0);
  }
  p.setFromTriplets(t.begin(), t.end());
  return p;
}

double regularized_diagonal_overlap(const VacuumSearchReport& report, const FockTruncation& tr) {
  const int N = tr.levels;
  const double su = std::max(report.u2, 1e-6), sv = std::max(report.v2, 1e-6);
  const double extent = std::sqrt(2.0 * N + 1.0) + 6.0;
  const double h = std::min(0.05, 0.25 / std::sqrt(2.0 * N + 1.0));
  const int M = 2 * static_cast<int>(std::ceil(extent / h)) + 1;
  const Eigen::VectorXd x = Eigen::VectorXd::LinSpaced(M, -extent, extent);

  // Hermite functions ⟨x|n⟩ by the stable three-term recurrence.
  Eigen::MatrixXd herm(N, M);
  herm.row(0) = (std::pow(M_PI, -0.25) * (-0.5 * x.array().square()).exp()).matrix().transpose();
  if (N > 1) herm.row(1) = std::sqrt(2.0) * x.transpose().array() * herm.row(0).array();
  for (int n = 1; n + 1 < N; ++n) {
    herm.row(n + 1) = std::sqrt(2.0 / (n + 1)) * x.transpose().array() * herm.row(n).array() -
                      std::sqrt(static_cast<double>(n) / (n + 1)) * herm.row(n - 1).array();
  }

  Eigen::MatrixXd g(M, M);
  for (int i = 0; i < M; ++i) {
    for (int j = 0; j < M; ++j) {
      const double u = (x[i] - x[j]) / std::sqrt(2.0), v = (x[i] + x[j]) / std::sqrt(2.0);
      g(i, j) = std::exp(-u * u / (4.0 * su) - v * v / (4.0 * sv));
    }
  }
  const Eigen::MatrixXd coeff = herm * g * herm.transpose() * (x[1] - x[0]) * (x[1] - x[0]);
  Eigen::VectorXcd state(tr.dimension());
  for (int n1 = 0; n1 < N; ++n1) {
    for (int n2 = 0; n2 < N; ++n2) state[tr.index(n1, n2)] = coeff(n1, n2);
  }
  state.normalize();
  return std::abs(state.dot(report.minimizer));
}

PowerLawFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw FitError("power-law fit needs at least two matching points");
  const auto n = static_cast<Eigen::Index>(x.size());
  Eigen::VectorXd lx(n), ly(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(x[static_cast<std::size_t>(i)] > 0) || !(y[static_cast<std::size_t>(i)] > 0)) {
      throw FitError("power-law fit needs positive data");
    }
    lx[i] = std::log(x[static_cast<std::size_t>(i)]);
    ly[i] = std::log(y[static_cast<std::size_t>(i)]);
  }
  const double mx = lx.mean(), my = ly.mean();
  const double slope = ((lx.array() - mx) * (ly.array() - my)).sum() / (lx.array() - mx).square().sum();
  return {slope, std::exp(my - slope * mx)};
}

}  // namespace batemanlab
