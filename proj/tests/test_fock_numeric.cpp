#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <map>

#include "batemanlab/fock_numeric.hpp"
#include "oracles.hpp"

using namespace batemanlab;
using cd = std::complex<double>;
using Poly = OperatorPolynomial;
using oracles::brute_force_sigma_min;
using oracles::kron;
using oracles::lowering;

namespace {

Poly g(Tag t) { return Poly::generator(t, AlgebraId::boson); }

}  // namespace

TEST_CASE("materialize") {
  const FockTruncation tr{6, 2};
  const int N = tr.levels;

  SUBCASE("number operator") {
    const auto n = materialize(g(Tag::a1d) * g(Tag::a1), tr).dense();
    for (int n1 = 0; n1 < N; ++n1) {
      for (int n2 = 0; n2 < N; ++n2) CHECK(n(tr.index(n1, n2), tr.index(n1, n2)) == cd(n1));
    }
    CHECK((n - Eigen::MatrixXcd(n.diagonal().asDiagonal())).cwiseAbs().maxCoeff() == 0.0);
  }

  SUBCASE("matches Kronecker oracle") {
    const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(N, N);
    CHECK((materialize(g(Tag::a1), tr).dense() - kron(lowering(N), I)).norm() == 0.0);
    CHECK((materialize(g(Tag::a2d), tr).dense() - kron(I, lowering(N).adjoint())).norm() == 0.0);
    const Poly p = cd(0.5, -1.0) * (g(Tag::a1) * g(Tag::a2d) * g(Tag::a1d)) + 3.0 * g(Tag::a2);
    const Eigen::MatrixXcd a1 = kron(lowering(N), I), a2 = kron(I, lowering(N));
    const Eigen::MatrixXcd oracle = cd(0.5, -1.0) * a1 * a2.adjoint() * a1.adjoint() + 3.0 * a2;
    CHECK((materialize(p, tr).dense() - oracle).cwiseAbs().maxCoeff() < 1e-13);
  }

  SUBCASE("truncated commutator defect") {
    const auto a = materialize(g(Tag::a1), tr).dense();
    const auto ad = materialize(g(Tag::a1d), tr).dense();
    Eigen::MatrixXcd expected = Eigen::MatrixXcd::Identity(tr.dimension(), tr.dimension());
    for (int n2 = 0; n2 < N; ++n2) expected(tr.index(N - 1, n2), tr.index(N - 1, n2)) -= double(N);
    CHECK((a * ad - ad * a - expected).cwiseAbs().maxCoeff() < 1e-14);
    const Poly word_form = g(Tag::a1) * g(Tag::a1d) - g(Tag::a1d) * g(Tag::a1);
    CHECK((materialize(word_form, tr).dense() - expected).cwiseAbs().maxCoeff() == 0.0);
  }

  SUBCASE("position quadrature at m = omega = 1") {
    const ModelParameters unit{1.0, 0.0, 1.0};
    const Poly x1 = Poly::generator(Tag::x1, AlgebraId::phase_space);
    const auto x = materialize(x1, tr, unit).dense();
    for (int n = 0; n + 1 < N; ++n) {
      for (int n2 = 0; n2 < N; ++n2) {
        CHECK(std::abs(x(tr.index(n, n2), tr.index(n + 1, n2)) - std::sqrt((n + 1) / 2.0)) < 1e-15);
        CHECK(std::abs(x(tr.index(n + 1, n2), tr.index(n, n2)) - std::sqrt((n + 1) / 2.0)) < 1e-15);
      }
    }
    CHECK(x.cwiseAbs().sum() == doctest::Approx(2.0 * N * [&] {
            double s = 0;
            for (int n = 1; n < N; ++n) s += std::sqrt(n / 2.0);
            return s;
          }()));
  }

  SUBCASE("interior CCR") {
    for (Tag j : {Tag::a1, Tag::a2}) {
      for (Tag kd : {Tag::a1d, Tag::a2d}) {
        const Poly word_form = g(j) * g(kd) - g(kd) * g(j);
        const Eigen::MatrixXcd c = interior_block(materialize(word_form, tr).dense(), tr);
        const bool same = mode(j) == mode(kd);
        const Eigen::MatrixXcd expected = Eigen::MatrixXcd::Identity(c.rows(), c.cols()) * (same ? 1.0 : 0.0);
        CHECK(c.rows() == (N - tr.margin) * (N - tr.margin));
        CHECK((c - expected).cwiseAbs().maxCoeff() == 0.0);
      }
    }
  }

  SUBCASE("star exactness") {
    const Poly p = cd(0.3, 0.7) * (g(Tag::a1d) * g(Tag::a2) * g(Tag::a2)) + cd(-1.1, 0.2) * g(Tag::a1) +
                   cd(0.0, 2.5) * (g(Tag::a2d) * g(Tag::a1d));
    const auto m = materialize(p, tr).dense();
    const auto madj = materialize(adjoint(p), tr).dense();
    CHECK(madj == Eigen::MatrixXcd(m.adjoint()));
  }

  SUBCASE("errors") {
    CHECK_THROWS_AS(materialize(Poly::generator(Tag::x1, AlgebraId::phase_space), tr), RepresentationError);
    CHECK_THROWS_AS(materialize(Poly::generator(Tag::A1, AlgebraId::pseudo), tr, {1.0, 4.0, 1.0}),
                    RepresentationError);
    CHECK_THROWS_AS(materialize(Poly::generator(Tag::b1, AlgebraId::extended_boson), tr, {1.0, 4.0, 1.0}),
                    RepresentationError);
    CHECK_THROWS_AS(materialize(g(Tag::a1), {1, 0}), ConfigError);
    CHECK_THROWS_AS(materialize(g(Tag::a1), {4, 2}), ConfigError);
  }
}

TEST_CASE("hermitian spectrum study") {
  SUBCASE("decoupled oscillators give integer spectrum") {
    const auto s = hermitian_spectrum_study({1.0, 0.0, 1.0}, {8, 2});
    std::map<long, int> counts;
    for (Eigen::Index i = 0; i < s.eigenvalues.size(); ++i) {
      const double e = s.eigenvalues[i];
      CHECK(std::abs(e - std::round(e)) < 1e-12);
      ++counts[std::lround(e)];
    }
    CHECK(counts.size() == 15);
    for (int d = -7; d <= 7; ++d) CHECK(counts[d] == 8 - std::abs(d));
  }

  SUBCASE("damped truncations are Hermitian with real spectra") {
    const auto s = hermitian_spectrum_study({1.0, 0.4, 1.0}, {12, 2});
    CHECK(s.hermiticity_defect == 0.0);
    CHECK(s.max_imag >= 0.0);
    CHECK(s.max_imag < 1e-10);
    CHECK(s.form == "ladder");
    CHECK(s.reference_frequency == doctest::Approx(std::sqrt(0.96)));
  }

  SUBCASE("window count grows with truncation") {
    int last = -1;
    for (int N : {8, 12, 16, 24}) {
      const auto s = hermitian_spectrum_study({1.0, 0.4, 1.0}, {N, 2});
      CHECK(s.window_count > last);
      last = s.window_count;
    }
  }

  SUBCASE("overdamped uses the unit reference basis") {
    const auto s = hermitian_spectrum_study({1.0, 4.0, 1.0}, {8, 2});
    CHECK(s.form == "phase_space");
    CHECK(s.reference_frequency == 1.0);
    CHECK(s.hermiticity_defect == 0.0);
    CHECK(s.max_imag < 1e-10);
  }

  SUBCASE("general solver skipped above the limit") {
    const auto s = hermitian_spectrum_study({1.0, 0.4, 1.0}, {6, 2}, 1.0, 10);
    CHECK(s.max_imag == -1.0);
  }
}

TEST_CASE("vacuum residual minimization") {
  const ModelParameters p{1.0, 0.4, 1.0};

  SUBCASE("N = 2 brute-force oracle") {
    for (double gamma : {0.0, 0.4, 1.5}) {
      const ModelParameters q{1.0, gamma, 1.0};
      const auto a = vacuum_residual_min(q, {2, 0}, SolverPath::dense);
      const auto b = bvacuum_residual_min(q, {2, 0}, SolverPath::dense);
      CHECK(std::abs(a.sigma_min - brute_force_sigma_min(2, false)) < 1e-10);
      CHECK(std::abs(b.sigma_min - brute_force_sigma_min(2, true)) < 1e-10);
      CHECK(a.gamma_independent);
    }
  }

  SUBCASE("Gram-matrix oracle at N = 5") {
    CHECK(std::abs(vacuum_residual_min(p, {5, 1}).sigma_min - brute_force_sigma_min(5, false)) < 1e-10);
  }

  SUBCASE("sweep") {
    double last_sigma = INFINITY, last_u = INFINITY, last_v = 0;
    for (int N : {4, 8, 16}) {
      const FockTruncation tr{N, 1};
      const auto a = vacuum_residual_min(p, tr);
      const auto b = bvacuum_residual_min(p, tr);
      CHECK(a.sigma_min > 0.0);
      CHECK(a.sigma_min <= last_sigma);
      CHECK(a.v2 > last_v);
      CHECK(a.u2 < last_u);
      CHECK(std::abs(a.minimizer.norm() - 1.0) < 1e-12);
      CHECK(std::abs(a.sigma_min - b.sigma_min) < 1e-10);
      CHECK(std::abs(a.u2 - b.v2) < 1e-10);
      CHECK(std::abs(a.v2 - b.u2) < 1e-10);
      CHECK(a.cutoff_kernel_residual < 1e-13);
      CHECK(b.cutoff_kernel_residual < 1e-13);
      last_sigma = a.sigma_min;
      last_u = a.u2;
      last_v = a.v2;
    }
  }

  SUBCASE("parity maps the A-system onto the B-system") {
    const FockTruncation tr{6, 1};
    const SparseMatrixXcd sa = stacked_annihilators(tr, VacuumKind::A);
    const SparseMatrixXcd sb = stacked_annihilators(tr, VacuumKind::B);
    const SparseMatrixXcd pin = mode2_parity(tr);
    // B_j† = ±P A_j P, so the Gram matrices are parity-conjugate.
    const Eigen::MatrixXcd ga = Eigen::MatrixXcd(sa).adjoint() * Eigen::MatrixXcd(sa);
    const Eigen::MatrixXcd gb = Eigen::MatrixXcd(sb).adjoint() * Eigen::MatrixXcd(sb);
    CHECK((Eigen::MatrixXcd(pin) * ga * Eigen::MatrixXcd(pin) - gb).cwiseAbs().maxCoeff() < 1e-13);
  }

  SUBCASE("dense and iterative paths agree") {
    const auto d = vacuum_residual_min(p, {16, 2}, SolverPath::dense);
    const auto it = vacuum_residual_min(p, {16, 2}, SolverPath::iterative);
    CHECK(d.solver == "dense-svd");
    CHECK(it.solver == "subspace-iteration");
    CHECK(std::abs(d.sigma_min - it.sigma_min) < 1e-9);
    CHECK(std::abs(std::abs(d.minimizer.dot(it.minimizer)) - 1.0) < 1e-8);
  }

  SUBCASE("overlap with the regularized diagonal") {
    const FockTruncation tr{16, 2};
    const auto a = vacuum_residual_min(p, tr);
    CHECK(regularized_diagonal_overlap(a, tr) > 0.99);
  }

  SUBCASE("errors") {
    CHECK_THROWS_AS(vacuum_residual_min({1.0, 4.0, 1.0}, {4, 1}), UnsupportedRegime);
    CHECK_THROWS_AS(vacuum_residual_min({-1.0, 0.4, 1.0}, {4, 1}), ConfigError);
  }
}

TEST_CASE("power-law fit") {
  const auto f = fit_power_law({1, 2, 4, 8}, {3, 1.5, 0.75, 0.375});
  CHECK(f.exponent == doctest::Approx(-1.0));
  CHECK(f.prefactor == doctest::Approx(3.0));
  CHECK_THROWS_AS(fit_power_law({1}, {1}), FitError);
  CHECK_THROWS_AS(fit_power_law({1, 2}, {1, -1}), FitError);
}
