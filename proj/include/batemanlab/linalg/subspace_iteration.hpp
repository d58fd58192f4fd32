#pragma once

// Smallest eigenpair of a sparse Hermitian positive-definite pencil
// K v = λ M v (M diagonal, positive) by shift-free inverse subspace iteration
// with Rayleigh–Ritz extraction.

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>
#include <random>
#include <sstream>

#include "batemanlab/errors.hpp"

namespace batemanlab::linalg {

template <class Scalar>
struct Eigenpair {
  double value = 0;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> vector;  // M-normalized
  int iterations = 0;
  double relative_residual = 0;
};

struct SubspaceOptions {
  int block = 6;
  int max_iterations = 500;
  double tolerance = 1e-10;  // on ‖Kv − λMv‖ / (λ‖Mv‖)
  unsigned seed = 12345;
};

template <class Scalar>
Eigenpair<Scalar> smallest_eigenpair(const Eigen::SparseMatrix<Scalar>& K, const Eigen::VectorXd& mass,
                                     const SubspaceOptions& opt = {}) {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  const Eigen::Index n = K.rows();
  const Eigen::Index b = std::min<Eigen::Index>(opt.block, n);

  Eigen::SimplicialLDLT<Eigen::SparseMatrix<Scalar>> solver(K);
  if (solver.info() != Eigen::Success) throw NumericError("sparse factorization of the residual operator failed");

  std::mt19937 rng(opt.seed);
  std::normal_distribution<double> normal;
  Matrix X(n, b);
  for (Eigen::Index j = 0; j < b; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) X(i, j) = Scalar(normal(rng));
  }

  Eigenpair<Scalar> out;
  double last_residual = 0;
  for (int it = 1; it <= opt.max_iterations; ++it) {
    Matrix Y = solver.solve(mass.asDiagonal() * X);
    // M-orthonormalize through the small Gram matrix.
    const Matrix G = Y.adjoint() * mass.asDiagonal() * Y;
    Eigen::SelfAdjointEigenSolver<Matrix> gram(G);
    const Eigen::VectorXd gvals = gram.eigenvalues().cwiseMax(1e-300);
    Y = Y * gram.eigenvectors() * gvals.cwiseSqrt().cwiseInverse().asDiagonal();

    const Matrix Kr = Y.adjoint() * (K * Y);
    Eigen::SelfAdjointEigenSolver<Matrix> ritz(Matrix((Kr + Kr.adjoint()) / 2.0));
    X = Y * ritz.eigenvectors();

    const double lambda = ritz.eigenvalues()[0];
    const Vector v = X.col(0);
    const Vector r = K * v - Scalar(lambda) * (mass.asDiagonal() * v);
    const Vector mv = mass.asDiagonal() * v;
    last_residual = r.norm() / std::max(std::abs(lambda) * mv.norm(), 1e-300);
    if (last_residual < opt.tolerance) {
      out.value = lambda;
      out.vector = v;
      out.iterations = it;
      out.relative_residual = last_residual;
      return out;
    }
  }
  std::ostringstream os;
  os << "subspace iteration did not converge in " << opt.max_iterations
     << " iterations (relative residual " << last_residual << ", size " << n << ")";
  throw NumericError(os.str());
}

}  // namespace batemanlab::linalg
