#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "cellsp/errors.hpp"
#include "cellsp/types.hpp"

namespace cellsp {

template <typename Scalar>
struct EigenDecomposition {
  VectorX<Scalar> eigenvalues;  // ascending; entries below the zero tolerance snapped to 0
  MatrixX<Scalar> eigenvectors; // orthonormal columns
};

// Default numerical-zero cutoff: 1e-8 relative to the dominant eigenvalue,
// floored at 100 machine epsilons so low-precision scalars still snap their
// kernel eigenvalues.
template <typename Scalar>
Scalar defaultZeroTolerance(const VectorX<Scalar>& eigenvalues) {
  const Scalar top = eigenvalues.size() ? eigenvalues.cwiseAbs().maxCoeff() : Scalar(0);
  const Scalar rel = std::max(Scalar(1e-8), Scalar(100) * std::numeric_limits<Scalar>::epsilon());
  return rel * top;
}

// Symmetric eigendecomposition with deterministic sign convention: in each
// column the entry of largest magnitude (ties: lowest row) is made positive.
// zeroTolerance < 0 requests the default cutoff.
template <typename Derived>
EigenDecomposition<typename Derived::Scalar> eigendecompose(
    const Eigen::MatrixBase<Derived>& m,
    typename Derived::Scalar zeroTolerance = typename Derived::Scalar(-1)) {
  using Scalar = typename Derived::Scalar;
  if (m.rows() != m.cols()) throw ShapeError("eigendecompose: matrix is not square");
  EigenDecomposition<Scalar> out;
  if (m.rows() == 0) {
    out.eigenvalues.resize(0);
    out.eigenvectors.resize(0, 0);
    return out;
  }
  const MatrixX<Scalar> dense = m;
  const Scalar scale = dense.cwiseAbs().maxCoeff();
  const Scalar asym = (dense - dense.transpose()).cwiseAbs().maxCoeff();
  if (asym > Scalar(1e-12) * std::max(scale, Scalar(1)))
    throw ShapeError("eigendecompose: matrix is not symmetric");
  const MatrixX<Scalar> sym = (dense + dense.transpose()) / Scalar(2);
  Eigen::SelfAdjointEigenSolver<MatrixX<Scalar>> solver(sym);
  if (solver.info() != Eigen::Success)
    throw ConsistencyError("eigendecompose: solver did not converge");
  out.eigenvalues = solver.eigenvalues();
  out.eigenvectors = solver.eigenvectors();
  const Scalar tol =
      zeroTolerance < Scalar(0) ? defaultZeroTolerance(out.eigenvalues) : zeroTolerance;
  for (Index i = 0; i < out.eigenvalues.size(); ++i)
    if (std::abs(out.eigenvalues[i]) < tol) out.eigenvalues[i] = Scalar(0);
  for (Index j = 0; j < out.eigenvectors.cols(); ++j) {
    Index peak = 0;
    out.eigenvectors.col(j).cwiseAbs().maxCoeff(&peak);
    if (out.eigenvectors(peak, j) < Scalar(0)) out.eigenvectors.col(j) = -out.eigenvectors.col(j);
  }
  return out;
}

} // namespace cellsp
