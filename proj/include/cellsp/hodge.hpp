#pragma once

#include <Eigen/QR>

#include "cellsp/errors.hpp"
#include "cellsp/incidence.hpp"
#include "cellsp/types.hpp"

namespace cellsp {

template <typename Scalar = double>
struct HodgeComponents {
  VectorX<Scalar> irrotational; // projection onto img(B1^T)
  VectorX<Scalar> solenoidal;   // projection onto img(B2)
  VectorX<Scalar> harmonic;     // residual, in ker(L1)
};

using HodgeComponentsd = HodgeComponents<double>;

namespace detail {

// Least-squares projector onto the column space of a (possibly rank-deficient) matrix.
template <typename Scalar>
MatrixX<Scalar> projectOntoColumns(const MatrixX<Scalar>& a, const MatrixX<Scalar>& rhs) {
  if (a.cols() == 0) return MatrixX<Scalar>::Zero(rhs.rows(), rhs.cols());
  Eigen::CompleteOrthogonalDecomposition<MatrixX<Scalar>> cod(a);
  return a * cod.solve(rhs);
}

} // namespace detail

template <typename Scalar, typename Derived>
void hodgeDecomposeBatch(const IncidenceMatrix& b1, const IncidenceMatrix& b2,
                         const Eigen::MatrixBase<Derived>& batch, MatrixX<Scalar>& irrotational,
                         MatrixX<Scalar>& solenoidal, MatrixX<Scalar>& harmonic) {
  if (!validateChainProperty(b1, b2))
    throw ConsistencyError("B1*B2 != 0: incidence matrices do not form a chain complex");
  if (batch.rows() != b1.cols()) throw ShapeError("hodge decomposition: signal length != edge count");
  const MatrixX<Scalar> dense = batch;
  const MatrixX<Scalar> gradients = MatrixX<Scalar>(b1.cast<Scalar>()).transpose();
  const MatrixX<Scalar> curls = MatrixX<Scalar>(b2.cast<Scalar>());
  irrotational = detail::projectOntoColumns<Scalar>(gradients, dense);
  solenoidal = detail::projectOntoColumns<Scalar>(curls, dense);
  harmonic = dense - irrotational - solenoidal;
}

template <typename Derived>
HodgeComponents<typename Derived::Scalar> hodgeDecompose(const IncidenceMatrix& b1,
                                                         const IncidenceMatrix& b2,
                                                         const Eigen::MatrixBase<Derived>& signal) {
  using Scalar = typename Derived::Scalar;
  if (signal.cols() != 1) throw ShapeError("hodgeDecompose: expected a single column");
  MatrixX<Scalar> irr, sol, harm;
  hodgeDecomposeBatch<Scalar>(b1, b2, signal, irr, sol, harm);
  HodgeComponents<Scalar> out;
  out.irrotational = irr.col(0);
  out.solenoidal = sol.col(0);
  out.harmonic = harm.col(0);
  return out;
}

} // namespace cellsp
