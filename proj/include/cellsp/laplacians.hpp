#pragma once

#include "cellsp/errors.hpp"
#include "cellsp/incidence.hpp"
#include "cellsp/types.hpp"

namespace cellsp {

template <typename Scalar = double>
struct LaplacianSet {
  MatrixX<Scalar> l0;    // V x V, B1 B1^T
  MatrixX<Scalar> l1Low; // E x E, B1^T B1
  MatrixX<Scalar> l1Up;  // E x E, B2 B2^T
  MatrixX<Scalar> l1;    // l1Low + l1Up
  MatrixX<Scalar> l2;    // P x P, B2^T B2
};

using LaplacianSetd = LaplacianSet<double>;

template <typename Scalar = double>
LaplacianSet<Scalar> buildLaplacians(const IncidenceMatrix& b1, const IncidenceMatrix& b2) {
  if (!validateChainProperty(b1, b2))
    throw ConsistencyError("B1*B2 != 0: incidence matrices do not form a chain complex");
  const MatrixX<Scalar> d1 = MatrixX<Scalar>(b1.cast<Scalar>());
  const MatrixX<Scalar> d2 = MatrixX<Scalar>(b2.cast<Scalar>());
  LaplacianSet<Scalar> lap;
  lap.l0 = d1 * d1.transpose();
  lap.l1Low = d1.transpose() * d1;
  lap.l1Up = d2 * d2.transpose();
  lap.l1 = lap.l1Low + lap.l1Up;
  lap.l2 = d2.transpose() * d2;
  return lap;
}

} // namespace cellsp
