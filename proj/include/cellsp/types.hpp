#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace cellsp {

using Index = Eigen::Index;

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

// Signed vertex-edge / edge-polygon incidence, always integer valued.
using IncidenceMatrix = Eigen::SparseMatrix<int>;

// Columns are independent edge signals of a common complex.
template <typename Scalar>
using EdgeSignalBatch = MatrixX<Scalar>;

} // namespace cellsp
