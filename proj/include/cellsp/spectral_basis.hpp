#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

#include <Eigen/QR>

#include "cellsp/eigendecompose.hpp"
#include "cellsp/errors.hpp"
#include "cellsp/laplacians.hpp"
#include "cellsp/types.hpp"

namespace cellsp {

enum class ComponentLabel { Harmonic, Irrotational, Solenoidal };

inline const char* componentName(ComponentLabel label) {
  switch (label) {
    case ComponentLabel::Harmonic: return "harmonic";
    case ComponentLabel::Irrotational: return "irrotational";
    case ComponentLabel::Solenoidal: return "solenoidal";
  }
  return "?";
}

// Orthonormal eigenbasis of L1 with every column a pure subspace member.
// Columns are sorted by (eigenvalue, harmonic < irrotational < solenoidal).
template <typename Scalar = double>
struct SpectralBasis {
  VectorX<Scalar> eigenvalues;
  MatrixX<Scalar> eigenvectors;
  std::vector<ComponentLabel> partition;
  Scalar zeroTolerance = Scalar(0);

  Index count(ComponentLabel label) const {
    return static_cast<Index>(std::count(partition.begin(), partition.end(), label));
  }

  MatrixX<Scalar> columns(ComponentLabel label) const {
    MatrixX<Scalar> out(eigenvectors.rows(), count(label));
    Index k = 0;
    for (std::size_t j = 0; j < partition.size(); ++j)
      if (partition[j] == label) out.col(k++) = eigenvectors.col(static_cast<Index>(j));
    return out;
  }

  VectorX<Scalar> eigenvaluesOf(ComponentLabel label) const {
    VectorX<Scalar> out(count(label));
    Index k = 0;
    for (std::size_t j = 0; j < partition.size(); ++j)
      if (partition[j] == label) out[k++] = eigenvalues[static_cast<Index>(j)];
    return out;
  }
};

using SpectralBasisd = SpectralBasis<double>;

// Splits the edge space into irrotational/solenoidal/harmonic columns by
// eigendecomposing l1Low and l1Up separately and merging, so multiple
// eigenvalues of L1 never mix labels. Harmonic columns come from the kernel
// of L1, re-orthogonalized against the other two sets.
template <typename Scalar>
SpectralBasis<Scalar> partitionBasis(const LaplacianSet<Scalar>& lap,
                                     Scalar zeroTolerance = Scalar(-1)) {
  const Index e = lap.l1.rows();
  SpectralBasis<Scalar> basis;
  if (e == 0) {
    basis.eigenvalues.resize(0);
    basis.eigenvectors.resize(0, 0);
    basis.zeroTolerance = Scalar(0);
    return basis;
  }
  const EigenDecomposition<Scalar> full = eigendecompose(lap.l1, zeroTolerance);
  const Scalar tol =
      zeroTolerance < Scalar(0) ? defaultZeroTolerance(full.eigenvalues) : zeroTolerance;
  const EigenDecomposition<Scalar> low = eigendecompose(lap.l1Low, tol);
  const EigenDecomposition<Scalar> up = eigendecompose(lap.l1Up, tol);

  struct Column {
    Scalar eigenvalue;
    int labelRank; // harmonic 0, irrotational 1, solenoidal 2
    Index source;
  };
  std::vector<Column> order;

  Index nIrr = 0, nSol = 0;
  for (Index j = 0; j < e; ++j) {
    if (low.eigenvalues[j] != Scalar(0)) {
      order.push_back({low.eigenvalues[j], 1, j});
      ++nIrr;
    }
    if (up.eigenvalues[j] != Scalar(0)) {
      order.push_back({up.eigenvalues[j], 2, j});
      ++nSol;
    }
  }
  const Index nHarm = e - nIrr - nSol;
  if (nHarm < 0)
    throw ConsistencyError("rank(B1) + rank(B2) exceeds the edge count; "
                           "the zero tolerance is too small for this input");

  MatrixX<Scalar> harmonic(e, nHarm);
  if (nHarm > 0) {
    for (Index k = 0; k < nHarm; ++k) {
      if (full.eigenvalues[k] != Scalar(0))
        throw ConsistencyError("kernel of L1 is smaller than E - rank(B1) - rank(B2)");
      harmonic.col(k) = full.eigenvectors.col(k);
    }
    // Clean residual leakage into the nonzero eigenspaces, then restore orthonormality.
    for (Index j = 0; j < e; ++j) {
      if (low.eigenvalues[j] != Scalar(0)) {
        const VectorX<Scalar> u = low.eigenvectors.col(j);
        harmonic -= u * (u.transpose() * harmonic);
      }
      if (up.eigenvalues[j] != Scalar(0)) {
        const VectorX<Scalar> u = up.eigenvectors.col(j);
        harmonic -= u * (u.transpose() * harmonic);
      }
    }
    const Eigen::HouseholderQR<MatrixX<Scalar>> qr(harmonic);
    harmonic = qr.householderQ() * MatrixX<Scalar>::Identity(e, nHarm);
    for (Index k = 0; k < nHarm; ++k) {
      Index peak = 0;
      harmonic.col(k).cwiseAbs().maxCoeff(&peak);
      if (harmonic(peak, k) < Scalar(0)) harmonic.col(k) = -harmonic.col(k);
      order.push_back({Scalar(0), 0, k});
    }
  }

  std::sort(order.begin(), order.end(), [](const Column& a, const Column& b) {
    if (a.eigenvalue != b.eigenvalue) return a.eigenvalue < b.eigenvalue;
    if (a.labelRank != b.labelRank) return a.labelRank < b.labelRank;
    return a.source < b.source;
  });

  basis.eigenvalues.resize(e);
  basis.eigenvectors.resize(e, e);
  basis.partition.resize(static_cast<std::size_t>(e));
  basis.zeroTolerance = tol;
  for (Index j = 0; j < e; ++j) {
    const Column& c = order[static_cast<std::size_t>(j)];
    basis.eigenvalues[j] = c.eigenvalue;
    switch (c.labelRank) {
      case 0:
        basis.eigenvectors.col(j) = harmonic.col(c.source);
        basis.partition[static_cast<std::size_t>(j)] = ComponentLabel::Harmonic;
        break;
      case 1:
        basis.eigenvectors.col(j) = low.eigenvectors.col(c.source);
        basis.partition[static_cast<std::size_t>(j)] = ComponentLabel::Irrotational;
        break;
      default:
        basis.eigenvectors.col(j) = up.eigenvectors.col(c.source);
        basis.partition[static_cast<std::size_t>(j)] = ComponentLabel::Solenoidal;
    }
  }
  return basis;
}

template <typename Scalar, typename Derived>
MatrixX<Scalar> cft(const SpectralBasis<Scalar>& basis, const Eigen::MatrixBase<Derived>& signal) {
  if (signal.rows() != basis.eigenvectors.rows())
    throw ShapeError("cft: signal length does not match the basis");
  return basis.eigenvectors.transpose() * signal;
}

template <typename Scalar, typename Derived>
MatrixX<Scalar> inverseCft(const SpectralBasis<Scalar>& basis,
                           const Eigen::MatrixBase<Derived>& coefficients) {
  if (coefficients.rows() != basis.eigenvectors.cols())
    throw ShapeError("inverseCft: coefficient length does not match the basis");
  return basis.eigenvectors * coefficients;
}

} // namespace cellsp
