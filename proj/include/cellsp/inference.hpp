#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <Eigen/QR>

#include "cellsp/cycle_enum.hpp"
#include "cellsp/errors.hpp"
#include "cellsp/spectral_basis.hpp"
#include "cellsp/types.hpp"

namespace cellsp {

template <typename Scalar = double>
struct InferenceResult {
  std::vector<Index> selected;  // candidate indices, ordered by (score, candidate index)
  VectorX<Scalar> scores;       // circulation energy d_n per candidate
  IncidenceMatrix b2Hat;        // the selected candidate columns
  Scalar energyRatio = Scalar(0);
  bool usedB2Zero = false;
};

using InferenceResultd = InferenceResult<double>;

// Basis of the 1-skeleton alone: irrotational columns from l1Low, everything
// else harmonic. Used whenever B2 is the unknown.
template <typename Scalar = double>
SpectralBasis<Scalar> graphOnlyBasis(const IncidenceMatrix& b1,
                                     Scalar zeroTolerance = Scalar(-1)) {
  const IncidenceMatrix emptyB2(b1.cols(), 0);
  return partitionBasis(buildLaplacians<Scalar>(b1, emptyB2), zeroTolerance);
}

// Y_sH = (I - U_irr U_irr^T) Y.
template <typename Scalar>
EdgeSignalBatch<Scalar> projectOutIrrotational(const EdgeSignalBatch<Scalar>& batch,
                                               const SpectralBasis<Scalar>& basis) {
  if (batch.rows() != basis.eigenvectors.rows())
    throw ShapeError("projectOutIrrotational: signal length does not match the basis");
  const MatrixX<Scalar> irr = basis.columns(ComponentLabel::Irrotational);
  return batch - irr * (irr.transpose() * batch);
}

// True iff the energy surviving the projection is negligible and B2 should be
// taken as empty: ||Y_sH||_F / ||Y||_F < threshold.
template <typename Scalar>
bool energyTest(const EdgeSignalBatch<Scalar>& batch, const EdgeSignalBatch<Scalar>& projected,
                Scalar threshold) {
  if (threshold < Scalar(0)) throw ArgumentError("energy threshold must be nonnegative");
  const Scalar total = batch.norm();
  if (total == Scalar(0)) throw DegenerateInputError("energy test: batch has zero norm");
  return projected.norm() / total < threshold;
}

// d_n = sum_i (b_n^T y_sH(i))^2.
template <typename Scalar>
VectorX<Scalar> scoreCells(const EdgeSignalBatch<Scalar>& projected,
                           const CandidateCellSet& candidates) {
  if (projected.rows() != candidates.columns.rows())
    throw ShapeError("scoreCells: signal length does not match the candidate columns");
  const MatrixX<Scalar> circulation =
      MatrixX<Scalar>(candidates.columns.cast<Scalar>()).transpose() * projected;
  return circulation.rowwise().squaredNorm();
}

// Indices of the q smallest scores, ties to the smaller candidate index.
template <typename Scalar>
std::vector<Index> selectSmallestScores(const VectorX<Scalar>& scores, Index q) {
  std::vector<Index> order(static_cast<std::size_t>(scores.size()));
  std::iota(order.begin(), order.end(), Index(0));
  std::sort(order.begin(), order.end(), [&](Index a, Index b) {
    return scores[a] != scores[b] ? scores[a] < scores[b] : a < b;
  });
  order.resize(static_cast<std::size_t>(q));
  return order;
}

namespace detail {

inline IncidenceMatrix gatherColumns(const IncidenceMatrix& columns,
                                     const std::vector<Index>& selected) {
  IncidenceMatrix out(columns.rows(), static_cast<Index>(selected.size()));
  std::vector<Eigen::Triplet<int>> triplets;
  for (std::size_t k = 0; k < selected.size(); ++k)
    for (IncidenceMatrix::InnerIterator it(columns, selected[k]); it; ++it)
      triplets.emplace_back(it.row(), static_cast<Index>(k), it.value());
  out.setFromTriplets(triplets.begin(), triplets.end());
  return out;
}

} // namespace detail

// Closed-form solution of the cell-selection problem: the objective is a
// separable sum of the d_n, so keeping the q* smallest is globally optimal.
template <typename Scalar>
InferenceResult<Scalar> inferB2(const EdgeSignalBatch<Scalar>& batch, const IncidenceMatrix& b1,
                                const CandidateCellSet& candidates, Index qStar,
                                Scalar energyThreshold = Scalar(0.02)) {
  const Index numCandidates = candidates.columns.cols();
  if (qStar < 0 || qStar > numCandidates)
    throw ArgumentError("q* must lie in [0, " + std::to_string(numCandidates) + "]");
  const SpectralBasis<Scalar> basis = graphOnlyBasis<Scalar>(b1);
  const EdgeSignalBatch<Scalar> projected = projectOutIrrotational(batch, basis);
  InferenceResult<Scalar> result;
  result.scores = scoreCells(projected, candidates);
  result.usedB2Zero = energyTest(batch, projected, energyThreshold);
  result.energyRatio = projected.norm() / batch.norm();
  if (!result.usedB2Zero) result.selected = selectSmallestScores(result.scores, qStar);
  result.b2Hat = detail::gatherColumns(candidates.columns, result.selected);
  return result;
}

// Holdout validation of q*: fit scores on the leading columns, evaluate the
// energy of the trailing columns left outside img(B1^T) + img(b2Hat).
// Within a relative tolerance of 1e-10 of the holdout energy, ties go to the
// smaller q.
template <typename Scalar>
Index selectQStar(const EdgeSignalBatch<Scalar>& batch, const IncidenceMatrix& b1,
                  const CandidateCellSet& candidates, Scalar holdoutFraction,
                  std::vector<Index> grid) {
  const Index m = batch.cols();
  if (m < 2) throw ArgumentError("q* validation needs at least 2 signal columns");
  if (!(holdoutFraction > Scalar(0) && holdoutFraction < Scalar(1)))
    throw ArgumentError("holdout fraction must lie in (0, 1)");
  if (grid.empty()) throw ArgumentError("q* grid is empty");
  const Index numCandidates = candidates.columns.cols();
  for (Index q : grid)
    if (q < 0 || q > numCandidates)
      throw ArgumentError("q* grid value " + std::to_string(q) + " outside [0, " +
                          std::to_string(numCandidates) + "]");
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  const Index holdoutCount = static_cast<Index>(std::floor(double(m) * double(holdoutFraction)));
  const Index fitCount = m - holdoutCount;
  if (holdoutCount == 0) throw ArgumentError("holdout split is empty");
  if (fitCount == 0) throw ArgumentError("fit split is empty");
  const EdgeSignalBatch<Scalar> fit = batch.leftCols(fitCount);
  const EdgeSignalBatch<Scalar> holdout = batch.rightCols(holdoutCount);

  const SpectralBasis<Scalar> basis = graphOnlyBasis<Scalar>(b1);
  const VectorX<Scalar> scores = scoreCells(projectOutIrrotational(fit, basis), candidates);
  const std::vector<Index> order = selectSmallestScores(scores, numCandidates);

  const MatrixX<Scalar> gradients = MatrixX<Scalar>(b1.cast<Scalar>()).transpose();
  const MatrixX<Scalar> allColumns = MatrixX<Scalar>(candidates.columns.cast<Scalar>());
  const Scalar holdoutEnergy = holdout.squaredNorm();
  const Scalar tieTolerance = Scalar(1e-10) * holdoutEnergy;

  Scalar best = Scalar(0);
  Index bestQ = -1;
  std::vector<Scalar> residuals;
  residuals.reserve(grid.size());
  for (Index q : grid) {
    MatrixX<Scalar> span(gradients.rows(), gradients.cols() + q);
    span.leftCols(gradients.cols()) = gradients;
    for (Index k = 0; k < q; ++k)
      span.col(gradients.cols() + k) = allColumns.col(order[static_cast<std::size_t>(k)]);
    Eigen::CompleteOrthogonalDecomposition<MatrixX<Scalar>> cod(span);
    const Scalar residual = (holdout - span * cod.solve(holdout)).squaredNorm();
    residuals.push_back(residual);
    if (bestQ < 0 || residual < best) {
      best = residual;
      bestQ = q;
    }
  }
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (residuals[i] <= best + tieTolerance) return grid[i];
  return bestQ;
}

} // namespace cellsp
