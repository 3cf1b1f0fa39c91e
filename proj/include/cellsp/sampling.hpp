#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "cellsp/errors.hpp"
#include "cellsp/types.hpp"

namespace cellsp {

struct SampleSet {
  std::vector<Index> indices; // edge rows, in selection order
  Index bandwidth = 0;        // number of retained basis columns
};

namespace detail {

struct GramScore {
  Index rank = 0;
  double logPseudoDet = 0; // log of the product of nonzero eigenvalues

  bool betterThan(const GramScore& other) const {
    if (rank != other.rank) return rank > other.rank;
    return logPseudoDet > other.logPseudoDet;
  }
};

template <typename Scalar>
GramScore scoreGram(const MatrixX<Scalar>& gram) {
  Eigen::SelfAdjointEigenSolver<MatrixX<Scalar>> solver(gram);
  const VectorX<Scalar> lambda = solver.eigenvalues();
  const Scalar top = lambda.size() ? lambda[lambda.size() - 1] : Scalar(0);
  const Scalar cutoff =
      Scalar(lambda.size()) * std::numeric_limits<Scalar>::epsilon() * std::max(top, Scalar(0));
  GramScore score;
  for (Index i = 0; i < lambda.size(); ++i) {
    if (lambda[i] > cutoff && lambda[i] > Scalar(0)) {
      ++score.rank;
      score.logPseudoDet += std::log(double(lambda[i]));
    }
  }
  return score;
}

} // namespace detail

// Greedy row selection maximizing the pseudo-determinant of the Gram matrix
// of selected rows; rank dominates so the selection reaches invertibility as
// fast as the rows allow. Ties go to the lowest edge index.
template <typename Scalar>
SampleSet maxdetSelect(const MatrixX<Scalar>& bandlimitedBasis, Index sampleCount) {
  const Index e = bandlimitedBasis.rows();
  const Index f = bandlimitedBasis.cols();
  if (f < 1) throw ArgumentError("bandlimited basis has no columns");
  if (sampleCount < 1) throw ArgumentError("sample count must be at least 1");
  if (sampleCount > e)
    throw ArgumentError("sample count exceeds the number of edges (" + std::to_string(e) + ")");
  SampleSet samples;
  samples.bandwidth = f;
  std::vector<char> used(static_cast<std::size_t>(e), 0);
  MatrixX<Scalar> gram = MatrixX<Scalar>::Zero(f, f);
  for (Index step = 0; step < sampleCount; ++step) {
    Index bestRow = -1;
    detail::GramScore bestScore;
    for (Index i = 0; i < e; ++i) {
      if (used[static_cast<std::size_t>(i)]) continue;
      const MatrixX<Scalar> trial =
          gram + bandlimitedBasis.row(i).transpose() * bandlimitedBasis.row(i);
      const detail::GramScore score = detail::scoreGram(trial);
      if (bestRow < 0 || score.betterThan(bestScore)) {
        bestRow = i;
        bestScore = score;
      }
    }
    used[static_cast<std::size_t>(bestRow)] = 1;
    samples.indices.push_back(bestRow);
    gram += bandlimitedBasis.row(bestRow).transpose() * bandlimitedBasis.row(bestRow);
  }
  return samples;
}

// Least-squares fit of bandlimited coefficients to the sampled values, then
// synthesis over all edges. Exact for noiseless bandlimited signals.
template <typename Scalar>
VectorX<Scalar> reconstructFromSamples(const SampleSet& samples,
                                       const VectorX<Scalar>& sampledValues,
                                       const MatrixX<Scalar>& bandlimitedBasis) {
  const Index m = static_cast<Index>(samples.indices.size());
  const Index f = bandlimitedBasis.cols();
  if (sampledValues.size() != m)
    throw ShapeError("reconstructFromSamples: sample count does not match values");
  std::vector<char> seen(static_cast<std::size_t>(bandlimitedBasis.rows()), 0);
  for (Index i : samples.indices) {
    if (i < 0 || i >= bandlimitedBasis.rows())
      throw ArgumentError("sample index " + std::to_string(i) + " out of range");
    if (seen[static_cast<std::size_t>(i)])
      throw ArgumentError("duplicate sample index " + std::to_string(i));
    seen[static_cast<std::size_t>(i)] = 1;
  }
  if (m < f)
    throw IllPosedSamplingError("need at least " + std::to_string(f) + " samples, got " +
                                std::to_string(m));
  MatrixX<Scalar> sub(m, f);
  for (Index k = 0; k < m; ++k) sub.row(k) = bandlimitedBasis.row(samples.indices[static_cast<std::size_t>(k)]);
  Eigen::JacobiSVD<MatrixX<Scalar>> svd(sub, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const VectorX<Scalar> sigma = svd.singularValues();
  const Scalar cutoff = Scalar(std::max(m, f)) * std::numeric_limits<Scalar>::epsilon() *
                        (sigma.size() ? sigma[0] : Scalar(0));
  Index rank = 0;
  for (Index i = 0; i < sigma.size(); ++i)
    if (sigma[i] > cutoff) ++rank;
  if (rank < f)
    throw IllPosedSamplingError("sampled basis rows are rank deficient (" + std::to_string(rank) +
                                " < " + std::to_string(f) + "); add samples");
  return bandlimitedBasis * svd.solve(sampledValues);
}

} // namespace cellsp
