#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Cholesky>

#include "cellsp/errors.hpp"
#include "cellsp/types.hpp"

namespace cellsp {

struct BasisPursuitOptions {
  double supportToleranceRel = 1e-6; // support cutoff, relative to ||s||_inf
  double solverTolerance = 1e-8;     // splitting-scheme residual target, relative to max(1, ||y||)
  int maxIterations = 10000;
  double rho = 1.0;
  double orthonormalTolerance = 1e-8;
};

template <typename Scalar = double>
struct SparseCode {
  VectorX<Scalar> coefficients;
  std::vector<Index> support; // entries with |s_i| above the declared tolerance
  Scalar residual = Scalar(0);
  Scalar epsilon = Scalar(0);
};

using SparseCoded = SparseCode<double>;

namespace detail {

template <typename Scalar>
VectorX<Scalar> softThreshold(const VectorX<Scalar>& v, Scalar tau) {
  return v.unaryExpr([tau](Scalar x) {
    const Scalar m = std::abs(x) - tau;
    return m > Scalar(0) ? (x > Scalar(0) ? m : -m) : Scalar(0);
  });
}

// Smallest tau >= 0 with sum_i min(|c_i|, tau)^2 = epsilon^2: walk the sorted
// magnitudes and solve the active quadratic segment.
template <typename Scalar>
Scalar exactThreshold(const VectorX<Scalar>& c, Scalar epsilon) {
  if (epsilon <= Scalar(0)) return Scalar(0);
  const Index n = c.size();
  std::vector<Scalar> sorted(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) sorted[static_cast<std::size_t>(i)] = std::abs(c[i]);
  std::sort(sorted.begin(), sorted.end());
  const Scalar target = epsilon * epsilon;
  Scalar below = Scalar(0); // sum of squares of magnitudes not exceeding tau
  for (Index k = 0; k < n; ++k) {
    const Scalar upper = sorted[static_cast<std::size_t>(k)];
    const Scalar atUpper = below + Scalar(n - k) * upper * upper;
    if (target <= atUpper) return std::sqrt((target - below) / Scalar(n - k));
    below += upper * upper;
  }
  return sorted.empty() ? Scalar(0) : sorted.back();
}

// Splitting iteration for min ||s||_1 s.t. ||y - As||_2 <= eps with auxiliary
// z = s and r = y - As. Returns the shrunk iterate, which is exactly sparse.
template <typename Scalar>
VectorX<Scalar> splittingSolve(const VectorX<Scalar>& y, const MatrixX<Scalar>& a, Scalar epsilon,
                               const BasisPursuitOptions& opts) {
  const Index f = a.cols();
  const Scalar rho = Scalar(opts.rho);
  const Scalar tolerance =
      Scalar(opts.solverTolerance) * std::max(Scalar(1), Scalar(y.norm()));
  const Eigen::LLT<MatrixX<Scalar>> normal(MatrixX<Scalar>::Identity(f, f) +
                                           a.transpose() * a);
  VectorX<Scalar> s = VectorX<Scalar>::Zero(f);
  VectorX<Scalar> z = s, u1 = s;
  VectorX<Scalar> r = VectorX<Scalar>::Zero(y.size());
  VectorX<Scalar> u2 = r;
  for (int iter = 0; iter < opts.maxIterations; ++iter) {
    s = normal.solve((z - u1) + a.transpose() * (y - r - u2));
    const VectorX<Scalar> zOld = z;
    const VectorX<Scalar> rOld = r;
    z = softThreshold<Scalar>(s + u1, Scalar(1) / rho);
    VectorX<Scalar> ball = y - a * s - u2;
    const Scalar ballNorm = ball.norm();
    if (ballNorm > epsilon) ball *= epsilon / ballNorm;
    r = ball;
    u1 += s - z;
    u2 += a * s + r - y;
    const Scalar primal = std::sqrt((s - z).squaredNorm() + (a * s + r - y).squaredNorm());
    const Scalar dual =
        rho * std::sqrt((z - zOld).squaredNorm() + (a.transpose() * (r - rOld)).squaredNorm());
    if (primal <= tolerance && dual <= tolerance) break;
  }
  return z;
}

} // namespace detail

// min ||s||_1 s.t. ||y - Vs||_2 <= epsilon. Orthonormal square bases are
// solved in closed form by exact soft-thresholding of V^T y; other shapes go
// through the splitting scheme (which may stop at maxIterations on hard
// instances; the returned residual is always the truth).
template <typename Scalar>
SparseCode<Scalar> basisPursuit(const VectorX<Scalar>& y, const MatrixX<Scalar>& basis,
                                Scalar epsilon, const BasisPursuitOptions& opts = {}) {
  if (epsilon < Scalar(0)) throw ArgumentError("epsilon must be nonnegative");
  if (y.size() != basis.rows()) throw ShapeError("basisPursuit: signal/basis size mismatch");
  SparseCode<Scalar> code;
  code.epsilon = epsilon;
  const Scalar yNorm = y.norm();
  if (epsilon >= yNorm) { // the zero code is feasible and has minimal l1 norm
    code.coefficients = VectorX<Scalar>::Zero(basis.cols());
    code.residual = yNorm;
    return code;
  }
  const bool orthonormalSquare =
      basis.rows() == basis.cols() &&
      (basis.transpose() * basis - MatrixX<Scalar>::Identity(basis.cols(), basis.cols()))
              .cwiseAbs()
              .maxCoeff() <= Scalar(opts.orthonormalTolerance);
  if (orthonormalSquare) {
    const VectorX<Scalar> c = basis.transpose() * y;
    const Scalar tau = detail::exactThreshold(c, epsilon);
    code.coefficients = detail::softThreshold(c, tau);
  } else {
    code.coefficients = detail::splittingSolve(y, basis, epsilon, opts);
  }
  code.residual = (y - basis * code.coefficients).norm();
  const Scalar peak = code.coefficients.size() ? code.coefficients.cwiseAbs().maxCoeff() : Scalar(0);
  const Scalar cutoff = Scalar(opts.supportToleranceRel) * peak;
  for (Index i = 0; i < code.coefficients.size(); ++i)
    if (peak > Scalar(0) && std::abs(code.coefficients[i]) > cutoff) code.support.push_back(i);
  return code;
}

template <typename Scalar = double>
struct SparsityCurvePoint {
  Scalar epsilon = Scalar(0);
  Scalar meanSparsity = Scalar(0);
  Scalar mse = Scalar(0);
};

// One row per epsilon (ascending): mean support size and mean residual energy
// per edge across the batch columns.
template <typename Scalar>
std::vector<SparsityCurvePoint<Scalar>> sparsityMseCurve(const EdgeSignalBatch<Scalar>& batch,
                                                         const MatrixX<Scalar>& basis,
                                                         std::vector<Scalar> epsilonGrid,
                                                         const BasisPursuitOptions& opts = {}) {
  if (epsilonGrid.empty()) throw ArgumentError("epsilon grid is empty");
  std::sort(epsilonGrid.begin(), epsilonGrid.end());
  std::vector<SparsityCurvePoint<Scalar>> table;
  table.reserve(epsilonGrid.size());
  const Index m = batch.cols();
  if (m == 0) throw ArgumentError("batch is empty");
  for (Scalar epsilon : epsilonGrid) {
    SparsityCurvePoint<Scalar> row;
    row.epsilon = epsilon;
    for (Index j = 0; j < m; ++j) {
      const SparseCode<Scalar> code = basisPursuit<Scalar>(batch.col(j), basis, epsilon, opts);
      row.meanSparsity += Scalar(code.support.size());
      row.mse += code.residual * code.residual / Scalar(batch.rows());
    }
    row.meanSparsity /= Scalar(m);
    row.mse /= Scalar(m);
    table.push_back(row);
  }
  return table;
}

} // namespace cellsp
