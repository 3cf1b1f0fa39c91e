#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>
#include <vector>

#include <Eigen/QR>

#include "cellsp/errors.hpp"
#include "cellsp/laplacians.hpp"
#include "cellsp/matrix_io.hpp"
#include "cellsp/types.hpp"

namespace cellsp {

// Desired frequency response sampled on strictly positive eigenvalues; the
// kernel is untouchable for filters without a constant term.
template <typename Scalar = double>
struct SpectralMask {
  VectorX<Scalar> eigenvalues;
  VectorX<Scalar> response;
};

using SpectralMaskd = SpectralMask<double>;

template <typename Scalar = double>
struct FilterDesign {
  VectorX<Scalar> coeffsIrr; // a_1..a_Kl applied to powers of l1Low
  VectorX<Scalar> coeffsSol; // a_1..a_Ku applied to powers of l1Up
  Scalar fitResidualIrr = Scalar(0);
  Scalar fitResidualSol = Scalar(0);
};

using FilterDesignd = FilterDesign<double>;

// Columns are lambda^1 .. lambda^K; no constant column.
template <typename Scalar>
MatrixX<Scalar> buildVandermonde(const VectorX<Scalar>& eigenvalues, Index order) {
  if (order < 1) throw ArgumentError("filter order must be at least 1");
  for (Index i = 0; i < eigenvalues.size(); ++i)
    if (eigenvalues[i] == Scalar(0))
      throw ArgumentError("zero eigenvalue in a filter grid: the kernel cannot be shaped");
  MatrixX<Scalar> phi(eigenvalues.size(), order);
  if (eigenvalues.size() == 0) return phi;
  phi.col(0) = eigenvalues;
  for (Index k = 1; k < order; ++k) phi.col(k) = phi.col(k - 1).cwiseProduct(eigenvalues);
  return phi;
}

namespace detail {

template <typename Scalar>
void validateMask(const SpectralMask<Scalar>& mask) {
  if (mask.eigenvalues.size() == 0) throw ArgumentError("empty spectral mask");
  if (mask.eigenvalues.size() != mask.response.size())
    throw ShapeError("spectral mask: eigenvalue/response length mismatch");
  for (Index i = 0; i < mask.eigenvalues.size(); ++i)
    if (!(mask.eigenvalues[i] > Scalar(0)))
      throw ArgumentError("spectral mask eigenvalues must be strictly positive");
}

// Minimum-norm least squares on nodes scaled into [0, 1], with one refinement
// pass; coefficients are mapped back to the unscaled powers.
template <typename Scalar>
VectorX<Scalar> fitScaled(const VectorX<Scalar>& eigenvalues, const VectorX<Scalar>& response,
                          Index order, Scalar lambdaMax, Scalar& residualOut) {
  const VectorX<Scalar> scaled = eigenvalues / lambdaMax;
  const MatrixX<Scalar> phi = buildVandermonde(scaled, order);
  Eigen::CompleteOrthogonalDecomposition<MatrixX<Scalar>> cod(phi);
  VectorX<Scalar> a = cod.solve(response);
  a += cod.solve(response - phi * a);
  Scalar power = Scalar(1);
  for (Index k = 0; k < order; ++k) {
    power *= lambdaMax;
    a[k] /= power;
  }
  residualOut = (response - buildVandermonde(eigenvalues, order) * a).norm();
  return a;
}

} // namespace detail

template <typename Scalar>
FilterDesign<Scalar> designSeparate(const SpectralMask<Scalar>& maskIrr,
                                    const SpectralMask<Scalar>& maskSol, Index orderIrr,
                                    Index orderSol) {
  detail::validateMask(maskIrr);
  detail::validateMask(maskSol);
  if (orderIrr < 1 || orderSol < 1) throw ArgumentError("filter orders must be at least 1");
  FilterDesign<Scalar> design;
  design.coeffsIrr = detail::fitScaled(maskIrr.eigenvalues, maskIrr.response, orderIrr,
                                       maskIrr.eigenvalues.maxCoeff(), design.fitResidualIrr);
  design.coeffsSol = detail::fitScaled(maskSol.eigenvalues, maskSol.response, orderSol,
                                       maskSol.eigenvalues.maxCoeff(), design.fitResidualSol);
  return design;
}

// One coefficient vector fit to both stacked systems; coinciding lower/upper
// eigenvalues with conflicting responses are irreconcilable here, which is
// the case for separate designs.
template <typename Scalar>
VectorX<Scalar> designJoint(const SpectralMask<Scalar>& maskIrr,
                            const SpectralMask<Scalar>& maskSol, Index order) {
  detail::validateMask(maskIrr);
  detail::validateMask(maskSol);
  if (order < 1) throw ArgumentError("filter order must be at least 1");
  const Index nSol = maskSol.eigenvalues.size();
  const Index nIrr = maskIrr.eigenvalues.size();
  VectorX<Scalar> eigenvalues(nSol + nIrr), response(nSol + nIrr);
  eigenvalues << maskSol.eigenvalues, maskIrr.eigenvalues;
  response << maskSol.response, maskIrr.response;
  Scalar residual = Scalar(0);
  return detail::fitScaled(eigenvalues, response, order, eigenvalues.maxCoeff(), residual);
}

// Residual of a coefficient pair against both masks stacked, for comparing
// separate and joint fits on equal footing.
template <typename Scalar>
Scalar stackedResidual(const SpectralMask<Scalar>& maskIrr, const SpectralMask<Scalar>& maskSol,
                       const VectorX<Scalar>& coeffsIrr, const VectorX<Scalar>& coeffsSol) {
  const Scalar rIrr =
      (maskIrr.response - buildVandermonde(maskIrr.eigenvalues, coeffsIrr.size()) * coeffsIrr)
          .squaredNorm();
  const Scalar rSol =
      (maskSol.response - buildVandermonde(maskSol.eigenvalues, coeffsSol.size()) * coeffsSol)
          .squaredNorm();
  return std::sqrt(rIrr + rSol);
}

// x = sum_k a^I_k (l1Low)^k s + sum_k a^s_k (l1Up)^k s via iterated products.
template <typename Scalar>
MatrixX<Scalar> applyFilterBatch(const MatrixX<Scalar>& batch, const LaplacianSet<Scalar>& lap,
                                 const FilterDesign<Scalar>& design) {
  if (batch.rows() != lap.l1.rows()) throw ShapeError("applyFilter: signal length != edge count");
  MatrixX<Scalar> out = MatrixX<Scalar>::Zero(batch.rows(), batch.cols());
  MatrixX<Scalar> t = batch;
  for (Index k = 0; k < design.coeffsIrr.size(); ++k) {
    t = lap.l1Low * t;
    out += design.coeffsIrr[k] * t;
  }
  t = batch;
  for (Index k = 0; k < design.coeffsSol.size(); ++k) {
    t = lap.l1Up * t;
    out += design.coeffsSol[k] * t;
  }
  return out;
}

template <typename Scalar>
VectorX<Scalar> applyFilter(const VectorX<Scalar>& signal, const LaplacianSet<Scalar>& lap,
                            const FilterDesign<Scalar>& design) {
  return applyFilterBatch<Scalar>(signal, lap, design).col(0);
}

// 10 log10(||clean||^2 / ||filtered - clean||^2), capped at 300 dB.
template <typename Scalar>
Scalar outputSnr(const VectorX<Scalar>& clean, const VectorX<Scalar>& filtered) {
  if (clean.size() != filtered.size()) throw ShapeError("outputSnr: length mismatch");
  const Scalar signal = clean.squaredNorm();
  if (signal == Scalar(0)) throw DegenerateInputError("outputSnr: clean component is zero");
  const Scalar error = (filtered - clean).squaredNorm();
  if (error == Scalar(0)) return Scalar(300);
  return std::min(Scalar(300), Scalar(10) * std::log10(signal / error));
}

// Collapses eigenvalues closer than relTol * max|lambda| into their mean;
// output ascending.
template <typename Scalar>
VectorX<Scalar> dedupSpectrum(const VectorX<Scalar>& eigenvalues, Scalar relTol = Scalar(1e-8)) {
  if (eigenvalues.size() == 0) return eigenvalues;
  std::vector<Scalar> sorted(eigenvalues.data(), eigenvalues.data() + eigenvalues.size());
  std::sort(sorted.begin(), sorted.end());
  const Scalar gap = relTol * std::max(std::abs(sorted.front()), std::abs(sorted.back()));
  std::vector<Scalar> reps;
  std::size_t start = 0;
  for (std::size_t i = 1; i <= sorted.size(); ++i) {
    if (i == sorted.size() || sorted[i] - sorted[i - 1] > gap) {
      Scalar sum = Scalar(0);
      for (std::size_t k = start; k < i; ++k) sum += sorted[k];
      reps.push_back(sum / Scalar(i - start));
      start = i;
    }
  }
  return Eigen::Map<const VectorX<Scalar>>(reps.data(), static_cast<Index>(reps.size()));
}

inline SpectralMaskd readMaskCsvFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line) || line != "lambda,response")
    throw IoError("mask csv: expected 'lambda,response' header in '" + path + "'");
  std::vector<double> lambdas, responses;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw IoError("mask csv: malformed row '" + line + "'");
    try {
      lambdas.push_back(std::stod(line.substr(0, comma)));
      responses.push_back(std::stod(line.substr(comma + 1)));
    } catch (const std::exception&) {
      throw IoError("mask csv: unreadable row '" + line + "'");
    }
  }
  SpectralMaskd mask;
  mask.eigenvalues = Eigen::Map<const VectorX<double>>(lambdas.data(), static_cast<Index>(lambdas.size()));
  mask.response = Eigen::Map<const VectorX<double>>(responses.data(), static_cast<Index>(responses.size()));
  return mask;
}

inline void writeMaskCsvFile(const std::string& path, const SpectralMaskd& mask) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << "lambda,response\n";
  for (Index i = 0; i < mask.eigenvalues.size(); ++i)
    out << formatDouble(mask.eigenvalues[i]) << "," << formatDouble(mask.response[i]) << "\n";
}

} // namespace cellsp
