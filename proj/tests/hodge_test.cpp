#include <doctest.h>

#include <random>

#include <Eigen/Dense>

#include "cellsp/errors.hpp"
#include "cellsp/hodge.hpp"
#include "cellsp/incidence.hpp"
#include "cellsp/laplacians.hpp"
#include "cellsp/spectral_basis.hpp"
#include "helpers.hpp"

using cellsp::CellComplex;
using cellsp::ComponentLabel;

TEST_CASE("gradient flow on the filled triangle is purely irrotational") {
  CellComplex tri = cellsp::makeComplex(3, {{0, 1}, {0, 2}, {1, 2}}, {{0, 1, 2}});
  auto b1 = cellsp::buildB1(tri);
  auto b2 = cellsp::buildB2(tri);
  Eigen::Vector3d potential(0.0, 1.0, 3.0);
  Eigen::VectorXd flow =
      Eigen::MatrixXi(b1).cast<double>().transpose() * potential;
  auto parts = cellsp::hodgeDecompose(b1, b2, flow);
  CHECK((parts.irrotational - flow).norm() < 1e-12);
  CHECK(parts.solenoidal.norm() < 1e-12);
  CHECK(parts.harmonic.norm() < 1e-12);
}

TEST_CASE("curl flow on the filled triangle is purely solenoidal") {
  CellComplex tri = cellsp::makeComplex(3, {{0, 1}, {0, 2}, {1, 2}}, {{0, 1, 2}});
  auto b1 = cellsp::buildB1(tri);
  auto b2 = cellsp::buildB2(tri);
  Eigen::VectorXd cell(1);
  cell << 2.0;
  Eigen::VectorXd flow = Eigen::MatrixXi(b2).cast<double>() * cell;
  auto parts = cellsp::hodgeDecompose(b1, b2, flow);
  CHECK(parts.irrotational.norm() < 1e-12);
  CHECK((parts.solenoidal - flow).norm() < 1e-12);
  CHECK(parts.harmonic.norm() < 1e-12);
}

TEST_CASE("empty square cycle flow is purely harmonic") {
  CellComplex square = cellsp::makeComplex(4, {{0, 1}, {0, 3}, {1, 2}, {2, 3}}, {});
  auto b1 = cellsp::buildB1(square);
  auto b2 = cellsp::buildB2(square);
  Eigen::VectorXd flow(4);
  flow << 1, -1, 1, 1; // oriented indicator of the 4-cycle
  auto parts = cellsp::hodgeDecompose(b1, b2, flow);
  CHECK(parts.irrotational.norm() < 1e-12);
  CHECK(parts.solenoidal.norm() < 1e-12);
  CHECK((parts.harmonic - flow).norm() < 1e-12);
}

TEST_CASE("components sum to the input and are mutually orthogonal") {
  std::mt19937_64 rng(61);
  std::normal_distribution<double> gauss;
  for (int trial = 0; trial < 10; ++trial) {
    CellComplex c = testutil::randomComplex(10, 0.3, 0.5, 6, rng);
    auto b1 = cellsp::buildB1(c);
    auto b2 = cellsp::buildB2(c);
    Eigen::VectorXd y(c.edges.size());
    for (Eigen::Index i = 0; i < y.size(); ++i) y[i] = gauss(rng);
    auto parts = cellsp::hodgeDecompose(b1, b2, y);
    CHECK((parts.irrotational + parts.solenoidal + parts.harmonic - y).norm() < 1e-10);
    CHECK(std::abs(parts.irrotational.dot(parts.solenoidal)) < 1e-9);
    CHECK(std::abs(parts.irrotational.dot(parts.harmonic)) < 1e-9);
    CHECK(std::abs(parts.solenoidal.dot(parts.harmonic)) < 1e-9);
    // harmonic component lies in ker(L1)
    auto lap = cellsp::buildLaplacians<double>(b1, b2);
    CHECK((lap.l1 * parts.harmonic).norm() < 1e-9);
  }
}

TEST_CASE("projection agrees with the spectral split") {
  std::mt19937_64 rng(67);
  std::normal_distribution<double> gauss;
  CellComplex c = testutil::randomComplex(9, 0.35, 0.5, 6, rng);
  auto b1 = cellsp::buildB1(c);
  auto b2 = cellsp::buildB2(c);
  auto basis = cellsp::partitionBasis(cellsp::buildLaplacians<double>(b1, b2));
  Eigen::VectorXd y(c.edges.size());
  for (Eigen::Index i = 0; i < y.size(); ++i) y[i] = gauss(rng);
  auto parts = cellsp::hodgeDecompose(b1, b2, y);
  const auto spectralPart = [&](ComponentLabel label) {
    Eigen::MatrixXd u = basis.columns(label);
    return Eigen::VectorXd(u * (u.transpose() * y));
  };
  CHECK((parts.irrotational - spectralPart(ComponentLabel::Irrotational)).norm() < 1e-8);
  CHECK((parts.solenoidal - spectralPart(ComponentLabel::Solenoidal)).norm() < 1e-8);
  CHECK((parts.harmonic - spectralPart(ComponentLabel::Harmonic)).norm() < 1e-8);
}

TEST_CASE("batch decomposition matches per-column results") {
  std::mt19937_64 rng(71);
  std::normal_distribution<double> gauss;
  CellComplex c = testutil::randomComplex(8, 0.35, 0.5, 5, rng);
  auto b1 = cellsp::buildB1(c);
  auto b2 = cellsp::buildB2(c);
  Eigen::MatrixXd batch(c.edges.size(), 4);
  for (Eigen::Index i = 0; i < batch.rows(); ++i)
    for (Eigen::Index j = 0; j < batch.cols(); ++j) batch(i, j) = gauss(rng);
  Eigen::MatrixXd irr, sol, harm;
  cellsp::hodgeDecomposeBatch<double>(b1, b2, batch, irr, sol, harm);
  for (Eigen::Index j = 0; j < batch.cols(); ++j) {
    auto parts = cellsp::hodgeDecompose(b1, b2, Eigen::VectorXd(batch.col(j)));
    CHECK((irr.col(j) - parts.irrotational).norm() < 1e-12);
    CHECK((sol.col(j) - parts.solenoidal).norm() < 1e-12);
    CHECK((harm.col(j) - parts.harmonic).norm() < 1e-12);
  }
}

TEST_CASE("hodge decomposition rejects mismatched shapes") {
  CellComplex tri = cellsp::makeComplex(3, {{0, 1}, {0, 2}, {1, 2}}, {{0, 1, 2}});
  auto b1 = cellsp::buildB1(tri);
  auto b2 = cellsp::buildB2(tri);
  Eigen::VectorXd wrong(5);
  wrong.setZero();
  CHECK_THROWS_AS(cellsp::hodgeDecompose(b1, b2, wrong), cellsp::ShapeError);
  Eigen::MatrixXd twoCols(3, 2);
  twoCols.setZero();
  CHECK_THROWS_AS(cellsp::hodgeDecompose(b1, b2, twoCols), cellsp::ShapeError);
}
