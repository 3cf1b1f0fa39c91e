#include "cellsp/incidence.hpp"

#include <sstream>

#include "cellsp/errors.hpp"

namespace cellsp {

std::vector<std::pair<Index, int>> polygonIncidenceEntries(const CellComplex& complex,
                                                           const Polygon& polygon) {
  std::vector<std::pair<Index, int>> entries;
  entries.reserve(polygon.size());
  for (std::size_t k = 0; k < polygon.size(); ++k) {
    const int u = polygon[k];
    const int v = polygon[(k + 1) % polygon.size()];
    const Index e = edgeIndex(complex, u, v);
    if (e < 0) {
      std::ostringstream os;
      os << "polygon side (" << u << " " << v << ") is not an edge of the complex";
      throw StructuralError(os.str());
    }
    entries.emplace_back(e, u < v ? +1 : -1);
  }
  return entries;
}

IncidenceMatrix buildB1(const CellComplex& complex) {
  validateComplex(complex);
  const Index e = static_cast<Index>(complex.edges.size());
  IncidenceMatrix b1(complex.vertexCount, e);
  std::vector<Eigen::Triplet<int>> triplets;
  triplets.reserve(2 * static_cast<std::size_t>(e));
  for (Index j = 0; j < e; ++j) {
    const auto [u, v] = complex.edges[static_cast<std::size_t>(j)];
    triplets.emplace_back(u, j, -1);
    triplets.emplace_back(v, j, +1);
  }
  b1.setFromTriplets(triplets.begin(), triplets.end());
  return b1;
}

IncidenceMatrix buildB2(const CellComplex& complex) {
  validateComplex(complex);
  const Index e = static_cast<Index>(complex.edges.size());
  const Index p = static_cast<Index>(complex.polygons.size());
  IncidenceMatrix b2(e, p);
  std::vector<Eigen::Triplet<int>> triplets;
  for (Index j = 0; j < p; ++j)
    for (const auto& [row, sign] : polygonIncidenceEntries(complex, complex.polygons[static_cast<std::size_t>(j)]))
      triplets.emplace_back(row, j, sign);
  b2.setFromTriplets(triplets.begin(), triplets.end());
  return b2;
}

bool validateChainProperty(const IncidenceMatrix& b1, const IncidenceMatrix& b2) {
  if (b1.cols() != b2.rows()) {
    std::ostringstream os;
    os << "edge-count mismatch: B1 is " << b1.rows() << "x" << b1.cols() << ", B2 is "
       << b2.rows() << "x" << b2.cols();
    throw ShapeError(os.str());
  }
  const IncidenceMatrix product = (b1 * b2).pruned();
  for (int outer = 0; outer < product.outerSize(); ++outer)
    for (IncidenceMatrix::InnerIterator it(product, outer); it; ++it)
      if (it.value() != 0) return false;
  return true;
}

} // namespace cellsp
