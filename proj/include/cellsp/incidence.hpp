#pragma once

#include <utility>
#include <vector>

#include "cellsp/cell_complex.hpp"
#include "cellsp/types.hpp"

namespace cellsp {

// Signed (edge row, +/-1) entries of one polygon traversal over complex.edges.
std::vector<std::pair<Index, int>> polygonIncidenceEntries(const CellComplex& complex,
                                                           const Polygon& polygon);

// V x E vertex-edge incidence: column (u,v) holds -1 at the tail u, +1 at the head v.
IncidenceMatrix buildB1(const CellComplex& complex);

// E x P edge-polygon incidence; +1 where the canonical traversal follows the
// edge direction, -1 against it. Column order follows complex.polygons.
IncidenceMatrix buildB2(const CellComplex& complex);

// True iff B1*B2 == 0 in integer arithmetic. Throws ShapeError on a dimension mismatch.
bool validateChainProperty(const IncidenceMatrix& b1, const IncidenceMatrix& b2);

} // namespace cellsp
