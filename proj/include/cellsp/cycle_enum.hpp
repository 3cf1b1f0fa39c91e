#pragma once

#include <cstdint>
#include <vector>

#include "cellsp/cell_complex.hpp"
#include "cellsp/types.hpp"

namespace cellsp {

// Dictionary of candidate 2-cells: the simple chordless cycles of the
// 1-skeleton, each with its signed incidence column over the complex edges.
struct CandidateCellSet {
  std::vector<Polygon> cycles; // canonical, sorted by (length, lexicographic)
  int maxSides = 6;
  IncidenceMatrix columns; // E x N_c
};

CandidateCellSet enumerateCandidates(const CellComplex& complex, int maxSides = 6,
                                     std::int64_t maxCandidates = 100000);

} // namespace cellsp
