#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "cellsp/types.hpp"

namespace cellsp {

// Cyclic vertex sequence of a 2-cell, stored in canonical orientation:
// starts at its smallest vertex and proceeds toward the smaller neighbour.
using Polygon = std::vector<int>;

struct CellComplex {
  int vertexCount = 0;
  std::vector<std::pair<int, int>> edges; // each (u, v) with u < v, sorted lexicographically
  std::vector<Polygon> polygons;          // sorted by side count, then lexicographically
};

Polygon canonicalPolygon(const Polygon& cycle);

// Canonicalizes, sorts, and validates. Throws StructuralError naming the offender.
CellComplex makeComplex(int vertexCount,
                        std::vector<std::pair<int, int>> edges,
                        std::vector<Polygon> polygons);

void validateComplex(const CellComplex& complex);

// Index into complex.edges for the undirected pair, -1 if absent.
Index edgeIndex(const CellComplex& complex, int u, int v);

// The 1-skeleton: same vertices and edges, no polygons.
CellComplex skeleton(const CellComplex& complex);

// Keeps only the 3-sided polygons.
CellComplex restrictToTriangles(const CellComplex& complex);

CellComplex readComplex(std::istream& in);
CellComplex readComplexFile(const std::string& path);
void writeComplex(const CellComplex& complex, std::ostream& out);
void writeComplexFile(const CellComplex& complex, const std::string& path);

} // namespace cellsp
