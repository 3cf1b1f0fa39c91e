#pragma once

#include <cstdint>
#include <variant>

#include "cellsp/cell_complex.hpp"
#include "cellsp/spectral_basis.hpp"
#include "cellsp/types.hpp"

namespace cellsp {

// Grid with row-major vertices and axis edges; each complete unit square gets
// a random diagonal with probability diagonalFraction. Random deletions then
// keep the graph connected. targetEdgeCount >= 0 deletes down to an exact edge
// count and overrides deleteFraction.
struct MeshSpec {
  int vertexCount = 30;
  double deleteFraction = 0.0;
  int targetEdgeCount = -1;
  double diagonalFraction = 1.0;
};

// Resampled until connected and within 5% of the expected edge count.
struct ErdosRenyiSpec {
  int vertexCount = 30;
  double edgeProbability = 0.3;
  int maxAttempts = 200;
};

struct RingSpec {
  int vertexCount = 4;
};

struct CompleteSpec {
  int vertexCount = 4;
};

using GraphSpec = std::variant<MeshSpec, ErdosRenyiSpec, RingSpec, CompleteSpec>;

// Connected 1-skeleton; deterministic in the seed.
CellComplex generateSkeleton(const GraphSpec& spec, std::uint64_t seed);

// Fills `count` polygons drawn uniformly without replacement from the
// chordless-cycle candidates of the 1-skeleton. Existing polygons of the
// input are discarded first.
CellComplex plantPolygons(const CellComplex& complex, int count, int maxSides,
                          std::uint64_t seed);

// Bandlimited synthesis with iid standard normal coefficients on the leading
// basis columns of each component, plus iid Gaussian noise. sparsity > 0
// switches to exactly-sparse columns over the whole basis and ignores the
// bandwidth fields.
struct SignalSpec {
  Index bandwidthIrr = 0;
  Index bandwidthSol = 0;
  Index bandwidthHarmonic = 0;
  Index sparsity = 0;
  double noiseVariance = 0.0;
};

EdgeSignalBatch<double> generateSignals(const SpectralBasis<double>& basis,
                                        const SignalSpec& spec, Index count, std::uint64_t seed);
EdgeSignalBatch<double> generateSignals(const CellComplex& complex, const SignalSpec& spec,
                                        Index count, std::uint64_t seed);

// splitmix64 stream: independent per-trial seeds from one master seed.
std::uint64_t deriveSeed(std::uint64_t master, std::uint64_t index);

} // namespace cellsp
