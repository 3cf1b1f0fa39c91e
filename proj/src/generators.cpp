#include "cellsp/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "cellsp/cycle_enum.hpp"
#include "cellsp/errors.hpp"
#include "cellsp/incidence.hpp"
#include "cellsp/laplacians.hpp"

namespace cellsp {

namespace {

struct UnionFind {
  std::vector<int> parent;

  explicit UnionFind(int n) : parent(static_cast<std::size_t>(n)) {
    std::iota(parent.begin(), parent.end(), 0);
  }

  int find(int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] =
          parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  }

  void unite(int a, int b) { parent[static_cast<std::size_t>(find(a))] = find(b); }
};

bool connectedWithout(int vertexCount, const std::vector<std::pair<int, int>>& edges,
                      const std::vector<char>& removed, std::size_t alsoRemoved) {
  UnionFind uf(vertexCount);
  int components = vertexCount;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (removed[i] || i == alsoRemoved) continue;
    const int a = uf.find(edges[i].first), b = uf.find(edges[i].second);
    if (a != b) {
      uf.unite(a, b);
      --components;
    }
  }
  return components == 1;
}

// Deletes edges in a random order, skipping any whose removal disconnects the
// graph, until `remove` edges are gone.
std::vector<std::pair<int, int>> deleteKeepingConnected(int vertexCount,
                                                        std::vector<std::pair<int, int>> edges,
                                                        long remove, std::mt19937_64& rng) {
  if (remove <= 0) return edges;
  std::vector<std::size_t> order(edges.size());
  std::iota(order.begin(), order.end(), std::size_t(0));
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<char> removed(edges.size(), 0);
  long gone = 0;
  for (std::size_t i : order) {
    if (gone == remove) break;
    if (connectedWithout(vertexCount, edges, removed, i)) {
      removed[i] = 1;
      ++gone;
    }
  }
  if (gone < remove)
    throw GenerationError("cannot delete " + std::to_string(remove) +
                          " edges without disconnecting the graph");
  std::vector<std::pair<int, int>> kept;
  kept.reserve(edges.size() - static_cast<std::size_t>(remove));
  for (std::size_t i = 0; i < edges.size(); ++i)
    if (!removed[i]) kept.push_back(edges[i]);
  return kept;
}

CellComplex makeMesh(const MeshSpec& spec, std::mt19937_64& rng) {
  const int v = spec.vertexCount;
  if (v < 1) throw GenerationError("mesh needs at least one vertex");
  const int cols = static_cast<int>(std::ceil(std::sqrt(double(v))));
  const int rows = (v + cols - 1) / cols;
  const auto id = [&](int r, int c) { return r * cols + c; };
  const auto exists = [&](int r, int c) {
    return r >= 0 && c >= 0 && r < rows && c < cols && id(r, c) < v;
  };
  if (!(spec.diagonalFraction >= 0.0 && spec.diagonalFraction <= 1.0))
    throw GenerationError("diagonal fraction must lie in [0, 1]");
  std::vector<std::pair<int, int>> edges;
  std::bernoulli_distribution coin(0.5);
  std::bernoulli_distribution wantDiagonal(spec.diagonalFraction);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      if (!exists(r, c)) continue;
      if (exists(r, c + 1)) edges.emplace_back(id(r, c), id(r, c + 1));
      if (exists(r + 1, c)) edges.emplace_back(id(r, c), id(r + 1, c));
      if (exists(r + 1, c + 1) && exists(r, c + 1) && exists(r + 1, c) && wantDiagonal(rng))
        edges.emplace_back(coin(rng) ? std::make_pair(id(r, c), id(r + 1, c + 1))
                                     : std::make_pair(id(r, c + 1), id(r + 1, c)));
    }
  }
  long remove = 0;
  if (spec.targetEdgeCount >= 0) {
    if (spec.targetEdgeCount > static_cast<int>(edges.size()) || spec.targetEdgeCount < v - 1)
      throw GenerationError("target edge count " + std::to_string(spec.targetEdgeCount) +
                            " unreachable from a mesh with " + std::to_string(edges.size()) +
                            " edges on " + std::to_string(v) + " vertices");
    remove = static_cast<long>(edges.size()) - spec.targetEdgeCount;
  } else {
    if (!(spec.deleteFraction >= 0.0 && spec.deleteFraction < 1.0))
      throw GenerationError("delete fraction must lie in [0, 1)");
    remove = std::lround(spec.deleteFraction * double(edges.size()));
  }
  return makeComplex(v, deleteKeepingConnected(v, std::move(edges), remove, rng), {});
}

CellComplex makeErdosRenyi(const ErdosRenyiSpec& spec, std::mt19937_64& rng) {
  const int v = spec.vertexCount;
  if (v < 1) throw GenerationError("graph needs at least one vertex");
  if (!(spec.edgeProbability >= 0.0 && spec.edgeProbability <= 1.0))
    throw GenerationError("edge probability must lie in [0, 1]");
  const double expected = spec.edgeProbability * double(v) * double(v - 1) / 2.0;
  std::bernoulli_distribution coin(spec.edgeProbability);
  for (int attempt = 0; attempt < spec.maxAttempts; ++attempt) {
    std::vector<std::pair<int, int>> edges;
    for (int a = 0; a < v; ++a)
      for (int b = a + 1; b < v; ++b)
        if (coin(rng)) edges.emplace_back(a, b);
    if (std::abs(double(edges.size()) - expected) > 0.05 * expected) continue;
    std::vector<char> removed(edges.size(), 0);
    if (!connectedWithout(v, edges, removed, edges.size())) continue;
    return makeComplex(v, std::move(edges), {});
  }
  throw GenerationError("no connected draw within the edge-count tolerance after " +
                        std::to_string(spec.maxAttempts) + " attempts");
}

CellComplex makeRing(const RingSpec& spec) {
  if (spec.vertexCount < 3) throw GenerationError("ring needs at least three vertices");
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < spec.vertexCount; ++i)
    edges.emplace_back(i, (i + 1) % spec.vertexCount);
  return makeComplex(spec.vertexCount, std::move(edges), {});
}

CellComplex makeCompleteGraph(const CompleteSpec& spec) {
  if (spec.vertexCount < 1) throw GenerationError("graph needs at least one vertex");
  std::vector<std::pair<int, int>> edges;
  for (int a = 0; a < spec.vertexCount; ++a)
    for (int b = a + 1; b < spec.vertexCount; ++b) edges.emplace_back(a, b);
  return makeComplex(spec.vertexCount, std::move(edges), {});
}

} // namespace

CellComplex generateSkeleton(const GraphSpec& spec, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return std::visit(
      [&](const auto& s) -> CellComplex {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, MeshSpec>) return makeMesh(s, rng);
        else if constexpr (std::is_same_v<T, ErdosRenyiSpec>) return makeErdosRenyi(s, rng);
        else if constexpr (std::is_same_v<T, RingSpec>) return makeRing(s);
        else return makeCompleteGraph(s);
      },
      spec);
}

CellComplex plantPolygons(const CellComplex& complex, int count, int maxSides,
                          std::uint64_t seed) {
  if (count < 0) throw ArgumentError("polygon count must be nonnegative");
  const CellComplex bones = skeleton(complex);
  const CandidateCellSet candidates = enumerateCandidates(bones, maxSides);
  const auto total = static_cast<int>(candidates.cycles.size());
  if (count > total)
    throw GenerationError("requested " + std::to_string(count) + " polygons but only " +
                          std::to_string(total) + " chordless candidates exist");
  std::vector<std::size_t> order(candidates.cycles.size());
  std::iota(order.begin(), order.end(), std::size_t(0));
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<Polygon> chosen;
  chosen.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) chosen.push_back(candidates.cycles[order[static_cast<std::size_t>(k)]]);
  return makeComplex(bones.vertexCount, bones.edges, std::move(chosen));
}

EdgeSignalBatch<double> generateSignals(const SpectralBasis<double>& basis,
                                        const SignalSpec& spec, Index count, std::uint64_t seed) {
  if (count < 1) throw ArgumentError("signal count must be at least 1");
  if (spec.noiseVariance < 0.0) throw ArgumentError("noise variance must be nonnegative");
  const Index e = basis.eigenvectors.rows();
  const auto checkBand = [&](Index want, ComponentLabel label) {
    if (want < 0 || want > basis.count(label))
      throw ArgumentError(std::string(componentName(label)) + " bandwidth " +
                          std::to_string(want) + " outside [0, " +
                          std::to_string(basis.count(label)) + "]");
  };
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  EdgeSignalBatch<double> batch = EdgeSignalBatch<double>::Zero(e, count);

  if (spec.sparsity > 0) {
    if (spec.sparsity > e)
      throw ArgumentError("sparsity " + std::to_string(spec.sparsity) + " exceeds basis size " +
                          std::to_string(e));
    std::vector<Index> order(static_cast<std::size_t>(e));
    std::iota(order.begin(), order.end(), Index(0));
    for (Index j = 0; j < count; ++j) {
      std::shuffle(order.begin(), order.end(), rng);
      for (Index k = 0; k < spec.sparsity; ++k)
        batch.col(j) += gauss(rng) * basis.eigenvectors.col(order[static_cast<std::size_t>(k)]);
    }
  } else {
    checkBand(spec.bandwidthIrr, ComponentLabel::Irrotational);
    checkBand(spec.bandwidthSol, ComponentLabel::Solenoidal);
    checkBand(spec.bandwidthHarmonic, ComponentLabel::Harmonic);
    const MatrixX<double> irr = basis.columns(ComponentLabel::Irrotational);
    const MatrixX<double> sol = basis.columns(ComponentLabel::Solenoidal);
    const MatrixX<double> harm = basis.columns(ComponentLabel::Harmonic);
    for (Index j = 0; j < count; ++j) {
      for (Index k = 0; k < spec.bandwidthIrr; ++k) batch.col(j) += gauss(rng) * irr.col(k);
      for (Index k = 0; k < spec.bandwidthSol; ++k) batch.col(j) += gauss(rng) * sol.col(k);
      for (Index k = 0; k < spec.bandwidthHarmonic; ++k) batch.col(j) += gauss(rng) * harm.col(k);
    }
  }
  if (spec.noiseVariance > 0.0) {
    const double sigma = std::sqrt(spec.noiseVariance);
    for (Index j = 0; j < count; ++j)
      for (Index i = 0; i < e; ++i) batch(i, j) += sigma * gauss(rng);
  }
  return batch;
}

EdgeSignalBatch<double> generateSignals(const CellComplex& complex, const SignalSpec& spec,
                                        Index count, std::uint64_t seed) {
  const auto lap = buildLaplacians<double>(buildB1(complex), buildB2(complex));
  return generateSignals(partitionBasis(lap), spec, count, seed);
}

std::uint64_t deriveSeed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + (index + 1) * 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

} // namespace cellsp
