#pragma once

#include <algorithm>
#include <functional>
#include <numeric>
#include <random>
#include <vector>

#include "cellsp/cell_complex.hpp"
#include "cellsp/cycle_enum.hpp"
#include "cellsp/types.hpp"

namespace testutil {

using cellsp::CellComplex;
using cellsp::Polygon;

// Random connected graph: a random spanning tree plus independent extra edges.
inline CellComplex randomConnectedGraph(int vertexCount, double extraEdgeProb,
                                        std::mt19937_64& rng) {
  std::vector<int> order(static_cast<std::size_t>(vertexCount));
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<std::pair<int, int>> edges;
  for (int i = 1; i < vertexCount; ++i) {
    std::uniform_int_distribution<int> pick(0, i - 1);
    edges.emplace_back(order[static_cast<std::size_t>(pick(rng))],
                       order[static_cast<std::size_t>(i)]);
  }
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  for (int u = 0; u < vertexCount; ++u)
    for (int v = u + 1; v < vertexCount; ++v)
      if (coin(rng) < extraEdgeProb) edges.emplace_back(u, v);
  for (auto& [u, v] : edges)
    if (u > v) std::swap(u, v);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return cellsp::makeComplex(vertexCount, std::move(edges), {});
}

// Random complex: random graph with a random subset of chordless cycles filled.
inline CellComplex randomComplex(int vertexCount, double extraEdgeProb, double fillProb,
                                 int maxSides, std::mt19937_64& rng) {
  const CellComplex graph = randomConnectedGraph(vertexCount, extraEdgeProb, rng);
  const cellsp::CandidateCellSet candidates = cellsp::enumerateCandidates(graph, maxSides);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::vector<Polygon> filled;
  for (const Polygon& p : candidates.cycles)
    if (coin(rng) < fillProb) filled.push_back(p);
  return cellsp::makeComplex(graph.vertexCount, graph.edges, std::move(filled));
}

// Brute-force chordless-cycle oracle: for every vertex subset up to maxSides,
// accept iff the induced subgraph is a single cycle (2-regular + one closed
// walk covering the subset).
inline std::vector<Polygon> bruteForceChordlessCycles(const CellComplex& complex, int maxSides) {
  const int v = complex.vertexCount;
  std::vector<std::vector<char>> adj(static_cast<std::size_t>(v),
                                     std::vector<char>(static_cast<std::size_t>(v), 0));
  for (const auto& [a, b] : complex.edges) {
    adj[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = 1;
    adj[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)] = 1;
  }
  auto connected = [&](int a, int b) {
    return adj[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] != 0;
  };
  std::vector<Polygon> cycles;
  std::vector<int> subset;
  auto singleInducedCycle = [&](const std::vector<int>& s, Polygon& walkOut) -> bool {
    for (int a : s) {
      int degree = 0;
      for (int b : s)
        if (a != b && connected(a, b)) ++degree;
      if (degree != 2) return false;
    }
    Polygon walk{s[0]};
    std::vector<char> visited(static_cast<std::size_t>(v), 0);
    visited[static_cast<std::size_t>(s[0])] = 1;
    while (walk.size() < s.size()) {
      int next = -1;
      for (int b : s)
        if (!visited[static_cast<std::size_t>(b)] && connected(walk.back(), b)) {
          next = b;
          break;
        }
      if (next < 0) return false; // disconnected union of cycles
      visited[static_cast<std::size_t>(next)] = 1;
      walk.push_back(next);
    }
    if (!connected(walk.back(), walk.front())) return false;
    walkOut = cellsp::canonicalPolygon(walk);
    return true;
  };
  std::function<void(int)> grow = [&](int next) {
    if (static_cast<int>(subset.size()) >= 3) {
      Polygon walk;
      if (singleInducedCycle(subset, walk)) cycles.push_back(walk);
    }
    if (static_cast<int>(subset.size()) == maxSides) return;
    for (int w = next; w < v; ++w) {
      subset.push_back(w);
      grow(w + 1);
      subset.pop_back();
    }
  };
  grow(0);
  std::sort(cycles.begin(), cycles.end(), [](const Polygon& a, const Polygon& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  return cycles;
}

} // namespace testutil
