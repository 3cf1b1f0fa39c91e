#include "cellsp/cycle_enum.hpp"

#include <algorithm>
#include <string>

#include "cellsp/errors.hpp"
#include "cellsp/incidence.hpp"

namespace cellsp {

namespace {

struct Search {
  const std::vector<std::vector<int>>& adj;
  int maxSides;
  std::int64_t limit;
  std::vector<Polygon>& found;
  std::vector<int> path;
  std::vector<char> onPath;

  bool adjacent(int u, int v) const {
    const auto& n = adj[static_cast<std::size_t>(u)];
    return std::binary_search(n.begin(), n.end(), v);
  }

  // Path invariant: path[0] is the smallest vertex on the path, every vertex
  // after it is larger, no chord exists among path vertices, and no interior
  // vertex is adjacent to path[0]. A cycle is emitted exactly once, already in
  // canonical orientation, when the closing edge is reached with
  // path[1] < path.back().
  void extend() {
    const int v0 = path.front();
    const int last = path.back();
    if (path.size() >= 3 && adjacent(last, v0)) {
      if (path[1] < last) {
        found.push_back(path);
        if (static_cast<std::int64_t>(found.size()) > limit)
          throw ArgumentError("candidate enumeration exceeded the limit of " +
                              std::to_string(limit) + " cycles");
      }
      return; // extending past `last` would make (last, v0) a chord
    }
    if (static_cast<int>(path.size()) == maxSides) return;
    for (int w : adj[static_cast<std::size_t>(last)]) {
      if (w <= v0 || onPath[static_cast<std::size_t>(w)]) continue;
      bool chord = false;
      for (std::size_t i = 1; i + 1 < path.size() && !chord; ++i)
        chord = adjacent(w, path[i]);
      if (chord) continue;
      path.push_back(w);
      onPath[static_cast<std::size_t>(w)] = 1;
      extend();
      onPath[static_cast<std::size_t>(w)] = 0;
      path.pop_back();
    }
  }
};

} // namespace

CandidateCellSet enumerateCandidates(const CellComplex& complex, int maxSides,
                                     std::int64_t maxCandidates) {
  if (maxSides < 3) throw ArgumentError("max sides must be at least 3");
  validateComplex(complex);
  const std::size_t v = static_cast<std::size_t>(complex.vertexCount);
  std::vector<std::vector<int>> adj(v);
  for (const auto& [a, b] : complex.edges) {
    adj[static_cast<std::size_t>(a)].push_back(b);
    adj[static_cast<std::size_t>(b)].push_back(a);
  }
  for (auto& n : adj) std::sort(n.begin(), n.end());

  CandidateCellSet out;
  out.maxSides = maxSides;
  Search search{adj, maxSides, maxCandidates, out.cycles, {}, std::vector<char>(v, 0)};
  for (int v0 = 0; v0 < complex.vertexCount; ++v0) {
    search.path = {v0};
    search.onPath.assign(v, 0);
    search.onPath[static_cast<std::size_t>(v0)] = 1;
    for (int v1 : adj[static_cast<std::size_t>(v0)]) {
      if (v1 <= v0) continue;
      search.path.push_back(v1);
      search.onPath[static_cast<std::size_t>(v1)] = 1;
      search.extend();
      search.onPath[static_cast<std::size_t>(v1)] = 0;
      search.path.pop_back();
    }
  }

  std::sort(out.cycles.begin(), out.cycles.end(), [](const Polygon& a, const Polygon& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });

  const Index e = static_cast<Index>(complex.edges.size());
  out.columns.resize(e, static_cast<Index>(out.cycles.size()));
  std::vector<Eigen::Triplet<int>> triplets;
  for (std::size_t j = 0; j < out.cycles.size(); ++j)
    for (const auto& [row, sign] : polygonIncidenceEntries(complex, out.cycles[j]))
      triplets.emplace_back(row, static_cast<Index>(j), sign);
  out.columns.setFromTriplets(triplets.begin(), triplets.end());
  return out;
}

} // namespace cellsp
