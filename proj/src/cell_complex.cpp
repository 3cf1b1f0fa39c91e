#include "cellsp/cell_complex.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "cellsp/errors.hpp"

namespace cellsp {

namespace {

std::string polygonToString(const Polygon& p) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < p.size(); ++i) os << (i ? " " : "") << p[i];
  os << ")";
  return os.str();
}

} // namespace

Polygon canonicalPolygon(const Polygon& cycle) {
  if (cycle.size() < 3)
    throw StructuralError("polygon " + polygonToString(cycle) + " has fewer than 3 vertices");
  const std::size_t n = cycle.size();
  const std::size_t start =
      static_cast<std::size_t>(std::min_element(cycle.begin(), cycle.end()) - cycle.begin());
  Polygon forward(n), backward(n);
  for (std::size_t i = 0; i < n; ++i) {
    forward[i] = cycle[(start + i) % n];
    backward[i] = cycle[(start + n - i) % n];
  }
  return forward[1] < backward[1] ? forward : backward;
}

CellComplex makeComplex(int vertexCount,
                        std::vector<std::pair<int, int>> edges,
                        std::vector<Polygon> polygons) {
  CellComplex complex;
  complex.vertexCount = vertexCount;
  for (auto& [u, v] : edges)
    if (u > v) std::swap(u, v);
  std::sort(edges.begin(), edges.end());
  complex.edges = std::move(edges);
  for (auto& p : polygons) p = canonicalPolygon(p);
  std::sort(polygons.begin(), polygons.end(), [](const Polygon& a, const Polygon& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  complex.polygons = std::move(polygons);
  validateComplex(complex);
  return complex;
}

void validateComplex(const CellComplex& complex) {
  if (complex.vertexCount < 0) throw StructuralError("negative vertex count");
  for (std::size_t i = 0; i < complex.edges.size(); ++i) {
    const auto [u, v] = complex.edges[i];
    std::ostringstream name;
    name << "edge (" << u << " " << v << ")";
    if (u == v) throw StructuralError(name.str() + " joins a vertex to itself");
    if (u > v) throw StructuralError(name.str() + " is not stored with ascending endpoints");
    if (u < 0 || v >= complex.vertexCount) throw StructuralError(name.str() + " is out of range");
    if (i > 0 && complex.edges[i - 1] == complex.edges[i])
      throw StructuralError("duplicate " + name.str());
    if (i > 0 && !(complex.edges[i - 1] < complex.edges[i]))
      throw StructuralError("edges are not sorted at " + name.str());
  }
  for (std::size_t i = 0; i < complex.polygons.size(); ++i) {
    const Polygon& p = complex.polygons[i];
    const std::string name = "polygon " + polygonToString(p);
    if (p.size() < 3) throw StructuralError(name + " has fewer than 3 vertices");
    std::set<int> distinct(p.begin(), p.end());
    if (distinct.size() != p.size()) throw StructuralError(name + " repeats a vertex");
    for (int v : p)
      if (v < 0 || v >= complex.vertexCount) throw StructuralError(name + " is out of range");
    if (p != canonicalPolygon(p)) throw StructuralError(name + " is not in canonical orientation");
    for (std::size_t k = 0; k < p.size(); ++k) {
      const int u = p[k];
      const int v = p[(k + 1) % p.size()];
      if (edgeIndex(complex, u, v) < 0) {
        std::ostringstream os;
        os << name << " uses missing edge (" << std::min(u, v) << " " << std::max(u, v) << ")";
        throw StructuralError(os.str());
      }
    }
    if (i > 0 && complex.polygons[i - 1] == p) throw StructuralError("duplicate " + name);
  }
}

Index edgeIndex(const CellComplex& complex, int u, int v) {
  if (u > v) std::swap(u, v);
  const std::pair<int, int> key{u, v};
  const auto it = std::lower_bound(complex.edges.begin(), complex.edges.end(), key);
  if (it == complex.edges.end() || *it != key) return -1;
  return it - complex.edges.begin();
}

CellComplex skeleton(const CellComplex& complex) {
  CellComplex out = complex;
  out.polygons.clear();
  return out;
}

CellComplex restrictToTriangles(const CellComplex& complex) {
  CellComplex out = complex;
  std::erase_if(out.polygons, [](const Polygon& p) { return p.size() != 3; });
  return out;
}

CellComplex readComplex(std::istream& in) {
  std::string line;
  int lineNo = 0;
  bool sawHeader = false, sawVertices = false;
  int vertexCount = 0;
  std::vector<std::pair<int, int>> edges;
  std::vector<Polygon> polygons;
  while (std::getline(in, line)) {
    ++lineNo;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string word;
    if (!(ls >> word)) continue;
    const std::string where = " at line " + std::to_string(lineNo);
    if (!sawHeader) {
      std::string version;
      if (word != "cellcomplex" || !(ls >> version) || version != "v1")
        throw IoError("expected 'cellcomplex v1' header" + where);
      sawHeader = true;
      continue;
    }
    if (word == "vertices") {
      if (sawVertices) throw IoError("repeated vertices line" + where);
      if (!(ls >> vertexCount)) throw IoError("unreadable vertex count" + where);
      sawVertices = true;
    } else if (word == "edge") {
      if (!sawVertices) throw IoError("edge before vertices line" + where);
      int u, v;
      if (!(ls >> u >> v)) throw IoError("unreadable edge" + where);
      edges.emplace_back(u, v);
    } else if (word == "polygon") {
      if (!sawVertices) throw IoError("polygon before vertices line" + where);
      Polygon p;
      int v;
      while (ls >> v) p.push_back(v);
      if (p.size() < 3) throw IoError("polygon with fewer than 3 vertices" + where);
      polygons.push_back(std::move(p));
    } else {
      throw IoError("unknown directive '" + word + "'" + where);
    }
    std::string trailing;
    if (ls >> trailing) throw IoError("trailing content '" + trailing + "'" + where);
  }
  if (!sawHeader) throw IoError("missing 'cellcomplex v1' header");
  if (!sawVertices) throw IoError("missing vertices line");
  try {
    return makeComplex(vertexCount, std::move(edges), std::move(polygons));
  } catch (const StructuralError& e) {
    throw IoError(std::string("invalid complex: ") + e.what());
  }
}

CellComplex readComplexFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  return readComplex(in);
}

void writeComplex(const CellComplex& complex, std::ostream& out) {
  out << "cellcomplex v1\n";
  out << "vertices " << complex.vertexCount << "\n";
  for (const auto& [u, v] : complex.edges) out << "edge " << u << " " << v << "\n";
  for (const Polygon& p : complex.polygons) {
    out << "polygon";
    for (int v : p) out << " " << v;
    out << "\n";
  }
}

void writeComplexFile(const CellComplex& complex, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  writeComplex(complex, out);
}

} // namespace cellsp
