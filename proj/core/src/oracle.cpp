#include "dmlst/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "dmlst/errors.hpp"

namespace dmlst {

namespace {

struct Enumerator {
  const DiGraph& g;
  VertexId root;
  std::vector<VertexId> order;                 // vertices that still pick a parent
  std::vector<std::vector<VertexId>> choices;  // candidate parents per order slot
  std::vector<VertexId> parent;                // slot-indexed, -1 = unassigned
  std::vector<char> must_internal;             // IN vertices
  std::vector<char> must_leaf;                 // LN and FL vertices
  OracleResult res;

  explicit Enumerator(const DiGraph& graph, VertexId r)
      : g(graph), root(r), parent(graph.slot_count(), -1),
        must_internal(graph.slot_count(), 0), must_leaf(graph.slot_count(), 0) {}

  bool creates_cycle(VertexId v, VertexId p) const {
    VertexId cur = p;
    while (cur != -1) {
      if (cur == v) return true;
      cur = parent[cur];
    }
    return false;
  }

  void finish() {
    ++res.trees_enumerated;
    std::vector<int> children(g.slot_count(), 0);
    for (VertexId v : g.vertices())
      if (parent[v] != -1) ++children[parent[v]];
    int leaves = 0;
    for (VertexId v : g.vertices()) {
      bool internal = children[v] > 0;
      if (must_internal[v] && !internal) return;
      if (must_leaf[v] && internal) return;
      bool in_branching = (v == root) || parent[v] != -1;
      if (in_branching && !internal && v != root) ++leaves;
      // a childless root only happens for n = 1, which callers handle directly
    }
    res.feasible = true;
    res.max_leaves = std::max(res.max_leaves, leaves);
  }

  void recurse(std::size_t i) {
    if (i == order.size()) {
      finish();
      return;
    }
    VertexId v = order[i];
    for (VertexId p : choices[i]) {
      if (creates_cycle(v, p)) continue;
      parent[v] = p;
      recurse(i + 1);
      parent[v] = -1;
    }
  }
};

}  // namespace

OracleResult solve_unconstrained(const DiGraph& g, VertexId r, int cap) {
  if (g.vertex_count() > cap)
    throw CapExceeded("oracle: n=" + std::to_string(g.vertex_count()) + " exceeds cap " +
                      std::to_string(cap));
  if (g.vertex_count() == 1) return {true, 0, 1};

  Enumerator e(g, r);
  for (VertexId v : g.vertices()) {
    if (v == r) continue;
    e.order.push_back(v);
    e.choices.push_back(g.in(v));
    if (e.choices.back().empty()) return {false, -1, 0};
  }
  e.recurse(0);
  return e.res;
}

OracleResult solve_constrained(const SearchState& s, int cap) {
  const DiGraph& g = s.graph;
  if (g.vertex_count() > cap)
    throw CapExceeded("oracle: n=" + std::to_string(g.vertex_count()) + " exceeds cap " +
                      std::to_string(cap));
  if (g.vertex_count() == 1) return {true, 0, 1};

  Enumerator e(g, s.root);
  for (VertexId v : g.vertices()) {
    switch (s.label(v)) {
      case Label::In: e.must_internal[v] = 1; break;
      case Label::Ln:
      case Label::Fl: e.must_leaf[v] = 1; break;
      default: break;
    }
  }
  for (VertexId v : g.vertices()) {
    if (v == s.root) continue;
    if (s.parent[v] != -1) {
      e.parent[v] = s.parent[v];  // tree arc forced
      continue;
    }
    e.order.push_back(v);
    std::vector<VertexId> cand;
    for (VertexId u : g.in(v))
      if (s.label(u) != Label::Ln && s.label(u) != Label::Fl) cand.push_back(u);
    if (cand.empty()) return {false, -1, 0};
    e.choices.push_back(std::move(cand));
  }
  e.recurse(0);
  return e.res;
}

long arborescence_count(const DiGraph& g, VertexId r) {
  // Tutte: count = det of the in-degree Laplacian with row/column r removed
  std::vector<VertexId> vs = g.vertices();
  std::vector<VertexId> rest;
  for (VertexId v : vs)
    if (v != r) rest.push_back(v);
  const int k = static_cast<int>(rest.size());
  if (k == 0) return 1;
  std::vector<std::vector<double>> m(k, std::vector<double>(k, 0.0));
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      VertexId a = rest[i], b = rest[j];
      if (i == j)
        m[i][j] = g.in_degree(b);
      else
        m[i][j] = g.has_arc(a, b) ? -1.0 : 0.0;
    }
  }
  // Gaussian elimination with partial pivoting; entries stay tiny at n <= 5
  double det = 1.0;
  for (int c = 0; c < k; ++c) {
    int piv = -1;
    for (int rrow = c; rrow < k; ++rrow)
      if (std::abs(m[rrow][c]) > 1e-9) { piv = rrow; break; }
    if (piv == -1) return 0;
    if (piv != c) {
      std::swap(m[piv], m[c]);
      det = -det;
    }
    det *= m[c][c];
    for (int rrow = c + 1; rrow < k; ++rrow) {
      double f = m[rrow][c] / m[c][c];
      for (int cc = c; cc < k; ++cc) m[rrow][cc] -= f * m[c][cc];
    }
  }
  return std::lround(det);
}

}  // namespace dmlst
