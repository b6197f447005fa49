#include "dmlst/state.hpp"

#include <algorithm>

#include "dmlst/errors.hpp"

namespace dmlst {

const char* label_name(Label l) {
  switch (l) {
    case Label::Free: return "free";
    case Label::In: return "IN";
    case Label::Ln: return "LN";
    case Label::Bn: return "BN";
    case Label::Fl: return "FL";
  }
  return "?";
}

namespace {

// drop every in-arc of v except its tree parent arc
void clean_nontree_in(SearchState& s, VertexId v) {
  std::vector<VertexId> ins = s.graph.in(v);
  for (VertexId u : ins)
    if (s.parent[v] != u) s.graph.remove_arc(u, v);
}

// a fresh leaf keeps only its parent arc
void clean_leaf(SearchState& s, VertexId v) {
  clean_nontree_in(s, v);
  std::vector<VertexId> outs = s.graph.out(v);
  for (VertexId w : outs) s.graph.remove_arc(v, w);
}

void attach_arc(SearchState& s, VertexId v, VertexId w) {
  s.parent[w] = v;
  s.in_tree[w] = 1;
  ++s.tree_size;
}

// add all remaining out-arcs of the new internal vertex v to the tree:
// free heads become BN, floating leaves become attached LN, anything that
// already has a parent makes the arc dead and it is dpropped
void attach_out_arcs(SearchState& s, VertexId v) {
  std::vector<VertexId> outs = s.graph.out(v);
  for (VertexId w : outs) {
    if (s.parent[w] == v) continue;
    switch (s.labels[w]) {
      case Label::Free:
        attach_arc(s, v, w);
        s.labels[w] = Label::Bn;
        clean_nontree_in(s, w);
        break;
      case Label::Fl:
        attach_arc(s, v, w);
        s.labels[w] = Label::Ln;
        clean_leaf(s, w);
        break;
      case Label::Bn:
      case Label::Ln:
      case Label::In:
        s.graph.remove_arc(v, w);
        break;
    }
  }
}

}  // namespace

std::vector<Arc> SearchState::tree_arcs() const {
  std::vector<Arc> t;
  t.reserve(tree_size);
  for (int v = 0; v < graph.slot_count(); ++v)
    if (parent[v] >= 0) t.push_back({parent[v], v});
  std::sort(t.begin(), t.end());
  return t;
}

int SearchState::count(Label l) const {
  int c = 0;
  for (int v = 0; v < graph.slot_count(); ++v)
    if (graph.alive(v) && labels[v] == l) ++c;
  return c;
}

std::vector<VertexId> SearchState::with_label(Label l) const {
  std::vector<VertexId> vs;
  for (int v = 0; v < graph.slot_count(); ++v)
    if (graph.alive(v) && labels[v] == l) vs.push_back(v);
  return vs;
}

std::vector<VertexId> SearchState::bn_with_out_degree(int d) const {
  std::vector<VertexId> vs;
  for (int v = 0; v < graph.slot_count(); ++v)
    if (graph.alive(v) && labels[v] == Label::Bn && graph.out_degree(v) == d) vs.push_back(v);
  return vs;
}

bool SearchState::is_spanning() const {
  for (int v = 0; v < graph.slot_count(); ++v)
    if (graph.alive(v) && (labels[v] == Label::Free || labels[v] == Label::Fl)) return false;
  return true;
}

void SearchState::set_internal_inplace(VertexId v) {
  if (labels[v] != Label::Bn)
    throw IllegalTransition(std::string("set_internal: ") + label_name(labels[v]) + " -> IN");
  clean_nontree_in(*this, v);
  labels[v] = Label::In;
  attach_out_arcs(*this, v);
}

void SearchState::set_leaf_inplace(VertexId v) {
  if (labels[v] != Label::Bn)
    throw IllegalTransition(std::string("set_leaf: ") + label_name(labels[v]) +
                            " -> LN (only BN may be finalized directly; FL/free attach via an"
                            " internalized in-neighbor)");
  labels[v] = Label::Ln;
  clean_leaf(*this, v);
}

void SearchState::make_floating_inplace(VertexId v) {
  if (labels[v] != Label::Free)
    throw IllegalTransition(std::string("make_floating: ") + label_name(labels[v]) + " -> FL");
  labels[v] = Label::Fl;
  std::vector<VertexId> outs = graph.out(v);
  for (VertexId w : outs) graph.remove_arc(v, w);
}

SearchState initial_state(const DiGraph& g, VertexId r) {
  if (g.vertex_count() < 2) throw DegenerateInput("initial_state: need at least two vertices");
  if (r < 0 || r >= g.slot_count() || !g.alive(r)) throw Error("initial_state: bad root");
  std::vector<char> reach = g.reachable_from(r);
  for (VertexId v : g.vertices())
    if (!reach[v])
      throw InfeasibleRoot("vertex " + std::to_string(v) + " unreachable from root " +
                           std::to_string(r));

  SearchState s;
  s.graph = g;
  s.root = r;
  s.labels.assign(g.slot_count(), Label::Free);
  s.parent.assign(g.slot_count(), -1);
  s.in_tree.assign(g.slot_count(), 0);
  s.labels[r] = Label::In;
  s.in_tree[r] = 1;
  // arcs into the root can never sit in an out-branching rooted there
  std::vector<VertexId> ins = s.graph.in(r);
  for (VertexId u : ins) s.graph.remove_arc(u, r);
  attach_out_arcs(s, r);
  return s;
}

SearchState set_internal(const SearchState& s, VertexId v) {
  SearchState t = s;
  t.set_internal_inplace(v);
  return t;
}

SearchState set_leaf(const SearchState& s, VertexId v) {
  SearchState t = s;
  t.set_leaf_inplace(v);
  return t;
}

std::string SearchState::invariant_violation() const {
  auto fail = [](const std::string& m) { return m; };
  if (root < 0 || !graph.alive(root)) return fail("root missing");
  if (labels[root] != Label::In) return fail("root not IN");
  if (parent[root] != -1) return fail("root has a parent");
  if (graph.in_degree(root) != 0) return fail("root has in-arcs");

  int parents = 0;
  for (VertexId v : graph.vertices()) {
    Label l = labels[v];
    bool tree_label = (l == Label::In || l == Label::Ln || l == Label::Bn);
    if (tree_label != bool(in_tree[v])) return fail("in_tree flag disagrees with label");
    if (v != root && tree_label) {
      if (parent[v] < 0) return fail("tree vertex without parent");
      if (!graph.has_arc(parent[v], v)) return fail("parent arc missing from graph");
      ++parents;
    }
    if (!tree_label && parent[v] != -1) return fail("non-tree vertex with parent");
    if (l == Label::Fl && graph.out_degree(v) != 0) return fail("FL vertex with out-arcs");
    if (l == Label::Ln) {
      if (graph.out_degree(v) != 0) return fail("LN vertex with out-arcs");
      if (graph.in_degree(v) != 1) return fail("LN vertex in-degree != 1");
    }
    if (tree_label && v != root) {
      // only the parent arc may enter a tree vertex
      for (VertexId u : graph.in(v))
        if (u != parent[v]) return fail("tree vertex with stray in-arc");
    }
    if (l == Label::In) {
      for (VertexId w : graph.out(v))
        if (parent[w] != v) return fail("IN vertex with out-arc outside tree");
    }
    if (l == Label::Bn) {
      for (VertexId w : graph.out(v))
        if (parent[w] == v) return fail("BN vertex with a tree child");
    }
  }
  if (parents != tree_size) return fail("tree_size mismatch");

  // parent pointers must lead to the root without cycles
  for (VertexId v : graph.vertices()) {
    if (!in_tree[v]) continue;
    VertexId cur = v;
    int steps = 0;
    while (cur != root) {
      cur = parent[cur];
      if (cur < 0 || ++steps > graph.slot_count()) return fail("parent chain broken");
    }
  }
  return "";
}

}  // namespace dmlst
