#include "dmlst/digraph.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <utility>

#include "dmlst/errors.hpp"

namespace dmlst {

namespace {

bool sorted_contains(const std::vector<VertexId>& xs, VertexId v) {
  return std::binary_search(xs.begin(), xs.end(), v);
}

void sorted_insert(std::vector<VertexId>& xs, VertexId v) {
  xs.insert(std::lower_bound(xs.begin(), xs.end(), v), v);
}

bool sorted_erase(std::vector<VertexId>& xs, VertexId v) {
  auto it = std::lower_bound(xs.begin(), xs.end(), v);
  if (it == xs.end() || *it != v) return false;
  xs.erase(it);
  return true;
}

}  // namespace

DiGraph::DiGraph(int n) : out_(n), in_(n), alive_(n, 1), live_count_(n) {}

DiGraph::DiGraph(int n, std::span<const Arc> arcs) : DiGraph(n) {
  for (const Arc& a : arcs) add_arc(a.tail, a.head);
}

std::vector<VertexId> DiGraph::vertices() const {
  std::vector<VertexId> vs;
  vs.reserve(live_count_);
  for (int v = 0; v < slot_count(); ++v)
    if (alive_[v]) vs.push_back(v);
  return vs;
}

std::vector<Arc> DiGraph::arcs() const {
  std::vector<Arc> as;
  as.reserve(arc_count_);
  for (int u = 0; u < slot_count(); ++u)
    for (VertexId v : out_[u]) as.push_back({u, v});
  return as;
}

bool DiGraph::has_arc(VertexId u, VertexId v) const {
  return u >= 0 && u < slot_count() && sorted_contains(out_[u], v);
}

void DiGraph::add_arc(VertexId u, VertexId v) {
  if (u < 0 || v < 0 || u >= slot_count() || v >= slot_count())
    throw Error("add_arc: vertex out of range");
  if (!alive_[u] || !alive_[v]) throw Error("add_arc: dead endpoint");
  if (u == v) throw Error("add_arc: self-loop");
  if (sorted_contains(out_[u], v)) throw Error("add_arc: duplicate arc");
  sorted_insert(out_[u], v);
  sorted_insert(in_[v], u);
  ++arc_count_;
}

bool DiGraph::remove_arc(VertexId u, VertexId v) {
  if (!sorted_erase(out_[u], v)) return false;
  sorted_erase(in_[v], u);
  --arc_count_;
  return true;
}

std::vector<VertexId> DiGraph::in_neighbors(VertexId v, std::span<const VertexId> restrict) const {
  std::vector<VertexId> res;
  for (VertexId u : in_[v])
    if (std::binary_search(restrict.begin(), restrict.end(), u)) res.push_back(u);
  return res;
}

std::vector<VertexId> DiGraph::out_neighbors(VertexId v, std::span<const VertexId> restrict) const {
  std::vector<VertexId> res;
  for (VertexId u : out_[v])
    if (std::binary_search(restrict.begin(), restrict.end(), u)) res.push_back(u);
  return res;
}

std::vector<char> DiGraph::reachable_from(VertexId r) const {
  return reachable_from(r, {});
}

std::vector<char> DiGraph::reachable_from(VertexId r, std::span<const Arc> removed) const {
  std::vector<char> seen(slot_count(), 0);
  if (r < 0 || r >= slot_count() || !alive_[r]) return seen;
  std::vector<VertexId> stack{r};
  seen[r] = 1;
  auto removed_has = [&](VertexId u, VertexId v) {
    for (const Arc& a : removed)
      if (a.tail == u && a.head == v) return true;
    return false;
  };
  while (!stack.empty()) {
    VertexId u = stack.back();
    stack.pop_back();
    for (VertexId v : out_[u]) {
      if (seen[v]) continue;
      if (!removed.empty() && removed_has(u, v)) continue;
      seen[v] = 1;
      stack.push_back(v);
    }
  }
  return seen;
}

bool DiGraph::is_arc_cut(std::span<const Arc> arcs, VertexId root) const {
  std::vector<char> before = reachable_from(root);
  std::vector<char> after = reachable_from(root, arcs);
  for (int v = 0; v < slot_count(); ++v)
    if (before[v] && !after[v]) return true;
  return false;
}

std::vector<BridgeInfo> DiGraph::undirected_bridges() const {
  const int n = slot_count();
  // underlying undirected simple graph
  std::vector<std::vector<VertexId>> adj(n);
  for (int u = 0; u < n; ++u) {
    for (VertexId v : out_[u]) {
      sorted_insert(adj[u], v);
      if (!sorted_contains(out_[v], u)) sorted_insert(adj[v], u);
    }
  }

  std::vector<int> disc(n, -1), low(n, 0), sub(n, 1), comp_size(n, 0), comp_of(n, -1);
  // bridge edge keyed by (min,max) -> (child vertex, subtree size)
  std::map<std::pair<VertexId, VertexId>, std::pair<VertexId, int>> bridge_edges;
  int timer = 0;

  std::function<void(VertexId, VertexId, int)> dfs = [&](VertexId v, VertexId parent, int comp) {
    disc[v] = low[v] = timer++;
    comp_of[v] = comp;
    for (VertexId w : adj[v]) {
      if (w == parent) continue;
      if (disc[w] == -1) {
        dfs(w, v, comp);
        sub[v] += sub[w];
        low[v] = std::min(low[v], low[w]);
        if (low[w] > disc[v]) {
          bridge_edges[{std::min(v, w), std::max(v, w)}] = {w, sub[w]};
        }
      } else {
        low[v] = std::min(low[v], disc[w]);
      }
    }
  };

  int comps = 0;
  for (int v = 0; v < n; ++v) {
    if (alive_[v] && disc[v] == -1) {
      int start = timer;
      dfs(v, -1, comps);
      comp_size[comps] = timer - start;
      ++comps;
    }
  }

  std::vector<BridgeInfo> result;
  for (int u = 0; u < n; ++u) {
    for (VertexId v : out_[u]) {
      if (sorted_contains(out_[v], u)) continue;  // reverse arc keeps the edge alive
      auto it = bridge_edges.find({std::min(u, VertexId(v)), std::max(u, VertexId(v))});
      if (it == bridge_edges.end()) continue;
      auto [child, child_size] = it->second;
      int total = comp_size[comp_of[u]];
      int head_side = (child == v) ? child_size : total - child_size;
      result.push_back({{u, v}, total - head_side, head_side});
    }
  }
  std::sort(result.begin(), result.end());
  return result;
}

std::vector<std::vector<VertexId>> DiGraph::scc() const {
  const int n = slot_count();
  std::vector<int> disc(n, -1), low(n, 0);
  std::vector<char> on_stack(n, 0);
  std::vector<VertexId> stack;
  std::vector<std::vector<VertexId>> comps;
  int timer = 0;

  std::function<void(VertexId)> dfs = [&](VertexId v) {
    disc[v] = low[v] = timer++;
    stack.push_back(v);
    on_stack[v] = 1;
    for (VertexId w : out_[v]) {
      if (disc[w] == -1) {
        dfs(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack[w]) {
        low[v] = std::min(low[v], disc[w]);
      }
    }
    if (low[v] == disc[v]) {
      std::vector<VertexId> comp;
      for (;;) {
        VertexId w = stack.back();
        stack.pop_back();
        on_stack[w] = 0;
        comp.push_back(w);
        if (w == v) break;
      }
      std::sort(comp.begin(), comp.end());
      comps.push_back(std::move(comp));
    }
  };

  for (int v = 0; v < n; ++v)
    if (alive_[v] && disc[v] == -1) dfs(v);
  std::sort(comps.begin(), comps.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return comps;
}

ContractionRecord DiGraph::contract(VertexId a, VertexId b) {
  if (!has_arc(a, b)) throw Error("contract: arc not present");
  ContractionRecord rec{a, b, out_[a], out_[b], in_[a]};

  std::vector<VertexId> b_in = in_[b];
  std::vector<VertexId> b_out = out_[b];
  for (VertexId w : b_in) remove_arc(w, b);
  for (VertexId w : b_out) remove_arc(b, w);
  for (VertexId w : b_in)
    if (w != a && !has_arc(w, a)) add_arc(w, a);
  for (VertexId w : b_out)
    if (w != a && !has_arc(a, w)) add_arc(a, w);

  alive_[b] = 0;
  --live_count_;
  return rec;
}

std::vector<Arc> expand_tree(std::vector<Arc> tree, std::span<const ContractionRecord> log) {
  for (auto it = log.rbegin(); it != log.rend(); ++it) {
    const ContractionRecord& rec = *it;
    for (Arc& arc : tree) {
      if (arc.tail == rec.survivor && arc.head != rec.retired) {
        // route through the retired endpoint whenever it owned the original
        // arc, so its subtree stays attached and no spurious leaf appears
        if (sorted_contains(rec.retired_out, arc.head)) {
          arc.tail = rec.retired;
        } else if (!sorted_contains(rec.survivor_out, arc.head)) {
          throw ContractViolation("expand_tree: arc has no pre-contraction original");
        }
      } else if (arc.head == rec.survivor) {
        if (!sorted_contains(rec.survivor_in, arc.tail))
          throw ContractViolation("expand_tree: merged vertex entered through retired side");
      }
    }
    tree.push_back({rec.survivor, rec.retired});
  }
  std::sort(tree.begin(), tree.end());
  return tree;
}

}  // namespace dmlst
