#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <vector>

namespace dmlst {

using VertexId = int;

struct Arc {
  VertexId tail = -1;
  VertexId head = -1;
  auto operator<=>(const Arc&) const = default;
};

// Everything needed to map a tree of the contracted graph back into the
// graph as it was just before contract(survivor, retired) ran.
struct ContractionRecord {
  VertexId survivor = -1;
  VertexId retired = -1;
  std::vector<VertexId> survivor_out;  // N^+(survivor) before contraction
  std::vector<VertexId> retired_out;   // N^+(retired) before contraction
  std::vector<VertexId> survivor_in;   // N^-(survivor) before contraction
};

struct BridgeInfo {
  Arc arc;
  int side_tail = 0;  // vertices in the component holding arc.tail after removal
  int side_head = 0;
  auto operator<=>(const BridgeInfo&) const = default;
};

// Simple digraph over dense ids [0, slot_count). Contraction retires ids
// instead of renumbering, so ids are stable for the lifetime of a search.
class DiGraph {
 public:
  DiGraph() = default;
  explicit DiGraph(int n);
  DiGraph(int n, std::span<const Arc> arcs);

  int slot_count() const { return static_cast<int>(out_.size()); }
  int vertex_count() const { return live_count_; }
  int arc_count() const { return arc_count_; }
  bool alive(VertexId v) const { return alive_[v]; }
  std::vector<VertexId> vertices() const;  // live ids, ascending
  std::vector<Arc> arcs() const;           // ascending (tail, head)

  bool has_arc(VertexId u, VertexId v) const;
  void add_arc(VertexId u, VertexId v);     // rejects self-loops, duplicates, dead endpoints
  bool remove_arc(VertexId u, VertexId v);  // false if absent

  const std::vector<VertexId>& out(VertexId v) const { return out_[v]; }
  const std::vector<VertexId>& in(VertexId v) const { return in_[v]; }
  int out_degree(VertexId v) const { return static_cast<int>(out_[v].size()); }
  int in_degree(VertexId v) const { return static_cast<int>(in_[v].size()); }
  int degree(VertexId v) const { return out_degree(v) + in_degree(v); }

  // N^-_{restrict}(v) and N^+_{restrict}(v); restrict given as a sorted id list
  std::vector<VertexId> in_neighbors(VertexId v, std::span<const VertexId> restrict) const;
  std::vector<VertexId> out_neighbors(VertexId v, std::span<const VertexId> restrict) const;

  // mask over slots; dead slots are false, r itself always true
  std::vector<char> reachable_from(VertexId r) const;
  std::vector<char> reachable_from(VertexId r, std::span<const Arc> removed) const;

  // true iff removing `arcs` makes some root-reachable vertex unreachable
  bool is_arc_cut(std::span<const Arc> arcs, VertexId root) const;

  // arcs whose removal disconnects the underlying undirected graph, with the
  // sizes of the two components left behind; an arc backed by a reverse arc
  // is never a bridge (the undirected edge survives)
  std::vector<BridgeInfo> undirected_bridges() const;

  // strongly connected components over live vertices; each component sorted,
  // components ordered by smallest member
  std::vector<std::vector<VertexId>> scc() const;

  // merge b into a along arc (a,b); parallels collapse, self-loops drop, b retires
  ContractionRecord contract(VertexId a, VertexId b);

 private:
  std::vector<std::vector<VertexId>> out_;
  std::vector<std::vector<VertexId>> in_;
  std::vector<char> alive_;
  int live_count_ = 0;
  int arc_count_ = 0;
};

// Replay contraction records in reverse, rewriting a tree of the final
// contracted graph into a tree of the graph the log started from.
std::vector<Arc> expand_tree(std::vector<Arc> tree, std::span<const ContractionRecord> log);

}  // namespace dmlst
