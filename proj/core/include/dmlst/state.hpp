#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "dmlst/digraph.hpp"

namespace dmlst {

// Vertex roles during the search. Transitions: free -> {IN,LN,BN,FL},
// BN -> {IN,LN}, FL -> LN; IN and LN are final.
enum class Label : std::uint8_t { Free, In, Ln, Bn, Fl };

const char* label_name(Label l);

// One node of the recursion: graph + labels + partial tree + contraction log.
// The tree is held as a parent map; the root is the only tree vertex without
// a parent. Label transitions keep the state clean as they go: a vertex that
// gains a parent (BN/IN/LN) loses its other in-arcs, leaves (LN) and floating
// leaves (FL) lose the arcs they can never use. That keeps every intermediate
// state consistent even in the middle of a branch child's assignment list;
// the fixpoint rules R1/R4 still cover states built with stale arcs.
struct SearchState {
  DiGraph graph;
  VertexId root = -1;
  std::vector<Label> labels;    // slot-indexed; retired slots keep their last label
  std::vector<VertexId> parent; // -1 for root and non-tree vertices
  std::vector<char> in_tree;    // root and everything with a parent
  int tree_size = 0;            // |T|
  std::vector<ContractionRecord> contractions;

  Label label(VertexId v) const { return labels[v]; }
  bool tree_has(VertexId u, VertexId v) const { return parent[v] == u; }
  std::vector<Arc> tree_arcs() const;

  int count(Label l) const;
  std::vector<VertexId> with_label(Label l) const;  // live, ascending
  std::vector<VertexId> bn_with_out_degree(int d) const;

  // free U FL = empty and BN = empty
  bool is_spanning() const;
  int leaf_count() const { return count(Label::Ln); }

  // in-place transition cores; the pure wrappers below copy first
  void set_internal_inplace(VertexId v);
  void set_leaf_inplace(VertexId v);
  void make_floating_inplace(VertexId v);

  // consistency check used by tests and debug paths; returns a reason or ""
  std::string invariant_violation() const;
};

SearchState initial_state(const DiGraph& g, VertexId r);

SearchState set_internal(const SearchState& s, VertexId v);
SearchState set_leaf(const SearchState& s, VertexId v);

}  // namespace dmlst
