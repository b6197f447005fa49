#pragma once

#include <vector>

#include "dmlst/state.hpp"

namespace dmlst {

enum class CaseId : int {
  B1 = 0, B2, B3a, B3b, B41, B42, B43, B5, B6, B7, B8a, B8b,
  NaiveBin,  // the plain <v IN; v LN> branch of the 2^n variant
};
inline constexpr int kCaseCount = 13;
const char* case_name(CaseId c);

// Forced path grown from a BN vertex of out-degree one. Interior vertices are
// free with exactly one arc leaving the prefix; the endpoint may be the vertex
// where that pattern breaks (including a non-free vertex, which at reduced
// states is always an out-arc-less floating leaf, hence a dead end).
struct ChainPath {
  std::vector<VertexId> vertices;  // v0..vk
  bool dead_end = false;           // vk has no arc leaving the prefix
};

struct Assignment {
  VertexId v;
  Label target;  // Label::In or Label::Ln
};

struct BranchDecision {
  CaseId case_id;
  VertexId pivot = -1;  // v
  std::vector<std::vector<Assignment>> children;
  std::vector<int> makeleaves_children;  // child indices running makeleaves(x1,x2)
  // context for the measure audit; -1 when not applicable
  VertexId x1 = -1, x2 = -1, z = -1, q = -1;
  ChainPath chain;
};

ChainPath find_chain(const SearchState& s, VertexId v);

// Algorithm case selection at a reduced, non-halted state.
BranchDecision select_case(const SearchState& s);

// B1/B2 when BN_1 is nonempty, else a binary branch on the lowest-id
// maximum-out-degree BN vertex.
BranchDecision select_case_naive(const SearchState& s);

// Every free in-neighbor of x1 or x2 other than the pivot becomes a floating
// leaf, every BN in-neighbor becomes a final leaf.
SearchState make_leaves(const SearchState& s, VertexId x1, VertexId x2, VertexId pivot);

// Copy the parent, run the child's assignments in order, then makeleaves if
// the child is flagged for it.
SearchState apply_child(const SearchState& parent, const BranchDecision& d, int child);

}  // namespace dmlst
