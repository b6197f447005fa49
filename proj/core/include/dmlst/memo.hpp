#pragma once

#include <cstdint>
#include <iosfwd>
#include <unordered_map>
#include <vector>

#include "dmlst/digraph.hpp"
#include "dmlst/solver.hpp"
#include "dmlst/state.hpp"

namespace dmlst {

// Key over ORIGINAL vertex ids: the still-open region, its BN vertices and
// its floating leaves. The fl component extends the plain (subset, BN) key:
// phase 1 creates floating leaves that a completion must keep as leaves.
struct MemoKey {
  std::uint32_t vset = 0;
  std::uint32_t bnset = 0;
  std::uint32_t flset = 0;
  bool operator==(const MemoKey&) const = default;
};

struct MemoKeyHash {
  std::size_t operator()(const MemoKey& k) const;
};

// Optimal completion of the keyed region, solved on the augmented instance
// (subset + fresh root r' + pendant y, r' feeding every BN vertex).
struct MemoEntry {
  bool feasible = false;
  int leaf_count = -1;          // leaves of the augmented tree, y included
  std::vector<Arc> inner_arcs;  // tree arcs among the subset, original ids
};

class MemoTable {
 public:
  MemoTable() = default;
  MemoTable(int n, double alpha);

  int n() const { return n_; }
  double alpha() const { return alpha_; }
  int max_subset() const { return max_subset_; }
  std::size_t size() const { return entries_.size(); }

  const MemoEntry* find(const MemoKey& k) const;
  void insert(const MemoKey& k, MemoEntry e);

  void dump(std::ostream& os) const;
  static MemoTable load(std::istream& is);

 private:
  int n_ = 0;
  double alpha_ = 0.0;
  int max_subset_ = 0;
  std::unordered_map<MemoKey, MemoEntry, MemoKeyHash> entries_;
};

inline constexpr long kDefaultTableBudget = 4'000'000;

// exact number of (subset, bn, fl) keys the table will hold
long table_key_count(int n, double alpha);

// Fill the table for every induced subgraph of size <= ceil(alpha*n) and every
// disjoint (bn, fl) labeling, solving each augmented instance exactly.
MemoTable build_table(const DiGraph& g, double alpha, long budget = kDefaultTableBudget);

struct AugmentedInstance {
  DiGraph graph;               // compact: subset first, then r', then y
  VertexId rprime = -1, y = -1;
  std::vector<VertexId> orig;  // compact index -> original id
  bool feasible_shape = true;  // false when r' cannot even reach the subset
  SearchState initial;         // prepared labels, only valid when feasible_shape
};

AugmentedInstance build_augmented(const DiGraph& g, const MemoKey& key);

// Phase 1: the 2^n-style branching (R1-R5 only, B1/B2 plus binary branches)
// until the open region fits the table, then complete by lookup.
SolveResult solve_memoized(const DiGraph& g, VertexId r, const MemoTable& table,
                           const SolverConfig& cfg = {});

}  // namespace dmlst
