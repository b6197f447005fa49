#pragma once

#include "dmlst/digraph.hpp"
#include "dmlst/state.hpp"

namespace dmlst {

struct OracleResult {
  bool feasible = false;
  int max_leaves = -1;
  long trees_enumerated = 0;
};

inline constexpr int kOracleCap = 12;

// Exhaustive max-leaf out-branching rooted at r: every non-root vertex picks
// one in-arc, cycle-free assignments are exactly the spanning out-branchings.
// No pruning beyond cycle rejection, so this stays a dumb, trustworthy yardstick.
OracleResult solve_unconstrained(const DiGraph& g, VertexId r, int cap = kOracleCap);

// Same enumeration restricted to extensions of the state's tree: tree parents
// are forced, IN must end up internal, LN and FL must end up leaves.
OracleResult solve_constrained(const SearchState& s, int cap = kOracleCap);

// Number of spanning out-branchings rooted at r via the directed matrix-tree
// theorem (integer determinant); used to cross-check the enumeration count.
long arborescence_count(const DiGraph& g, VertexId r);

}  // namespace dmlst
