#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dmlst/branch.hpp"
#include "dmlst/measure.hpp"
#include "dmlst/reduce.hpp"
#include "dmlst/state.hpp"

namespace dmlst {

class MemoTable;

enum class Variant { BranchReduce, NaiveBN, Memoized };
enum class SolveStatus { Solved, Infeasible, Timeout };

struct SearchStats {
  long nodes_expanded = 0;
  int max_depth = 0;
  std::array<long, kRuleCount> reductions{};
  std::array<long, kCaseCount> branch_cases{};
  // audit-mode aggregates
  long audited_nodes = 0;
  double max_branching_number = 0.0;
  long claim_violations = 0;
  long bound_violations = 0;
  long mu_increase_violations = 0;
  long mu_nondecrease_violations = 0;  // branch children whose mu failed to drop
  std::vector<BranchAudit> audits;

  void merge(const SearchStats& other);
};

// called on every branching node with the reduced parent, the decision and
// the children right after their assignments; used by tests and snapshots
using NodeObserver = std::function<void(const SearchState&, const BranchDecision&,
                                        const std::vector<SearchState>&)>;

struct SolverConfig {
  Variant variant = Variant::BranchReduce;
  bool audit = false;
  bool audit_records = true;  // keep per-node audit entries, not just aggregates
  std::optional<long> node_limit;
  double alpha = 0.3;                   // memoization cutover fraction
  const MemoTable* memo_table = nullptr;  // reused across roots when preset
  NodeObserver on_branch;
};

struct SolveResult {
  SolveStatus status = SolveStatus::Infeasible;
  bool feasible = false;
  int leaf_count = -1;
  VertexId root = -1;           // the root the witness hangs from
  std::vector<Arc> tree;        // witness in original vertex ids
  SearchStats stats;
};

SolveResult solve_rooted(const DiGraph& g, VertexId r, const SolverConfig& cfg = {});
SolveResult solve(const DiGraph& g, const SolverConfig& cfg = {});
SolveResult solve_naive_bn(const DiGraph& g, VertexId r, const SolverConfig& cfg = {});

// run the recursion from an arbitrary prepared state (memo table construction,
// tests); the witness comes back in the state's own id space, contractions
// already expanded
SolveResult solve_from_state(const SearchState& s, const SolverConfig& cfg = {});

// spanning out-branching check against the original graph
bool check_out_branching(const DiGraph& g, VertexId root, std::span<const Arc> tree,
                         int expected_leaves, std::string* why = nullptr);

}  // namespace dmlst
