#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dmlst/state.hpp"

namespace dmlst {

enum class HaltKind { None, AnswerNo, Solved };

struct HaltOutcome {
  HaltKind kind = HaltKind::None;
  const char* rule = "";  // "H1".."H3" when AnswerNo, "H2" when Solved
  int leaf_count = -1;    // Solved only
};

enum class Rule : int { R1 = 0, R2, R3, R4, R5, R6 };
inline constexpr int kRuleCount = 6;
const char* rule_name(Rule r);

struct ReductionEvent {
  Rule rule;
  VertexId vertex = -1;            // the qualifying vertex (R1-R5) or arc tail (R6)
  Arc arc{-1, -1};                 // R6 contraction arc
  std::vector<VertexId> affected;  // vertices whose label or adjacency changed
};

// H1, H2, H3 in that order.
HaltOutcome check_halt(const SearchState& s);

// Apply the highest-priority applicable rule at its lowest qualifying vertex
// (R6: lexicographically smallest arc). Returns the event, or nullopt when a
// halting rule fires first or nothing applies; `halt` reports which.
std::optional<ReductionEvent> reduce_step(SearchState& s, HaltOutcome& halt, bool use_r6 = true);

struct ReduceOutcome {
  SearchState state;
  std::vector<ReductionEvent> events;
  HaltOutcome halt;  // kind == None means reduced and still open
};

// Run reduce_step until a halting rule fires or no rule applies.
// use_r6=false is the restriction the naive 2^n variant and the memoization
// phase 1 rely on (contraction would leave non-induced subgraphs behind).
ReduceOutcome reduce_fixpoint(SearchState s, bool use_r6 = true);

// true when neither a halting rule nor any reduction rule applies
bool is_reduced(const SearchState& s, bool use_r6 = true);

}  // namespace dmlst
