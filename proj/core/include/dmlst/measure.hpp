#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dmlst/branch.hpp"
#include "dmlst/state.hpp"

namespace dmlst {

// All measure bookkeeping runs in exact fixed point: one unit = 1e-4.
using Fixed = std::int64_t;
inline constexpr double kFixedScale = 1e-4;
inline double to_real(Fixed f) { return static_cast<double>(f) * kFixedScale; }

// Vertex weights of the measure. BN weighs by out-degree, free by in-degree,
// floating leaves are flat; IN/LN (and the degree-0 classes) weigh nothing.
struct MeasureConstants {
  static constexpr Fixed eps_fl = 2251;
  static constexpr Fixed eps_bn1 = 6668;
  static constexpr Fixed eps_bn_ge2 = 7749;
  static constexpr Fixed eps_free1 = 9762;
  static constexpr Fixed eps_free2 = 9935;
  static constexpr Fixed eps_free_ge3 = 10000;
  static constexpr Fixed eta = 2013;

  static Fixed bn_weight(int out_degree);
  static Fixed free_weight(int in_degree);
  // epsilon^free_i - epsilon^free_{i-1}; delta_free(1) = eps_free1, 0 for i >= 4
  static Fixed delta_free(int i);
  // recomputed minimum of the seven candidate gaps; must equal eta
  static Fixed eta_from_table();
};

Fixed mu(const SearchState& s);

// Unique tau >= 1 with sum tau^(-d) = 1; single-element lists give 1.
double branching_number(std::span<const double> deltas);

struct ChildMeasure {
  Fixed mu_after_assign;  // right after the child's assignments + makeleaves
  Fixed mu_after_reduce;  // at the child's own decision point (or halt)
  bool halted;            // the child hit a halting rule in its own fixpoint
  // the child's own per-grandchild decreases (live ones), used to fold the
  // succeeding call into B4.3's branching number
  std::vector<double> next_observed;
};

struct BranchAudit {
  CaseId case_id;
  Fixed mu_parent = 0;
  std::vector<Fixed> observed;         // mu_parent - mu_after_reduce, per child
  std::vector<Fixed> assign_observed;  // mu_parent - mu_after_assign, per child
  std::vector<Fixed> claimed;          // empty when the case has no per-node formula
  std::vector<char> child_live;
  // Over live children's observed decreases. B4.3 is special: its analysis
  // only closes together with the next call, so the first branch contributes
  // its grandchildren's telescoped decreases instead of its own.
  double branching_num = 1.0;
  bool claim_violation = false;
  bool bound_violation = false;
};

inline constexpr double kBranchingBound = 1.9043;
inline constexpr double kBranchingTol = 1e-9;

// Transcription of the per-case decrease formulas, evaluated on the parent
// state. Empty for B1 (deterministic), B4.3 (the analysis folds in the next
// call) and the naive binary branch.
std::vector<Fixed> claimed_deltas(const SearchState& parent, const BranchDecision& d);

// Claimed-vs-observed gating skips B6: its vector is only defined by
// reference and the acceptance list leaves it out.
bool claim_gated(CaseId c);

BranchAudit audit_branch(const SearchState& parent, const BranchDecision& d,
                         std::span<const ChildMeasure> children);

// One line per audited node: case, per-child decreases, claims, tau, flags.
void write_audit_report(std::ostream& os, std::span<const BranchAudit> audits);

}  // namespace dmlst
