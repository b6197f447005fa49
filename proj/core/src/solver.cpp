#include "dmlst/solver.hpp"

#include <algorithm>

#include "dmlst/errors.hpp"
#include "dmlst/memo.hpp"

namespace dmlst {

void SearchStats::merge(const SearchStats& o) {
  nodes_expanded += o.nodes_expanded;
  max_depth = std::max(max_depth, o.max_depth);
  for (int i = 0; i < kRuleCount; ++i) reductions[i] += o.reductions[i];
  for (int i = 0; i < kCaseCount; ++i) branch_cases[i] += o.branch_cases[i];
  audited_nodes += o.audited_nodes;
  max_branching_number = std::max(max_branching_number, o.max_branching_number);
  claim_violations += o.claim_violations;
  bound_violations += o.bound_violations;
  mu_increase_violations += o.mu_increase_violations;
  mu_nondecrease_violations += o.mu_nondecrease_violations;
  audits.insert(audits.end(), o.audits.begin(), o.audits.end());
}

namespace {

struct TimeoutReached {};

struct NodeResult {
  bool feasible = false;
  int leaves = -1;
  std::vector<Arc> tree;  // expanded to the ids the search started from
  Fixed mu_at_decision = 0;
  bool halted = false;
  std::vector<double> live_observed;  // this node's per-child decreases (audit mode)
};

struct Ctx {
  const SolverConfig& cfg;
  SearchStats& stats;
  long nodes = 0;
  bool use_r6;
};

ReduceOutcome reduce_tracked(SearchState s, Ctx& ctx) {
  if (!ctx.cfg.audit) return reduce_fixpoint(std::move(s), ctx.use_r6);
  // audit mode re-checks that no single event ever grows the measure
  ReduceOutcome out;
  Fixed before = mu(s);
  for (;;) {
    HaltOutcome halt;
    auto ev = reduce_step(s, halt, ctx.use_r6);
    if (!ev) {
      out.halt = halt;
      break;
    }
    Fixed after = mu(s);
    if (after > before) ++ctx.stats.mu_increase_violations;
    before = after;
    out.events.push_back(std::move(*ev));
  }
  out.state = std::move(s);
  return out;
}

NodeResult solve_node(SearchState s, Ctx& ctx, int depth) {
  if (ctx.cfg.node_limit && ctx.nodes >= *ctx.cfg.node_limit) throw TimeoutReached{};
  ++ctx.nodes;
  ++ctx.stats.nodes_expanded;
  ctx.stats.max_depth = std::max(ctx.stats.max_depth, depth);

  ReduceOutcome red = reduce_tracked(std::move(s), ctx);
  for (const ReductionEvent& ev : red.events) ++ctx.stats.reductions[static_cast<int>(ev.rule)];

  if (red.halt.kind == HaltKind::Solved) {
    NodeResult r;
    r.feasible = true;
    r.leaves = red.halt.leaf_count;
    r.tree = expand_tree(red.state.tree_arcs(), red.state.contractions);
    r.mu_at_decision = mu(red.state);
    r.halted = true;
    return r;
  }
  if (red.halt.kind == HaltKind::AnswerNo) {
    NodeResult r;
    r.mu_at_decision = mu(red.state);
    r.halted = true;
    return r;
  }

  const SearchState& parent = red.state;
  BranchDecision d = ctx.use_r6 ? select_case(parent) : select_case_naive(parent);
  ++ctx.stats.branch_cases[static_cast<int>(d.case_id)];

  Fixed mu_parent = ctx.cfg.audit ? mu(parent) : 0;
  std::vector<SearchState> staged;
  if (ctx.cfg.on_branch) {
    for (std::size_t i = 0; i < d.children.size(); ++i)
      staged.push_back(apply_child(parent, d, static_cast<int>(i)));
    ctx.cfg.on_branch(parent, d, staged);
  }

  NodeResult best;
  std::vector<ChildMeasure> cms;
  for (std::size_t i = 0; i < d.children.size(); ++i) {
    SearchState child = ctx.cfg.on_branch ? std::move(staged[i])
                                          : apply_child(parent, d, static_cast<int>(i));
    Fixed mu_assign = 0;
    if (ctx.cfg.audit) {
      mu_assign = mu(child);
      if (mu_assign >= mu_parent) ++ctx.stats.mu_nondecrease_violations;
    }
    NodeResult cr = solve_node(std::move(child), ctx, depth + 1);
    if (ctx.cfg.audit) {
      if (cr.mu_at_decision >= mu_parent) ++ctx.stats.mu_nondecrease_violations;
      cms.push_back({mu_assign, cr.mu_at_decision, cr.halted, std::move(cr.live_observed)});
    }
    if (cr.feasible && (!best.feasible || cr.leaves > best.leaves)) {
      best.feasible = true;
      best.leaves = cr.leaves;
      best.tree = std::move(cr.tree);
    }
  }

  if (ctx.cfg.audit) {
    BranchAudit a = audit_branch(parent, d, cms);
    ++ctx.stats.audited_nodes;
    ctx.stats.max_branching_number = std::max(ctx.stats.max_branching_number, a.branching_num);
    if (a.claim_violation) ++ctx.stats.claim_violations;
    if (a.bound_violation) ++ctx.stats.bound_violations;
    if (ctx.cfg.audit_records) ctx.stats.audits.push_back(std::move(a));
    for (const ChildMeasure& c : cms)
      if (!c.halted) best.live_observed.push_back(to_real(mu_parent - c.mu_after_reduce));
  }

  best.mu_at_decision = mu_parent;
  best.halted = false;
  return best;
}

SolveResult run_from_state(const SearchState& s, const SolverConfig& cfg) {
  SolveResult res;
  Ctx ctx{cfg, res.stats, 0, cfg.variant == Variant::BranchReduce};
  res.root = s.root;
  try {
    NodeResult r = solve_node(s, ctx, 0);
    if (r.feasible) {
      res.status = SolveStatus::Solved;
      res.feasible = true;
      res.leaf_count = r.leaves;
      res.tree = std::move(r.tree);
    }
  } catch (const TimeoutReached&) {
    res.status = SolveStatus::Timeout;
  }
  return res;
}

}  // namespace

SolveResult solve_from_state(const SearchState& s, const SolverConfig& cfg) {
  return run_from_state(s, cfg);
}

SolveResult solve_rooted(const DiGraph& g, VertexId r, const SolverConfig& cfg) {
  if (g.vertex_count() == 1) {
    SolveResult res;
    res.status = SolveStatus::Solved;
    res.feasible = true;
    res.leaf_count = 0;
    res.root = r;
    res.stats.nodes_expanded = 1;
    return res;
  }
  if (cfg.variant == Variant::Memoized) {
    if (cfg.memo_table) return solve_memoized(g, r, *cfg.memo_table, cfg);
    MemoTable table = build_table(g, cfg.alpha);
    return solve_memoized(g, r, table, cfg);
  }

  std::vector<char> reach = g.reachable_from(r);
  for (VertexId v : g.vertices()) {
    if (!reach[v]) {
      SolveResult res;
      res.root = r;
      return res;  // infeasible without expanding a single node
    }
  }
  return run_from_state(initial_state(g, r), cfg);
}

SolveResult solve_naive_bn(const DiGraph& g, VertexId r, const SolverConfig& cfg) {
  SolverConfig naive = cfg;
  naive.variant = Variant::NaiveBN;
  return solve_rooted(g, r, naive);
}

SolveResult solve(const DiGraph& g, const SolverConfig& cfg) {
  SolveResult best;
  std::optional<MemoTable> table;
  SolverConfig per_root = cfg;
  if (cfg.variant == Variant::Memoized && !cfg.memo_table) {
    table = build_table(g, cfg.alpha);
    per_root.memo_table = &*table;
  }
  for (VertexId r : g.vertices()) {
    SolveResult res = solve_rooted(g, r, per_root);
    SearchStats stats = std::move(res.stats);
    if (res.status == SolveStatus::Timeout) {
      best.stats.merge(stats);
      best.status = SolveStatus::Timeout;
      best.feasible = false;
      best.leaf_count = -1;
      best.tree.clear();
      return best;
    }
    if (res.feasible && (!best.feasible || res.leaf_count > best.leaf_count)) {
      res.stats = SearchStats{};
      best.status = SolveStatus::Solved;
      best.feasible = true;
      best.leaf_count = res.leaf_count;
      best.root = res.root;
      best.tree = std::move(res.tree);
    }
    best.stats.merge(stats);
  }
  return best;
}

bool check_out_branching(const DiGraph& g, VertexId root, std::span<const Arc> tree,
                         int expected_leaves, std::string* why) {
  auto fail = [&](const std::string& m) {
    if (why) *why = m;
    return false;
  };
  std::vector<VertexId> vs = g.vertices();
  if (vs.size() == 1)
    return (tree.empty() && expected_leaves == 0) || fail("single vertex expects empty tree");

  std::vector<VertexId> par(g.slot_count(), -1);
  std::vector<int> children(g.slot_count(), 0);
  for (const Arc& a : tree) {
    if (!g.has_arc(a.tail, a.head)) return fail("tree arc not in graph");
    if (par[a.head] != -1) return fail("vertex with two parents");
    par[a.head] = a.tail;
    ++children[a.tail];
  }
  if (par[root] != -1) return fail("root has a parent");
  for (VertexId v : vs)
    if (v != root && par[v] == -1) return fail("vertex not spanned");
  // walk to the root: no cycles
  for (VertexId v : vs) {
    VertexId cur = v;
    int steps = 0;
    while (cur != root) {
      cur = par[cur];
      if (cur < 0 || ++steps > g.slot_count()) return fail("cycle or broken chain");
    }
  }
  int leaves = 0;
  for (VertexId v : vs)
    if (v != root && children[v] == 0) ++leaves;
  if (leaves != expected_leaves) return fail("leaf count mismatch");
  return true;
}

}  // namespace dmlst
