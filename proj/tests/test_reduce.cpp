#include "dmlst/reduce.hpp"

#include <random>

#include "doctest.h"
#include "dmlst/io.hpp"
#include "dmlst/oracle.hpp"

using namespace dmlst;

namespace {

bool events_equal(const std::vector<ReductionEvent>& a, const std::vector<ReductionEvent>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].rule != b[i].rule || a[i].vertex != b[i].vertex || a[i].arc != b[i].arc ||
        a[i].affected != b[i].affected)
      return false;
  return true;
}

}  // namespace

TEST_CASE("H1 fires for unattachable vertices") {
  // 0->1, 2 isolated except arc 2->1: after init 2 is free with d^-=0
  DiGraph g(3);
  g.add_arc(0, 1);
  g.add_arc(0, 2);
  SearchState s = initial_state(g, 0);
  s.graph.remove_arc(0, 2);  // orphan 2 by hand
  s.labels[2] = Label::Free;
  s.parent[2] = -1;
  s.in_tree[2] = 0;
  --s.tree_size;
  HaltOutcome h = check_halt(s);
  CHECK(h.kind == HaltKind::AnswerNo);
  CHECK(std::string(h.rule) == "H1");
}

TEST_CASE("H2 solves a finished star") {
  DiGraph g(4);
  for (int v = 1; v < 4; ++v) g.add_arc(0, v);
  SearchState s = initial_state(g, 0);
  for (int v = 1; v < 4; ++v) s.set_leaf_inplace(v);
  HaltOutcome h = check_halt(s);
  CHECK(h.kind == HaltKind::Solved);
  CHECK(h.leaf_count == 3);
}

TEST_CASE("H2 answers no when something floats with no BN left") {
  DiGraph g(3);
  g.add_arc(0, 1);
  g.add_arc(1, 2);
  SearchState s = initial_state(g, 0);
  s.set_leaf_inplace(1);  // drops 1->2, leaving 2 free and unattachable
  HaltOutcome h = check_halt(s);
  CHECK(h.kind == HaltKind::AnswerNo);
}

TEST_CASE("H3 kills a floating leaf behind a bridge") {
  // triangle {0,1,2}, bridge (2,3), far side {3,4,5} entered only through 3
  DiGraph g(6);
  for (int i = 0; i < 3; ++i) g.add_arc(i, (i + 1) % 3);
  g.add_arc(2, 3);
  g.add_arc(3, 4);
  g.add_arc(4, 5);
  g.add_arc(5, 4);
  g.add_arc(4, 3);
  SearchState s = initial_state(g, 0);
  s.make_floating_inplace(3);  // drops 3->4; everyone still has a way in
  HaltOutcome h = check_halt(s);
  CHECK(h.kind == HaltKind::AnswerNo);
  CHECK(std::string(h.rule) == "H3");
  // the constrained oracle agrees nothing consistent exists
  CHECK_FALSE(solve_constrained(s).feasible);
}

TEST_CASE("R5 internalizes a BN whose out-arcs are a cut") {
  // 0 -> 1 -> 2 -> 3, plus 2->1 noise arc: (1,2) is the only way onward
  DiGraph g(4);
  g.add_arc(0, 1);
  g.add_arc(1, 2);
  g.add_arc(2, 3);
  g.add_arc(2, 1);
  SearchState s = initial_state(g, 0);
  ReduceOutcome out = reduce_fixpoint(s);
  bool saw_r5 = false;
  for (const auto& ev : out.events)
    if (ev.rule == Rule::R5 && ev.vertex == 1) saw_r5 = true;
  CHECK(saw_r5);
}

TEST_CASE("degree-one free vertex becomes FL; outgoing-only vertex dies via H1") {
  // in-arc case: 0->1->2 gives 2 a single in-arc; R3 floats it, R5 chains
  DiGraph g(3);
  g.add_arc(0, 1);
  g.add_arc(1, 2);
  ReduceOutcome out = reduce_fixpoint(initial_state(g, 0));
  bool saw_r3 = false;
  for (const auto& ev : out.events) saw_r3 |= (ev.rule == Rule::R3 && ev.vertex == 2);
  CHECK(saw_r3);
  CHECK(out.halt.kind == HaltKind::Solved);  // path fully forced
  CHECK(out.halt.leaf_count == 1);

  // out-arc-only case: halting wins before any reduction
  DiGraph h(4);
  h.add_arc(0, 1);
  h.add_arc(0, 2);
  h.add_arc(1, 3);
  h.add_arc(2, 3);
  SearchState s = initial_state(h, 0);
  // hand-build: strip 3's in-arcs so only an out-arc remains
  s.graph.remove_arc(1, 3);
  s.graph.remove_arc(2, 3);
  s.graph.add_arc(3, 2);
  HaltOutcome halt;
  auto ev = reduce_step(s, halt);
  CHECK_FALSE(ev.has_value());
  CHECK(halt.kind == HaltKind::AnswerNo);
  CHECK(std::string(halt.rule) == "H1");
}

TEST_CASE("fixpoint is idempotent and deterministic") {
  std::mt19937 rng(21);
  int checked = 0;
  for (unsigned seed = 0; checked < 25; ++seed) {
    DiGraph g = generate_random(6, 0.35, seed);
    auto mask = g.reachable_from(0);
    bool all = true;
    for (VertexId v : g.vertices())
      if (!mask[v]) all = false;
    if (!all) continue;
    ++checked;
    SearchState s = initial_state(g, 0);
    ReduceOutcome once = reduce_fixpoint(s);
    ReduceOutcome again = reduce_fixpoint(s);
    CHECK(events_equal(once.events, again.events));
    if (once.halt.kind == HaltKind::None) {
      ReduceOutcome twice = reduce_fixpoint(once.state);
      CHECK(twice.events.empty());
      CHECK(is_reduced(once.state));
    }
  }
}

TEST_CASE("every single reduction event preserves the constrained optimum") {
  long events_checked = 0;
  for (unsigned seed = 0; seed < 60; ++seed) {
    DiGraph g = generate_random(6, 0.4, seed);
    auto mask = g.reachable_from(0);
    bool all = true;
    for (VertexId v : g.vertices())
      if (!mask[v]) all = false;
    if (!all) continue;
    SearchState s = initial_state(g, 0);
    for (;;) {
      OracleResult before = solve_constrained(s);
      HaltOutcome halt;
      auto ev = reduce_step(s, halt);
      if (!ev) {
        // halting rules must agree with the oracle as well
        if (halt.kind == HaltKind::AnswerNo) CHECK_FALSE(before.feasible);
        if (halt.kind == HaltKind::Solved) {
          CHECK(before.feasible);
          CHECK(before.max_leaves == halt.leaf_count);
        }
        break;
      }
      ++events_checked;
      OracleResult after = solve_constrained(s);
      CHECK(before.feasible == after.feasible);
      if (before.feasible) CHECK(before.max_leaves == after.max_leaves);
    }
  }
  CHECK(events_checked > 50);
}

TEST_CASE("after fixpoint no rule precondition survives") {
  for (unsigned seed = 100; seed < 140; ++seed) {
    DiGraph g = generate_random(7, 0.35, seed);
    auto mask = g.reachable_from(0);
    bool all = true;
    for (VertexId v : g.vertices())
      if (!mask[v]) all = false;
    if (!all) continue;
    ReduceOutcome out = reduce_fixpoint(initial_state(g, 0));
    if (out.halt.kind != HaltKind::None) continue;
    const SearchState& s = out.state;
    for (VertexId v : s.graph.vertices()) {
      if (s.label(v) == Label::Bn) {
        CHECK(s.graph.out_degree(v) > 0);
        std::vector<Arc> outs;
        for (VertexId w : s.graph.out(v)) outs.push_back({v, w});
        CHECK_FALSE(s.graph.is_arc_cut(outs, s.root));
      }
      if (s.label(v) == Label::Free) CHECK(s.graph.degree(v) > 1);
      if (s.label(v) == Label::Fl) CHECK(s.graph.out_degree(v) == 0);
    }
  }
}

TEST_CASE("R6 contracts a mandatory arc") {
  // r -> {a,b} -> c (free, two ways in), then c->d with {d,e} entered only
  // through (c,d): both endpoints free, the arc is mandatory
  DiGraph h(6);
  h.add_arc(0, 1);
  h.add_arc(0, 2);
  h.add_arc(1, 3);
  h.add_arc(2, 3);
  h.add_arc(3, 4);
  h.add_arc(4, 5);
  h.add_arc(5, 4);
  SearchState t = initial_state(h, 0);
  ReduceOutcome out = reduce_fixpoint(t);
  bool saw_r6 = false;
  for (const auto& ev : out.events) saw_r6 |= ev.rule == Rule::R6;
  CHECK(saw_r6);
  // soundness of the whole fixpoint against the oracle
  OracleResult before = solve_constrained(t);
  if (out.halt.kind == HaltKind::None) {
    OracleResult after = solve_constrained(out.state);
    CHECK(before.feasible == after.feasible);
    if (before.feasible) CHECK(before.max_leaves == after.max_leaves);
  }
}
