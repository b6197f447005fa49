#include "dmlst/branch.hpp"

#include <random>

#include "doctest.h"
#include "dmlst/errors.hpp"
#include "dmlst/io.hpp"
#include "dmlst/oracle.hpp"
#include "dmlst/reduce.hpp"

using namespace dmlst;

namespace {

// walk random branches collecting reduced, non-halted states
std::vector<SearchState> sample_reduced_states(int n, double p, unsigned seeds, std::mt19937& rng,
                                               bool naive = false) {
  std::vector<SearchState> states;
  for (unsigned seed = 0; seed < seeds; ++seed) {
    DiGraph g = generate_random(n, p, seed);
    for (VertexId r : g.vertices()) {
      auto mask = g.reachable_from(r);
      bool all = true;
      for (VertexId v : g.vertices())
        if (!mask[v]) all = false;
      if (!all) continue;
      SearchState s = initial_state(g, r);
      for (int depth = 0; depth < 12; ++depth) {
        ReduceOutcome red = reduce_fixpoint(std::move(s), !naive);
        if (red.halt.kind != HaltKind::None) break;
        states.push_back(red.state);
        BranchDecision d = naive ? select_case_naive(red.state) : select_case(red.state);
        int child = int(rng() % d.children.size());
        s = apply_child(red.state, d, child);
      }
      if (states.size() > 400) return states;
    }
  }
  return states;
}

}  // namespace

TEST_CASE("find_chain shapes") {
  // chain v->a->b with b branching out twice: path [v,a,b], not a dead end
  DiGraph g(6);
  g.add_arc(0, 1);  // root -> v
  g.add_arc(1, 2);  // v -> a
  g.add_arc(2, 3);  // a -> b
  g.add_arc(3, 4);
  g.add_arc(3, 5);
  g.add_arc(4, 2);  // keeps a's in-degree honest
  g.add_arc(5, 4);
  g.add_arc(4, 5);
  SearchState s = initial_state(g, 0);
  REQUIRE(s.label(1) == Label::Bn);
  ChainPath p = find_chain(s, 1);
  CHECK(p.vertices == std::vector<VertexId>{1, 2, 3});
  CHECK_FALSE(p.dead_end);

  // same prefix but b has no further arcs: dead end
  DiGraph h(5);
  h.add_arc(0, 1);
  h.add_arc(1, 2);
  h.add_arc(2, 3);
  h.add_arc(4, 3);
  h.add_arc(0, 4);
  SearchState t = initial_state(h, 0);
  ChainPath q = find_chain(t, 1);
  CHECK(q.vertices == std::vector<VertexId>{1, 2, 3});
  CHECK(q.dead_end);

  // v->a with free a branching immediately: path stops at [v,a]
  DiGraph f(5);
  f.add_arc(0, 1);
  f.add_arc(1, 2);
  f.add_arc(2, 3);
  f.add_arc(2, 4);
  f.add_arc(3, 2);
  f.add_arc(4, 3);
  f.add_arc(3, 4);
  SearchState u = initial_state(f, 0);
  ChainPath w = find_chain(u, 1);
  CHECK(w.vertices == std::vector<VertexId>{1, 2});
  CHECK_FALSE(w.dead_end);

  CHECK_THROWS_AS(find_chain(u, 0), ContractViolation);
}

TEST_CASE("B1 fires on a dead-end chain") {
  DiGraph h(5);
  h.add_arc(0, 1);
  h.add_arc(1, 2);
  h.add_arc(2, 3);
  h.add_arc(4, 3);
  h.add_arc(0, 4);
  ReduceOutcome red = reduce_fixpoint(initial_state(h, 0));
  REQUIRE(red.halt.kind == HaltKind::None);
  BranchDecision d = select_case(red.state);
  CHECK(d.case_id == CaseId::B1);
  CHECK(d.children.size() == 1);
  REQUIRE(d.children[0].size() == 1);
  CHECK(d.children[0][0].target == Label::Ln);
}

TEST_CASE("B3b fires when both out-neighbors float") {
  // v=1 (BN_2) -> {4,5} floated; 2 and 3 also feed both, so R5 stays away
  // and makeleaves has real targets
  DiGraph g(6);
  g.add_arc(0, 1);
  g.add_arc(0, 2);
  g.add_arc(0, 3);
  g.add_arc(1, 4);
  g.add_arc(1, 5);
  g.add_arc(2, 4);
  g.add_arc(2, 5);
  g.add_arc(3, 4);
  g.add_arc(3, 5);
  SearchState s = initial_state(g, 0);
  // float 4 and 5 by hand (they have no out-arcs anyway)
  s.make_floating_inplace(4);
  s.make_floating_inplace(5);
  ReduceOutcome red = reduce_fixpoint(s);
  REQUIRE(red.halt.kind == HaltKind::None);
  BranchDecision d = select_case(red.state);
  CHECK(d.case_id == CaseId::B3b);
  CHECK(d.children.size() == 2);
  CHECK(d.makeleaves_children == std::vector<int>{0});
  // applying the makeleaves child floats/leafs the outside in-neighbors
  SearchState child = apply_child(red.state, d, 0);
  bool converted = false;
  for (VertexId u : child.graph.vertices())
    if (u != d.pivot && (child.label(u) == Label::Fl) && red.state.label(u) == Label::Free)
      converted = true;
  for (VertexId u : child.graph.vertices())
    if (red.state.label(u) == Label::Bn && u != d.pivot && child.label(u) == Label::Ln)
      converted = true;
  CHECK(converted);
}

TEST_CASE("B8 fires on the two-ways-in gadget") {
  // pivot v -> {x1,x2} (free), unique outside in-neighbor q -> x1 (free),
  // x1 -> x2; w/z keep every other rule and case out of the way
  DiGraph g(7);
  const int r = 0, v = 1, w = 2, x1 = 3, x2 = 4, z = 5, q = 6;
  g.add_arc(r, v);
  g.add_arc(r, w);
  g.add_arc(v, x1);
  g.add_arc(v, x2);
  g.add_arc(w, z);
  g.add_arc(w, q);
  g.add_arc(q, x1);
  g.add_arc(x1, x2);
  g.add_arc(x1, z);
  g.add_arc(x1, q);
  g.add_arc(x2, z);
  g.add_arc(x2, q);
  g.add_arc(z, q);
  SearchState s = initial_state(g, r);
  ReduceOutcome red = reduce_fixpoint(s);
  REQUIRE(red.halt.kind == HaltKind::None);
  BranchDecision d = select_case(red.state);
  CHECK(d.case_id == CaseId::B8a);
  CHECK(d.pivot == v);
  CHECK(d.x1 == x1);
  CHECK(d.x2 == x2);
  CHECK(d.q == q);
}

TEST_CASE("makeleaves converts free and BN in-neighbors, skips IN") {
  DiGraph g(6);
  g.add_arc(0, 1);
  g.add_arc(0, 2);
  g.add_arc(1, 3);
  g.add_arc(1, 4);
  g.add_arc(2, 3);
  g.add_arc(5, 4);
  g.add_arc(0, 5);
  g.add_arc(3, 5);
  g.add_arc(4, 5);
  SearchState s = initial_state(g, 0);
  // in-neighbors of {3,4} besides pivot 1: vertex 2 (BN), vertex 5 (BN)
  SearchState t = make_leaves(s, 3, 4, 1);
  CHECK(t.label(2) == Label::Ln);
  CHECK(t.label(5) == Label::Ln);
  CHECK(t.label(0) == Label::In);  // untouched
}

TEST_CASE("exactly one case fires on every sampled reduced state") {
  std::mt19937 rng(5);
  std::vector<SearchState> states = sample_reduced_states(7, 0.35, 40, rng);
  CHECK(states.size() > 100);
  for (const SearchState& s : states) {
    BranchDecision d = select_case(s);  // throws on any broken precondition
    CHECK(!d.children.empty());
    if (d.case_id != CaseId::B1) CHECK(d.children.size() >= 2);
    // the decision's assignments apply cleanly
    for (std::size_t i = 0; i < d.children.size(); ++i) {
      SearchState child = apply_child(s, d, int(i));
      CHECK(child.invariant_violation() == "");
    }
  }
}

TEST_CASE("children cover the parent's constrained optimum") {
  std::mt19937 rng(11);
  std::vector<SearchState> states = sample_reduced_states(6, 0.4, 60, rng);
  CHECK(states.size() > 80);
  long branch_nodes = 0;
  for (const SearchState& s : states) {
    OracleResult parent = solve_constrained(s);
    BranchDecision d = select_case(s);
    ++branch_nodes;
    bool any_feasible = false;
    int best = -1;
    for (std::size_t i = 0; i < d.children.size(); ++i) {
      OracleResult c = solve_constrained(apply_child(s, d, int(i)));
      if (c.feasible) {
        any_feasible = true;
        best = std::max(best, c.max_leaves);
      }
    }
    CHECK(parent.feasible == any_feasible);
    if (parent.feasible) CHECK(parent.max_leaves == best);
  }
  CHECK(branch_nodes > 80);
}
