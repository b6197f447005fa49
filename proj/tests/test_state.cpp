#include "dmlst/state.hpp"

#include "doctest.h"
#include "dmlst/errors.hpp"

using namespace dmlst;

namespace {

DiGraph star_out(int n) {  // 0 -> 1..n-1
  DiGraph g(n);
  for (int v = 1; v < n; ++v) g.add_arc(0, v);
  return g;
}

}  // namespace

TEST_CASE("initial_state on a star") {
  SearchState s = initial_state(star_out(4), 0);
  CHECK(s.label(0) == Label::In);
  for (int v = 1; v < 4; ++v) {
    CHECK(s.label(v) == Label::Bn);
    CHECK(s.parent[v] == 0);
  }
  CHECK(s.tree_size == 3);
  CHECK(s.invariant_violation() == "");
}

TEST_CASE("initial_state on a path and a cycle") {
  DiGraph p(3);
  p.add_arc(0, 1);
  p.add_arc(1, 2);
  SearchState sp = initial_state(p, 0);
  CHECK(sp.label(1) == Label::Bn);
  CHECK(sp.label(2) == Label::Free);
  CHECK(sp.tree_arcs() == std::vector<Arc>{{0, 1}});

  DiGraph c(3);
  c.add_arc(0, 1);
  c.add_arc(1, 2);
  c.add_arc(2, 0);
  SearchState sc = initial_state(c, 0);
  CHECK(sc.label(1) == Label::Bn);
  CHECK(sc.label(2) == Label::Free);
  CHECK(sc.tree_arcs() == std::vector<Arc>{{0, 1}});
  // the arc back into the root is gone
  CHECK_FALSE(sc.graph.has_arc(2, 0));
}

TEST_CASE("initial_state errors") {
  DiGraph lonely(1);
  CHECK_THROWS_AS(initial_state(lonely, 0), DegenerateInput);

  DiGraph split(3);
  split.add_arc(0, 1);  // 2 unreachable
  CHECK_THROWS_AS(initial_state(split, 0), InfeasibleRoot);
}

TEST_CASE("set_internal cascades") {
  // v=1 BN with a free out-neighbor
  DiGraph g(3);
  g.add_arc(0, 1);
  g.add_arc(1, 2);
  SearchState s = initial_state(g, 0);
  SearchState t = set_internal(s, 1);
  CHECK(s.label(1) == Label::Bn);  // input untouched
  CHECK(t.label(1) == Label::In);
  CHECK(t.label(2) == Label::Bn);
  CHECK(t.parent[2] == 1);
  CHECK(t.invariant_violation() == "");

  // FL out-neighbor becomes an attached leaf, its other in-arcs vanish
  DiGraph h(4);
  h.add_arc(0, 1);
  h.add_arc(0, 3);
  h.add_arc(1, 2);
  h.add_arc(3, 2);
  SearchState u = initial_state(h, 0);
  u.make_floating_inplace(2);
  REQUIRE(u.label(2) == Label::Fl);
  SearchState w = set_internal(u, 1);
  CHECK(w.label(2) == Label::Ln);
  CHECK(w.parent[2] == 1);
  CHECK_FALSE(w.graph.has_arc(3, 2));
  CHECK(w.invariant_violation() == "");
}

TEST_CASE("set_internal requires BN") {
  SearchState s = initial_state(star_out(3), 0);
  CHECK_THROWS_AS(set_internal(s, 0), IllegalTransition);  // already IN
}

TEST_CASE("set_leaf transitions") {
  SearchState s = initial_state(star_out(3), 0);
  SearchState t = set_leaf(s, 1);
  CHECK(t.label(1) == Label::Ln);
  CHECK(s.label(1) == Label::Bn);
  CHECK_THROWS_AS(set_leaf(t, 0), IllegalTransition);  // IN stays
  CHECK_THROWS_AS(set_leaf(t, 1), IllegalTransition);  // LN stays

  DiGraph g(3);
  g.add_arc(0, 1);
  g.add_arc(1, 2);
  SearchState u = initial_state(g, 0);
  CHECK_THROWS_AS(set_leaf(u, 2), IllegalTransition);  // free -> LN only via FL attach
}

TEST_CASE("spanning and leaf counts") {
  SearchState s = initial_state(star_out(4), 0);
  CHECK(s.is_spanning());  // BN vertices are in the tree, nothing floats
  for (int v = 1; v < 4; ++v) s.set_leaf_inplace(v);
  CHECK(s.leaf_count() == 3);

  DiGraph p(3);
  p.add_arc(0, 1);
  p.add_arc(1, 2);
  CHECK_FALSE(initial_state(p, 0).is_spanning());
}

TEST_CASE("new leaf drops its stray arcs") {
  // 0->1, 0->2, 1->2: leafing 1 deletes 1->2
  DiGraph g(3);
  g.add_arc(0, 1);
  g.add_arc(0, 2);
  g.add_arc(1, 2);
  SearchState s = initial_state(g, 0);
  SearchState t = set_leaf(s, 1);
  CHECK_FALSE(t.graph.has_arc(1, 2));
  CHECK(t.graph.in_degree(2) == 1);
  CHECK(t.invariant_violation() == "");
}
