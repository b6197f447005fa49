#include "dmlst/measure.hpp"

#include <cmath>
#include <random>

#include "doctest.h"
#include "dmlst/errors.hpp"
#include "dmlst/io.hpp"
#include "dmlst/reduce.hpp"

using namespace dmlst;
using MC = MeasureConstants;

TEST_CASE("weights of single-class states match the constant table") {
  // one free vertex of in-degree 1, everything else terminal
  DiGraph g(2);
  g.add_arc(0, 1);
  SearchState s = initial_state(g, 0);
  s.labels[1] = Label::Free;  // hand-rolled: detach 1
  s.parent[1] = -1;
  s.in_tree[1] = 0;
  --s.tree_size;
  CHECK(mu(s) == 9762);

  // in-degree 2 and 3
  DiGraph h(4);
  h.add_arc(0, 3);
  h.add_arc(1, 3);
  h.add_arc(2, 3);
  SearchState t;
  t.graph = h;
  t.root = 0;
  t.labels = {Label::In, Label::In, Label::In, Label::Free};
  t.parent = {-1, -1, -1, -1};
  t.in_tree = {1, 1, 1, 0};
  CHECK(mu(t) == MC::eps_free_ge3);
  t.graph.remove_arc(2, 3);
  CHECK(mu(t) == MC::eps_free2);

  // all terminal labels weigh nothing
  DiGraph star(3);
  star.add_arc(0, 1);
  star.add_arc(0, 2);
  SearchState u = initial_state(star, 0);
  u.set_leaf_inplace(1);
  u.set_leaf_inplace(2);
  CHECK(mu(u) == 0);

  // one BN of out-degree 3 plus one floating leaf sums to exactly 1
  DiGraph b(6);
  b.add_arc(0, 1);
  b.add_arc(1, 2);
  b.add_arc(1, 3);
  b.add_arc(1, 4);
  b.add_arc(0, 5);
  b.add_arc(2, 5);
  SearchState w = initial_state(b, 0);
  REQUIRE(w.label(1) == Label::Bn);
  SearchState w2 = w;
  for (VertexId v : {2, 3, 4})
    w2.labels[v] = Label::In, w2.in_tree[v] = 1, w2.parent[v] = 1;  // silence the free weights
  w2.tree_size += 3;
  w2.labels[5] = Label::Fl;
  w2.in_tree[5] = 0;
  w2.parent[5] = -1;
  w2.tree_size -= 1;
  CHECK(mu(w2) == MC::eps_bn_ge2 + MC::eps_fl);
  CHECK(MC::eps_bn_ge2 + MC::eps_fl == 10000);
}

TEST_CASE("eta recomputed from the table") {
  CHECK(MC::eta_from_table() == MC::eta);
  CHECK(MC::eta == 2013);
  CHECK(MC::eps_free1 - MC::eps_bn_ge2 == MC::eta);
}

TEST_CASE("branching numbers") {
  std::vector<double> unit{1.0, 1.0};
  CHECK(branching_number(unit) == doctest::Approx(2.0).epsilon(1e-10));
  std::vector<double> golden{1.0, 2.0};
  CHECK(branching_number(golden) == doctest::Approx(1.6180339887).epsilon(1e-9));
  std::vector<double> two{2.0, 2.0};
  CHECK(branching_number(two) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-10));
  std::vector<double> one{5.0};
  CHECK(branching_number(one) == 1.0);
  std::vector<double> bad{1.0, 0.0};
  CHECK_THROWS_AS(branching_number(bad), NonPositiveDelta);
  CHECK_THROWS_AS(branching_number(std::vector<double>{}), NonPositiveDelta);
}

TEST_CASE("branching number shrinks when any delta grows") {
  std::mt19937 rng(2);
  for (int t = 0; t < 50; ++t) {
    int m = 2 + int(rng() % 3);
    std::vector<double> d;
    for (int i = 0; i < m; ++i) d.push_back(0.3 + (rng() % 100) / 40.0);
    double base = branching_number(d);
    int j = int(rng() % m);
    d[j] += 0.5;
    CHECK(branching_number(d) <= base + 1e-12);
  }
}

TEST_CASE("mu stays within [0, n]") {
  for (unsigned seed = 0; seed < 20; ++seed) {
    DiGraph g = generate_random(7, 0.4, seed);
    auto mask = g.reachable_from(0);
    bool all = true;
    for (VertexId v : g.vertices())
      if (!mask[v]) all = false;
    if (!all) continue;
    SearchState s = initial_state(g, 0);
    Fixed m = mu(s);
    CHECK(m >= 0);
    CHECK(m <= Fixed(g.vertex_count()) * 10000);
    ReduceOutcome red = reduce_fixpoint(s);
    CHECK(mu(red.state) <= m);
  }
}

TEST_CASE("B8a claimed vector matches the worked constants") {
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
  ReduceOutcome red = reduce_fixpoint(initial_state(g, r));
  REQUIRE(red.halt.kind == HaltKind::None);
  BranchDecision d = select_case(red.state);
  REQUIRE(d.case_id == CaseId::B8a);
  std::vector<Fixed> claimed = claimed_deltas(red.state, d);
  REQUIRE(claimed.size() == 2);
  CHECK(claimed[0] == 12121);  // 1.2121
  CHECK(claimed[1] == 17511);  // 1.7511
}

TEST_CASE("audit_branch flags and tau") {
  DiGraph g(7);
  const int r = 0;
  g.add_arc(r, 1);
  g.add_arc(r, 2);
  g.add_arc(1, 3);
  g.add_arc(1, 4);
  g.add_arc(2, 5);
  g.add_arc(2, 6);
  g.add_arc(3, 5);
  g.add_arc(4, 6);
  g.add_arc(5, 3);
  g.add_arc(6, 4);
  g.add_arc(3, 4);
  g.add_arc(4, 3);
  ReduceOutcome red = reduce_fixpoint(initial_state(g, r));
  REQUIRE(red.halt.kind == HaltKind::None);
  BranchDecision d = select_case(red.state);
  Fixed parent_mu = mu(red.state);
  std::vector<ChildMeasure> cm;
  for (std::size_t i = 0; i < d.children.size(); ++i) {
    SearchState child = apply_child(red.state, d, int(i));
    Fixed assign_mu = mu(child);
    ReduceOutcome cr = reduce_fixpoint(child);
    cm.push_back({assign_mu, mu(cr.state), cr.halt.kind != HaltKind::None});
  }
  BranchAudit audit = audit_branch(red.state, d, cm);
  CHECK(audit.mu_parent == parent_mu);
  for (std::size_t i = 0; i < cm.size(); ++i) {
    CHECK(audit.observed[i] > 0);
    CHECK(audit.observed[i] >= audit.assign_observed[i]);
  }
  CHECK(audit.branching_num >= 1.0);
  CHECK(audit.branching_num <= kBranchingBound + kBranchingTol);
  CHECK_FALSE(audit.claim_violation);
}
