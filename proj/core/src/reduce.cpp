#include "dmlst/reduce.hpp"

#include <algorithm>

#include "dmlst/errors.hpp"

namespace dmlst {

const char* rule_name(Rule r) {
  static const char* names[kRuleCount] = {"R1", "R2", "R3", "R4", "R5", "R6"};
  return names[static_cast<int>(r)];
}

HaltOutcome check_halt(const SearchState& s) {
  const DiGraph& g = s.graph;

  // H1: an unattached vertex with no way in
  for (VertexId v : g.vertices()) {
    Label l = s.label(v);
    if ((l == Label::Free || l == Label::Fl) && g.in_degree(v) == 0)
      return {HaltKind::AnswerNo, "H1", -1};
  }

  // H2: nothing left to branch on
  bool any_bn = false, any_open = false;
  for (VertexId v : g.vertices()) {
    if (s.label(v) == Label::Bn) any_bn = true;
    if (s.label(v) == Label::Free || s.label(v) == Label::Fl) any_open = true;
  }
  if (!any_bn) {
    if (!any_open) return {HaltKind::Solved, "H2", s.leaf_count()};
    return {HaltKind::AnswerNo, "H2", -1};
  }

  // H3: a floating leaf behind a bridge would have to carry a subtree
  bool any_fl = false;
  for (VertexId v : g.vertices())
    if (s.label(v) == Label::Fl) { any_fl = true; break; }
  if (any_fl) {
    for (const BridgeInfo& b : g.undirected_bridges()) {
      if (s.label(b.arc.head) != Label::Fl) continue;
      if (b.side_tail >= 2 && b.side_head >= 2 && !s.tree_has(b.arc.tail, b.arc.head))
        return {HaltKind::AnswerNo, "H3", -1};
    }
  }
  return {HaltKind::None, "", -1};
}

namespace {

std::optional<ReductionEvent> try_r1(SearchState& s) {
  for (VertexId v : s.graph.vertices()) {
    if (s.label(v) == Label::Fl && s.graph.out_degree(v) > 0) {
      ReductionEvent ev{Rule::R1, v, {}, {v}};
      std::vector<VertexId> outs = s.graph.out(v);
      for (VertexId w : outs) {
        s.graph.remove_arc(v, w);
        ev.affected.push_back(w);
      }
      return ev;
    }
    if (s.label(v) == Label::Bn) {
      std::vector<VertexId> stray;
      for (VertexId u : s.graph.in(v))
        if (u != s.parent[v]) stray.push_back(u);
      if (!stray.empty()) {
        ReductionEvent ev{Rule::R1, v, {}, {v}};
        for (VertexId u : stray) {
          s.graph.remove_arc(u, v);
          ev.affected.push_back(u);
        }
        return ev;
      }
    }
  }
  return std::nullopt;
}

std::optional<ReductionEvent> try_r2(SearchState& s) {
  for (VertexId v : s.graph.vertices()) {
    if (s.label(v) == Label::Bn && s.graph.out_degree(v) == 0) {
      s.set_leaf_inplace(v);
      return ReductionEvent{Rule::R2, v, {}, {v}};
    }
  }
  return std::nullopt;
}

std::optional<ReductionEvent> try_r3(SearchState& s) {
  for (VertexId v : s.graph.vertices()) {
    if (s.label(v) == Label::Free && s.graph.degree(v) == 1) {
      s.make_floating_inplace(v);
      return ReductionEvent{Rule::R3, v, {}, {v}};
    }
  }
  return std::nullopt;
}

std::optional<ReductionEvent> try_r4(SearchState& s) {
  for (VertexId v : s.graph.vertices()) {
    if (s.label(v) != Label::Ln) continue;
    std::vector<VertexId> stray_in, stray_out = s.graph.out(v);
    for (VertexId u : s.graph.in(v))
      if (u != s.parent[v]) stray_in.push_back(u);
    if (stray_in.empty() && stray_out.empty()) continue;
    ReductionEvent ev{Rule::R4, v, {}, {v}};
    for (VertexId u : stray_in) {
      s.graph.remove_arc(u, v);
      ev.affected.push_back(u);
    }
    for (VertexId w : stray_out) {
      s.graph.remove_arc(v, w);
      ev.affected.push_back(w);
    }
    return ev;
  }
  return std::nullopt;
}

std::optional<ReductionEvent> try_r5(SearchState& s) {
  for (VertexId v : s.graph.vertices()) {
    if (s.label(v) != Label::Bn || s.graph.out_degree(v) == 0) continue;
    std::vector<Arc> outs;
    for (VertexId w : s.graph.out(v)) outs.push_back({v, w});
    if (!s.graph.is_arc_cut(outs, s.root)) continue;
    ReductionEvent ev{Rule::R5, v, {}, {v}};
    for (const Arc& a : outs) ev.affected.push_back(a.head);
    s.set_internal_inplace(v);
    return ev;
  }
  return std::nullopt;
}

// Mandatory-arc contraction: (a,b) with a,b free such that dropping the arc
// strands a set S (|S| >= 2, b in S) and (a,b) is the only arc entering S.
std::optional<ReductionEvent> try_r6(SearchState& s) {
  const DiGraph& g = s.graph;
  std::vector<char> base = g.reachable_from(s.root);
  for (VertexId a : g.vertices()) {
    if (s.label(a) != Label::Free) continue;
    for (VertexId b : g.out(a)) {
      if (s.label(b) != Label::Free || !base[b]) continue;
      Arc cand{a, b};
      std::vector<char> without = g.reachable_from(s.root, std::span<const Arc>(&cand, 1));
      if (without[b]) continue;
      std::vector<char> stranded(g.slot_count(), 0);
      int stranded_count = 0;
      for (VertexId v : g.vertices())
        if (base[v] && !without[v]) { stranded[v] = 1; ++stranded_count; }
      if (stranded_count < 2) continue;
      int entries = 0;
      for (VertexId v : g.vertices()) {
        if (stranded[v]) continue;
        for (VertexId w : g.out(v))
          if (stranded[w]) ++entries;
      }
      if (entries != 1) continue;
      ReductionEvent ev{Rule::R6, a, cand, {a, b}};
      s.contractions.push_back(s.graph.contract(a, b));
      return ev;
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<ReductionEvent> reduce_step(SearchState& s, HaltOutcome& halt, bool use_r6) {
  halt = check_halt(s);
  if (halt.kind != HaltKind::None) return std::nullopt;
  if (auto ev = try_r1(s)) return ev;
  if (auto ev = try_r2(s)) return ev;
  if (auto ev = try_r3(s)) return ev;
  if (auto ev = try_r4(s)) return ev;
  if (auto ev = try_r5(s)) return ev;
  if (use_r6)
    if (auto ev = try_r6(s)) return ev;
  return std::nullopt;
}

ReduceOutcome reduce_fixpoint(SearchState s, bool use_r6) {
  ReduceOutcome out;
  for (;;) {
    HaltOutcome halt;
    auto ev = reduce_step(s, halt, use_r6);
    if (!ev) {
      out.halt = halt;
      break;
    }
    out.events.push_back(std::move(*ev));
  }
  out.state = std::move(s);
  return out;
}

bool is_reduced(const SearchState& s, bool use_r6) {
  SearchState copy = s;
  HaltOutcome halt;
  return !reduce_step(copy, halt, use_r6).has_value() && halt.kind == HaltKind::None;
}

}  // namespace dmlst
