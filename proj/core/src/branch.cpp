#include "dmlst/branch.hpp"

#include <algorithm>

#include "dmlst/errors.hpp"

namespace dmlst {

const char* case_name(CaseId c) {
  static const char* names[kCaseCount] = {"B1",   "B2", "B3a", "B3b", "B4.1", "B4.2", "B4.3",
                                          "B5",   "B6", "B7",  "B8a", "B8b",  "NB"};
  return names[static_cast<int>(c)];
}

namespace {

bool in_path(const std::vector<VertexId>& path, VertexId v) {
  return std::find(path.begin(), path.end(), v) != path.end();
}

// out-neighbors of the path's last vertex that avoid the prefix before it
std::vector<VertexId> external_outs(const SearchState& s, const std::vector<VertexId>& path) {
  VertexId last = path.back();
  std::vector<VertexId> ext;
  for (VertexId w : s.graph.out(last)) {
    bool in_prefix = false;
    for (std::size_t i = 0; i + 1 < path.size(); ++i)
      if (path[i] == w) { in_prefix = true; break; }
    if (!in_prefix) ext.push_back(w);
  }
  return ext;
}

VertexId lowest_bn_max_out(const SearchState& s) {
  VertexId best = -1;
  int best_deg = -1;
  for (VertexId v : s.graph.vertices())
    if (s.label(v) == Label::Bn && s.graph.out_degree(v) > best_deg) {
      best = v;
      best_deg = s.graph.out_degree(v);
    }
  return best;
}

void require(bool cond, const char* what) {
  if (!cond) throw ContractViolation(what);
}

// (R5) guarantees every out-neighbor of a chosen BN vertex has a second way in
void assert_dagger(const SearchState& s, VertexId v) {
  for (VertexId x : s.graph.out(v))
    require(s.graph.in_degree(x) >= 2, "chosen pivot has an out-neighbor of in-degree < 2");
}

std::vector<VertexId> makeleaves_targets(const SearchState& s, VertexId x1, VertexId x2,
                                         VertexId pivot) {
  std::vector<VertexId> us;
  for (VertexId u : s.graph.in(x1))
    if (u != x1 && u != x2 && u != pivot) us.push_back(u);
  for (VertexId u : s.graph.in(x2))
    if (u != x1 && u != x2 && u != pivot && !in_path(us, u)) us.push_back(u);
  std::sort(us.begin(), us.end());
  return us;
}

BranchDecision chain_decision(const SearchState& s, VertexId v) {
  BranchDecision d;
  d.pivot = v;
  d.chain = find_chain(s, v);
  if (d.chain.dead_end) {
    d.case_id = CaseId::B1;
    d.children = {{{v, Label::Ln}}};
    return d;
  }
  d.case_id = CaseId::B2;
  std::vector<Assignment> all_in;
  for (VertexId u : d.chain.vertices) {
    if (u != v) require(s.label(u) == Label::Free, "B2 chain vertex not free");
    all_in.push_back({u, Label::In});
  }
  d.children = {all_in, {{v, Label::Ln}}};
  return d;
}

}  // namespace

ChainPath find_chain(const SearchState& s, VertexId v) {
  if (s.label(v) != Label::Bn || s.graph.out_degree(v) != 1)
    throw ContractViolation("find_chain: vertex not in BN_1");
  ChainPath p;
  p.vertices = {v};
  for (;;) {
    std::vector<VertexId> ext = external_outs(s, p.vertices);
    if (ext.empty()) {
      p.dead_end = true;
      break;
    }
    if (ext.size() >= 2) {
      p.dead_end = false;
      break;
    }
    VertexId next = ext[0];
    p.vertices.push_back(next);
    if (s.label(next) != Label::Free) {
      // non-free endpoint: allowed as vk, never continued past
      p.dead_end = external_outs(s, p.vertices).empty();
      break;
    }
  }
  return p;
}

SearchState make_leaves(const SearchState& s, VertexId x1, VertexId x2, VertexId pivot) {
  SearchState t = s;
  for (VertexId u : makeleaves_targets(s, x1, x2, pivot)) {
    if (t.label(u) == Label::Free)
      t.make_floating_inplace(u);
    else if (t.label(u) == Label::Bn)
      t.set_leaf_inplace(u);
    // already IN or LN: nothing to record
  }
  return t;
}

BranchDecision select_case(const SearchState& s) {
  const DiGraph& g = s.graph;
  require(s.count(Label::Bn) > 0, "select_case: BN empty");
  require(s.bn_with_out_degree(0).empty(), "select_case: BN_0 present (R2 pending)");

  // B1/B2 run the forced-chain analysis on the lowest BN_1 vertex
  std::vector<VertexId> bn1 = s.bn_with_out_degree(1);
  if (!bn1.empty()) return chain_decision(s, bn1.front());

  VertexId v = lowest_bn_max_out(s);
  assert_dagger(s, v);
  BranchDecision d;
  d.pivot = v;

  if (g.out_degree(v) >= 3) {
    d.case_id = CaseId::B3a;
    d.children = {{{v, Label::In}}, {{v, Label::Ln}}};
    return d;
  }

  require(g.out_degree(v) == 2, "select_case: pivot out-degree not 2");
  for (VertexId u : s.graph.vertices())
    require(s.label(u) != Label::Bn || g.out_degree(u) == 2,
            "select_case: BN != BN_2 in a two-neighbor case");

  VertexId x1 = g.out(v)[0], x2 = g.out(v)[1];
  d.x1 = x1;
  d.x2 = x2;
  Label l1 = s.label(x1), l2 = s.label(x2);
  require((l1 == Label::Free || l1 == Label::Fl) && (l2 == Label::Free || l2 == Label::Fl),
          "select_case: pivot out-neighbor is neither free nor FL");

  if (l1 == Label::Fl && l2 == Label::Fl) {
    d.case_id = CaseId::B3b;
    require(!makeleaves_targets(s, x1, x2, v).empty(), "B3b: no makeleaves candidates");
    d.children = {{{v, Label::In}}, {{v, Label::Ln}}};
    d.makeleaves_children = {0};
    return d;
  }

  // B4: some free out-neighbor z that is already decided by v's fate
  for (VertexId z : {x1, x2}) {
    if (s.label(z) != Label::Free) continue;
    std::vector<VertexId> ext;  // N^+(z) \ N^+(v)
    for (VertexId w : g.out(z))
      if (w != x1 && w != x2) ext.push_back(w);
    CaseId sub;
    if (ext.empty()) {
      sub = CaseId::B41;
    } else {
      std::vector<Arc> outs;
      for (VertexId w : g.out(z)) outs.push_back({z, w});
      if (g.is_arc_cut(outs, s.root))
        sub = CaseId::B42;
      else if (ext.size() == 1)
        sub = CaseId::B43;
      else
        continue;
    }
    d.case_id = sub;
    d.z = z;
    d.children = {{{v, Label::In}}, {{v, Label::Ln}}};
    return d;
  }

  if (l1 != l2) {
    // one free, one floating leaf
    if (l1 == Label::Fl) std::swap(x1, x2);
    d.x1 = x1;
    d.x2 = x2;
    d.case_id = CaseId::B5;
    require(!makeleaves_targets(s, x1, x2, v).empty(), "B5: no makeleaves candidates");
    d.children = {{{v, Label::In}, {x1, Label::In}},
                  {{v, Label::In}, {x1, Label::Ln}},
                  {{v, Label::Ln}}};
    d.makeleaves_children = {1};
    return d;
  }

  // both free from here on
  std::vector<VertexId> shared;  // (N^-(x1) meet N^-(x2)) \ {v}
  for (VertexId u : g.in(x1))
    if (u != v && g.has_arc(u, x2)) shared.push_back(u);
  if (!shared.empty()) {
    d.case_id = CaseId::B6;
    d.z = shared.front();
    d.children = {{{v, Label::In}, {x1, Label::In}},
                  {{v, Label::In}, {x1, Label::Ln}, {x2, Label::In}},
                  {{v, Label::Ln}}};
    return d;
  }

  std::vector<VertexId> outside = makeleaves_targets(s, x1, x2, v);
  if (outside.size() >= 2) {
    d.case_id = CaseId::B7;
    for (VertexId xi : {x1, x2}) {
      int ext_out = 0;
      for (VertexId w : g.out(xi))
        if (w != x1 && w != x2) ++ext_out;
      require(ext_out >= 2, "B7: |N^+(x_i) \\ N^+(v)| < 2");
    }
    d.children = {{{v, Label::In}, {x1, Label::In}},
                  {{v, Label::In}, {x1, Label::Ln}, {x2, Label::In}},
                  {{v, Label::In}, {x1, Label::Ln}, {x2, Label::Ln}},
                  {{v, Label::Ln}}};
    d.makeleaves_children = {2};
    return d;
  }

  // B8: exactly one outside in-neighbor q, pointing at exactly one of x1/x2
  require(outside.size() == 1, "B8: outside in-neighborhood not a singleton");
  VertexId q = outside.front();
  bool q_x1 = g.has_arc(q, x1), q_x2 = g.has_arc(q, x2);
  require(q_x1 != q_x2, "B8: q adjacent to both x1 and x2 (B6 should have fired)");
  if (q_x2) std::swap(x1, x2);
  d.x1 = x1;
  d.x2 = x2;
  d.q = q;
  Label ql = s.label(q);
  require(ql == Label::Free || ql == Label::Bn, "B8: q neither free nor BN");
  d.case_id = (ql == Label::Free) ? CaseId::B8a : CaseId::B8b;
  d.children = {{{v, Label::In}}, {{v, Label::Ln}}};
  return d;
}

BranchDecision select_case_naive(const SearchState& s) {
  require(s.count(Label::Bn) > 0, "select_case_naive: BN empty");
  std::vector<VertexId> bn1 = s.bn_with_out_degree(1);
  if (!bn1.empty()) return chain_decision(s, bn1.front());
  VertexId v = lowest_bn_max_out(s);
  BranchDecision d;
  d.case_id = CaseId::NaiveBin;
  d.pivot = v;
  d.children = {{{v, Label::In}}, {{v, Label::Ln}}};
  return d;
}

SearchState apply_child(const SearchState& parent, const BranchDecision& d, int child) {
  SearchState s = parent;
  for (const Assignment& a : d.children[child]) {
    Label cur = s.label(a.v);
    if (a.target == Label::In) {
      if (cur == Label::In) continue;  // cascaded earlier in this child
      s.set_internal_inplace(a.v);
    } else {
      if (cur == Label::Ln) continue;
      s.set_leaf_inplace(a.v);
    }
  }
  if (std::find(d.makeleaves_children.begin(), d.makeleaves_children.end(), child) !=
      d.makeleaves_children.end()) {
    // the candidate set is read off the parent graph: the child's own
    // assignments already trimmed arcs around x1/x2
    for (VertexId u : makeleaves_targets(parent, d.x1, d.x2, d.pivot)) {
      if (s.label(u) == Label::Free)
        s.make_floating_inplace(u);
      else if (s.label(u) == Label::Bn)
        s.set_leaf_inplace(u);
    }
  }
  return s;
}

}  // namespace dmlst
