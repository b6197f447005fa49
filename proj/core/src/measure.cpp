#include "dmlst/measure.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "dmlst/errors.hpp"

namespace dmlst {

Fixed MeasureConstants::bn_weight(int out_degree) {
  if (out_degree <= 0) return 0;
  return out_degree == 1 ? eps_bn1 : eps_bn_ge2;
}

Fixed MeasureConstants::free_weight(int in_degree) {
  if (in_degree <= 0) return 0;
  if (in_degree == 1) return eps_free1;
  if (in_degree == 2) return eps_free2;
  return eps_free_ge3;
}

Fixed MeasureConstants::delta_free(int i) {
  if (i == 1) return eps_free1;
  if (i == 2) return eps_free2 - eps_free1;
  if (i == 3) return eps_free_ge3 - eps_free2;
  return 0;
}

Fixed MeasureConstants::eta_from_table() {
  const Fixed one = 10000;
  Fixed candidates[] = {eps_fl,
                        one - eps_bn1,
                        one - eps_bn_ge2,
                        eps_free2 - eps_bn1,
                        eps_free2 - eps_bn_ge2,
                        eps_free1 - eps_bn1,
                        eps_free1 - eps_bn_ge2};
  return *std::min_element(std::begin(candidates), std::end(candidates));
}

Fixed mu(const SearchState& s) {
  Fixed total = 0;
  for (VertexId v : s.graph.vertices()) {
    switch (s.label(v)) {
      case Label::Bn: total += MeasureConstants::bn_weight(s.graph.out_degree(v)); break;
      case Label::Free: total += MeasureConstants::free_weight(s.graph.in_degree(v)); break;
      case Label::Fl: total += MeasureConstants::eps_fl; break;
      case Label::In:
      case Label::Ln: break;
    }
  }
  return total;
}

double branching_number(std::span<const double> deltas) {
  if (deltas.empty()) throw NonPositiveDelta("branching_number: empty delta list");
  for (double d : deltas)
    if (!(d > 0)) throw NonPositiveDelta("branching_number: delta <= 0");
  if (deltas.size() == 1) return 1.0;
  auto f = [&](double tau) {
    double sum = 0;
    for (double d : deltas) sum += std::pow(tau, -d);
    return sum;
  };
  double lo = 1.0, hi = 64.0;
  for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
    double mid = 0.5 * (lo + hi);
    (f(mid) > 1.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

namespace {

using MC = MeasureConstants;

// makeleaves credit: a free vertex dropping to FL or a BN_2 dropping to LN
Fixed makeleaves_unit() {
  return std::min(MC::eps_free1 - MC::eps_fl, MC::eps_bn_ge2);
}

struct NeighborSplit {
  int fl = 0, fr2 = 0, fr3 = 0;  // FL / free_2 / free_{>=3} among N^+(x) \ {x1,x2}
};

NeighborSplit split_ext_outs(const SearchState& s, VertexId x, VertexId x1, VertexId x2) {
  NeighborSplit n;
  for (VertexId w : s.graph.out(x)) {
    if (w == x1 || w == x2) continue;
    if (s.label(w) == Label::Fl) {
      ++n.fl;
    } else if (s.label(w) == Label::Free) {
      if (s.graph.in_degree(w) >= 3)
        ++n.fr3;
      else
        ++n.fr2;
    }
  }
  return n;
}

std::vector<Fixed> b7_items(const SearchState& s, const BranchDecision& d) {
  VertexId x1 = d.x1, x2 = d.x2;
  auto cls = [&](VertexId x) { return MC::free_weight(s.graph.in_degree(x)); };
  auto bn_drop = [&](VertexId x) { return cls(x) - MC::eps_bn_ge2; };
  NeighborSplit n1 = split_ext_outs(s, x1, x1, x2);
  NeighborSplit n2 = split_ext_outs(s, x2, x1, x2);

  Fixed d1 = MC::eps_bn_ge2 + cls(x1) + bn_drop(x2) + n1.fl * MC::eps_fl +
             n1.fr3 * (MC::eps_free_ge3 - MC::eps_bn_ge2) +
             n1.fr2 * (MC::eps_free2 - MC::eps_bn_ge2);
  Fixed d2 = MC::eps_bn_ge2 + cls(x1) + cls(x2) + n2.fl * MC::eps_fl +
             n2.fr3 * (MC::eps_free_ge3 - MC::eps_bn_ge2) +
             n2.fr2 * (MC::eps_free2 - MC::eps_bn_ge2);
  int din1 = s.graph.in_degree(x1), din2 = s.graph.in_degree(x2);
  Fixed d3 = MC::eps_bn_ge2 + cls(x1) + cls(x2) +
             Fixed(std::max(2, din1 + din2 - 4)) * makeleaves_unit();
  // delta_free is 0 past in-degree 3, matching the flat tail of the weights
  Fixed d4 = MC::eps_bn_ge2 + MC::delta_free(din1) + MC::delta_free(din2);
  return {d1, d2, d3, d4};
}

}  // namespace

std::vector<Fixed> claimed_deltas(const SearchState& s, const BranchDecision& d) {
  const DiGraph& g = s.graph;
  VertexId v = d.pivot;
  switch (d.case_id) {
    case CaseId::B2: {
      const auto& path = d.chain.vertices;
      int k = static_cast<int>(path.size()) - 1;
      VertexId v1 = path[1];
      int din = g.in_degree(v1);
      Fixed d1 = MC::eps_bn1 + Fixed(k - 1) * MC::eps_free1 + 2 * MC::eta;
      if (din == 2)
        d1 += MC::eps_free2;
      else if (din >= 3)
        d1 += MC::eps_free_ge3;
      Fixed d2 = MC::eps_bn1;
      if (din == 2 || din == 3) d2 += MC::delta_free(din);
      return {d1, d2};
    }
    case CaseId::B3a: {
      Fixed d1 = MC::eps_bn_ge2, d2 = MC::eps_bn_ge2;
      for (VertexId x : g.out(v)) {
        if (s.label(x) == Label::Fl) {
          d1 += MC::eps_fl;
        } else if (s.label(x) == Label::Free) {
          int din = g.in_degree(x);
          d1 += MC::free_weight(din) - MC::eps_bn_ge2;
          if (din == 2 || din == 3) d2 += MC::delta_free(din);
        }
      }
      return {d1, d2};
    }
    case CaseId::B3b:
      return {MC::eps_bn_ge2 + 2 * MC::eps_fl + makeleaves_unit(), MC::eps_bn_ge2};
    case CaseId::B41:
    case CaseId::B42: {
      Fixed q_term = std::min(MC::eps_fl, MC::eps_free2 - MC::eps_bn_ge2);
      return {MC::eps_bn_ge2 + MC::eps_free2 + q_term, MC::eps_bn_ge2};
    }
    case CaseId::B5: {
      NeighborSplit n1 = split_ext_outs(s, d.x1, d.x1, d.x2);
      Fixed d1 = MC::eps_bn_ge2 + MC::eps_free2 + MC::eps_fl +
                 Fixed(n1.fr2 + n1.fr3) * (MC::eps_free2 - MC::eps_bn_ge2) +
                 Fixed(n1.fl) * MC::eps_fl;
      Fixed d2 = MC::eps_bn_ge2 + MC::eps_free2 + MC::eps_fl + makeleaves_unit();
      return {d1, d2, MC::eps_bn_ge2};
    }
    case CaseId::B6: {
      std::vector<Fixed> b7 = b7_items(s, d);
      return {b7[0], b7[1], b7[3]};
    }
    case CaseId::B7:
      return b7_items(s, d);
    case CaseId::B8a:
      return {MC::eps_bn_ge2 + 2 * (MC::eps_free2 - MC::eps_bn_ge2),
              MC::eps_bn_ge2 + MC::eps_free1};
    case CaseId::B8b:
      return {MC::eps_bn_ge2 + 2 * (MC::eps_free2 - MC::eps_bn_ge2),
              MC::eps_bn_ge2 + MC::eps_free2 + MC::eps_bn_ge2};
    case CaseId::B1:
    case CaseId::B43:
    case CaseId::NaiveBin:
      return {};
  }
  return {};
}

bool claim_gated(CaseId c) {
  switch (c) {
    case CaseId::B2:
    case CaseId::B3a:
    case CaseId::B3b:
    case CaseId::B41:
    case CaseId::B42:
    case CaseId::B5:
    case CaseId::B7:
    case CaseId::B8a:
    case CaseId::B8b:
      return true;
    default:
      return false;
  }
}

BranchAudit audit_branch(const SearchState& parent, const BranchDecision& d,
                         std::span<const ChildMeasure> children) {
  BranchAudit a;
  a.case_id = d.case_id;
  a.mu_parent = mu(parent);
  a.claimed = claimed_deltas(parent, d);

  std::vector<double> live_deltas;
  for (std::size_t i = 0; i < children.size(); ++i) {
    const ChildMeasure& c = children[i];
    Fixed obs = a.mu_parent - c.mu_after_reduce;
    a.observed.push_back(obs);
    a.assign_observed.push_back(a.mu_parent - c.mu_after_assign);
    a.child_live.push_back(c.halted ? 0 : 1);
    if (c.halted) continue;
    if (d.case_id == CaseId::B43 && i == 0 && !c.next_observed.empty()) {
      // fold the succeeding call's branches into the first branch
      for (double g : c.next_observed) live_deltas.push_back(to_real(obs) + g);
    } else {
      live_deltas.push_back(to_real(obs));
    }
  }
  a.branching_num = live_deltas.size() < 2 ? 1.0 : branching_number(live_deltas);
  a.bound_violation = a.branching_num > kBranchingBound + kBranchingTol;
  if (!a.claimed.empty() && claim_gated(d.case_id)) {
    for (std::size_t i = 0; i < a.observed.size() && i < a.claimed.size(); ++i) {
      if (a.child_live[i] && a.observed[i] < a.claimed[i]) a.claim_violation = true;
    }
  }
  return a;
}

void write_audit_report(std::ostream& os, std::span<const BranchAudit> audits) {
  auto fixed_list = [&](const std::vector<Fixed>& xs) {
    for (std::size_t i = 0; i < xs.size(); ++i) os << (i ? "," : "") << to_real(xs[i]);
  };
  for (const BranchAudit& a : audits) {
    os << "case=" << case_name(a.case_id) << " mu=" << to_real(a.mu_parent) << " observed=";
    fixed_list(a.observed);
    os << " assign=";
    fixed_list(a.assign_observed);
    os << " claimed=";
    fixed_list(a.claimed);
    os << " live=";
    for (char c : a.child_live) os << (c ? '1' : '0');
    os << " tau=" << a.branching_num;
    if (a.claim_violation) os << " CLAIM-VIOLATION";
    if (a.bound_violation) os << " BOUND-VIOLATION";
    os << '\n';
  }
}

}  // namespace dmlst
