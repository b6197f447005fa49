#include "dmlst/memo.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>
#include <tuple>

#include "dmlst/errors.hpp"
#include "dmlst/reduce.hpp"

namespace dmlst {

namespace {

constexpr char kMagic[4] = {'D', 'M', 'L', 'T'};
constexpr std::uint32_t kVersion = 1;

int subset_limit(int n, double alpha) {
  int lim = static_cast<int>(std::ceil(alpha * n - 1e-12));
  return std::clamp(lim, 0, n);
}

void put_u32(std::ostream& os, std::uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                        static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
  os.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t get_u32(std::istream& is) {
  unsigned char b[4];
  is.read(reinterpret_cast<char*>(b), 4);
  if (!is) throw Error("memo table: truncated stream");
  return std::uint32_t(b[0]) | (std::uint32_t(b[1]) << 8) | (std::uint32_t(b[2]) << 16) |
         (std::uint32_t(b[3]) << 24);
}

void put_u64(std::ostream& os, std::uint64_t v) {
  put_u32(os, static_cast<std::uint32_t>(v));
  put_u32(os, static_cast<std::uint32_t>(v >> 32));
}

std::uint64_t get_u64(std::istream& is) {
  std::uint64_t lo = get_u32(is);
  std::uint64_t hi = get_u32(is);
  return lo | (hi << 32);
}

}  // namespace

std::size_t MemoKeyHash::operator()(const MemoKey& k) const {
  std::uint64_t h = (std::uint64_t(k.vset) << 32) ^ (std::uint64_t(k.bnset) << 11) ^ k.flset;
  h ^= h >> 33;
  h *= 0xff51afd7ed558ccdULL;
  h ^= h >> 33;
  return static_cast<std::size_t>(h);
}

MemoTable::MemoTable(int n, double alpha)
    : n_(n), alpha_(alpha), max_subset_(subset_limit(n, alpha)) {}

const MemoEntry* MemoTable::find(const MemoKey& k) const {
  auto it = entries_.find(k);
  return it == entries_.end() ? nullptr : &it->second;
}

void MemoTable::insert(const MemoKey& k, MemoEntry e) { entries_[k] = std::move(e); }

void MemoTable::dump(std::ostream& os) const {
  os.write(kMagic, 4);
  put_u32(os, kVersion);
  put_u32(os, static_cast<std::uint32_t>(n_));
  put_u64(os, std::bit_cast<std::uint64_t>(alpha_));
  put_u64(os, entries_.size());
  // deterministic file: keys sorted
  std::vector<MemoKey> keys;
  keys.reserve(entries_.size());
  for (const auto& [k, _] : entries_) keys.push_back(k);
  std::sort(keys.begin(), keys.end(), [](const MemoKey& a, const MemoKey& b) {
    return std::tie(a.vset, a.bnset, a.flset) < std::tie(b.vset, b.bnset, b.flset);
  });
  for (const MemoKey& k : keys) {
    const MemoEntry& e = entries_.at(k);
    put_u32(os, k.vset);
    put_u32(os, k.bnset);
    put_u32(os, k.flset);
    put_u32(os, e.feasible ? 1 : 0);
    put_u32(os, static_cast<std::uint32_t>(e.leaf_count + 1));  // keep -1 encodable
    put_u32(os, static_cast<std::uint32_t>(e.inner_arcs.size()));
    for (const Arc& a : e.inner_arcs) {
      put_u32(os, static_cast<std::uint32_t>(a.tail));
      put_u32(os, static_cast<std::uint32_t>(a.head));
    }
  }
}

MemoTable MemoTable::load(std::istream& is) {
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kMagic, 4) != 0) throw Error("memo table: bad magic");
  if (get_u32(is) != kVersion) throw Error("memo table: unsupported version");
  int n = static_cast<int>(get_u32(is));
  double alpha = std::bit_cast<double>(get_u64(is));
  MemoTable t(n, alpha);
  std::uint64_t count = get_u64(is);
  for (std::uint64_t i = 0; i < count; ++i) {
    MemoKey k{get_u32(is), get_u32(is), get_u32(is)};
    MemoEntry e;
    e.feasible = get_u32(is) != 0;
    e.leaf_count = static_cast<int>(get_u32(is)) - 1;
    std::uint32_t arcs = get_u32(is);
    e.inner_arcs.reserve(arcs);
    for (std::uint32_t j = 0; j < arcs; ++j) {
      int tail = static_cast<int>(get_u32(is));
      int head = static_cast<int>(get_u32(is));
      e.inner_arcs.push_back({tail, head});
    }
    t.insert(k, std::move(e));
  }
  return t;
}

long table_key_count(int n, double alpha) {
  int lim = subset_limit(n, alpha);
  // sum_{k<=lim} C(n,k) * 3^k: each subset vertex is out/bn/fl
  long total = 0;
  std::vector<long> binom(n + 1, 0);
  binom[0] = 1;
  for (int row = 1; row <= n; ++row)
    for (int k = row; k >= 1; --k) binom[k] += binom[k - 1];
  long pow3 = 1;
  for (int k = 0; k <= lim; ++k) {
    total += binom[k] * pow3;
    pow3 *= 3;
  }
  return total;
}

AugmentedInstance build_augmented(const DiGraph& g, const MemoKey& key) {
  AugmentedInstance inst;
  for (int v = 0; v < g.slot_count(); ++v)
    if (key.vset & (1u << v)) inst.orig.push_back(v);
  const int k = static_cast<int>(inst.orig.size());
  inst.rprime = k;
  inst.y = k + 1;

  std::vector<int> idx(g.slot_count(), -1);
  for (int i = 0; i < k; ++i) idx[inst.orig[i]] = i;

  DiGraph aug(k + 2);
  for (int i = 0; i < k; ++i)
    for (VertexId w : g.out(inst.orig[i]))
      if (idx[w] >= 0) aug.add_arc(i, idx[w]);
  aug.add_arc(inst.rprime, inst.y);
  for (int i = 0; i < k; ++i)
    if (key.bnset & (1u << inst.orig[i])) aug.add_arc(inst.rprime, i);

  std::vector<char> reach = aug.reachable_from(inst.rprime);
  for (VertexId v : aug.vertices()) {
    if (!reach[v]) {
      inst.feasible_shape = false;
      inst.graph = std::move(aug);
      return inst;
    }
  }
  inst.graph = aug;
  inst.initial = initial_state(aug, inst.rprime);
  for (int i = 0; i < k; ++i)
    if (key.flset & (1u << inst.orig[i])) inst.initial.make_floating_inplace(i);
  return inst;
}

MemoTable build_table(const DiGraph& g, double alpha, long budget) {
  if (g.vertex_count() != g.slot_count())
    throw Error("build_table: graph has retired vertices");
  const int n = g.slot_count();
  if (n > 31) throw Error("build_table: n > 31 not supported");
  long keys = table_key_count(n, alpha);
  if (keys > budget)
    throw BudgetExceeded("memo table needs " + std::to_string(keys) + " keys, budget " +
                         std::to_string(budget));

  MemoTable table(n, alpha);
  const int lim = table.max_subset();
  SolverConfig cfg;  // plain branch-and-reduce on each augmented instance

  for (std::uint32_t vset = 0; vset < (1u << n); ++vset) {
    if (std::popcount(vset) > lim) continue;
    // enumerate disjoint (bn, fl) submask pairs
    for (std::uint32_t bn = vset;; bn = (bn - 1) & vset) {
      std::uint32_t rest = vset & ~bn;
      for (std::uint32_t fl = rest;; fl = (fl - 1) & rest) {
        MemoKey key{vset, bn, fl};
        MemoEntry entry;
        if (bn != 0 || vset == 0) {
          AugmentedInstance inst = build_augmented(g, key);
          if (inst.feasible_shape) {
            SolveResult res = solve_from_state(inst.initial, cfg);
            if (res.feasible) {
              entry.feasible = true;
              entry.leaf_count = res.leaf_count;
              for (const Arc& a : res.tree)
                if (a.tail != inst.rprime)
                  entry.inner_arcs.push_back({inst.orig[a.tail], inst.orig[a.head]});
            }
          }
        }
        table.insert(key, std::move(entry));
        if (fl == 0) break;
      }
      if (bn == 0) break;
    }
  }
  return table;
}

namespace {

struct MemoCtx {
  const SolverConfig& cfg;
  const MemoTable& table;
  SearchStats& stats;
  long nodes = 0;
};

struct MemoTimeout {};

struct MemoNode {
  bool feasible = false;
  int leaves = -1;
  std::vector<Arc> tree;
};

MemoNode memo_node(SearchState s, MemoCtx& ctx, int depth) {
  if (ctx.cfg.node_limit && ctx.nodes >= *ctx.cfg.node_limit) throw MemoTimeout{};
  ++ctx.nodes;
  ++ctx.stats.nodes_expanded;
  ctx.stats.max_depth = std::max(ctx.stats.max_depth, depth);

  ReduceOutcome red = reduce_fixpoint(std::move(s), /*use_r6=*/false);
  for (const ReductionEvent& ev : red.events) ++ctx.stats.reductions[static_cast<int>(ev.rule)];

  if (red.halt.kind == HaltKind::Solved)
    return {true, red.halt.leaf_count, red.state.tree_arcs()};
  if (red.halt.kind == HaltKind::AnswerNo) return {};

  // cutover: the open region fits the precomputed table
  MemoKey key;
  int open = 0;
  for (VertexId v : red.state.graph.vertices()) {
    Label l = red.state.label(v);
    if (l == Label::In || l == Label::Ln) continue;
    ++open;
    key.vset |= 1u << v;
    if (l == Label::Bn) key.bnset |= 1u << v;
    if (l == Label::Fl) key.flset |= 1u << v;
  }
  if (open <= ctx.table.max_subset()) {
    const MemoEntry* e = ctx.table.find(key);
    if (!e) throw ContractViolation("memo table missing a cutover key");
    if (!e->feasible) return {};
    MemoNode out;
    out.feasible = true;
    out.leaves = red.state.leaf_count() + e->leaf_count - 1;  // y is always a leaf
    out.tree = red.state.tree_arcs();
    out.tree.insert(out.tree.end(), e->inner_arcs.begin(), e->inner_arcs.end());
    std::sort(out.tree.begin(), out.tree.end());
    return out;
  }

  BranchDecision d = select_case_naive(red.state);
  ++ctx.stats.branch_cases[static_cast<int>(d.case_id)];
  MemoNode best;
  for (std::size_t i = 0; i < d.children.size(); ++i) {
    MemoNode c = memo_node(apply_child(red.state, d, static_cast<int>(i)), ctx, depth + 1);
    if (c.feasible && (!best.feasible || c.leaves > best.leaves)) best = std::move(c);
  }
  return best;
}

}  // namespace

SolveResult solve_memoized(const DiGraph& g, VertexId r, const MemoTable& table,
                           const SolverConfig& cfg) {
  SolveResult res;
  res.root = r;
  if (g.vertex_count() == 1) {
    res.status = SolveStatus::Solved;
    res.feasible = true;
    res.leaf_count = 0;
    res.stats.nodes_expanded = 1;
    return res;
  }
  std::vector<char> reach = g.reachable_from(r);
  for (VertexId v : g.vertices())
    if (!reach[v]) return res;

  MemoCtx ctx{cfg, table, res.stats, 0};
  try {
    MemoNode node = memo_node(initial_state(g, r), ctx, 0);
    if (node.feasible) {
      res.status = SolveStatus::Solved;
      res.feasible = true;
      res.leaf_count = node.leaves;
      res.tree = std::move(node.tree);
    }
  } catch (const MemoTimeout&) {
    res.status = SolveStatus::Timeout;
  }
  return res;
}

}  // namespace dmlst
