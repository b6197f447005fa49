#include <benchmark/benchmark.h>

#include "dmlst/io.hpp"
#include "dmlst/memo.hpp"
#include "dmlst/oracle.hpp"
#include "dmlst/reduce.hpp"
#include "dmlst/solver.hpp"

namespace {

using namespace dmlst;

void BM_SolveAllRoots(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  DiGraph g = generate_random(n, 0.3, 1234);
  long nodes = 0;
  for (auto _ : state) {
    SolveResult res = solve(g);
    nodes = res.stats.nodes_expanded;
    benchmark::DoNotOptimize(res.leaf_count);
  }
  state.counters["nodes"] = static_cast<double>(nodes);
}
BENCHMARK(BM_SolveAllRoots)->Arg(10)->Arg(14)->Arg(18)->Unit(benchmark::kMillisecond);

void BM_SolveAudited(benchmark::State& state) {
  DiGraph g = generate_random(static_cast<int>(state.range(0)), 0.3, 1234);
  SolverConfig cfg;
  cfg.audit = true;
  cfg.audit_records = false;
  for (auto _ : state) {
    SolveResult res = solve(g, cfg);
    benchmark::DoNotOptimize(res.stats.max_branching_number);
  }
}
BENCHMARK(BM_SolveAudited)->Arg(12)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_ReduceFixpoint(benchmark::State& state) {
  DiGraph g = generate_random(static_cast<int>(state.range(0)), 0.3, 7);
  VertexId root = -1;
  for (VertexId r : g.vertices()) {
    auto mask = g.reachable_from(r);
    bool all = true;
    for (VertexId v : g.vertices())
      if (!mask[v]) all = false;
    if (all) { root = r; break; }
  }
  if (root < 0) {
    state.SkipWithError("no feasible root in the benchmark instance");
    return;
  }
  SearchState s = initial_state(g, root);
  for (auto _ : state) {
    ReduceOutcome out = reduce_fixpoint(s);
    benchmark::DoNotOptimize(out.events.size());
  }
}
BENCHMARK(BM_ReduceFixpoint)->Arg(12)->Arg(18);

void BM_Oracle(benchmark::State& state) {
  DiGraph g = generate_random(static_cast<int>(state.range(0)), 0.4, 5);
  for (auto _ : state) {
    for (VertexId r : g.vertices()) {
      OracleResult res = solve_unconstrained(g, r);
      benchmark::DoNotOptimize(res.max_leaves);
    }
  }
}
BENCHMARK(BM_Oracle)->Arg(7)->Arg(9)->Unit(benchmark::kMillisecond);

void BM_MemoTableBuild(benchmark::State& state) {
  DiGraph g = generate_random(static_cast<int>(state.range(0)), 0.3, 11);
  for (auto _ : state) {
    MemoTable t = build_table(g, 0.3);
    benchmark::DoNotOptimize(t.size());
  }
}
BENCHMARK(BM_MemoTableBuild)->Arg(10)->Arg(12)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
