#include "cli_app.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "dmlst/errors.hpp"
#include "dmlst/io.hpp"
#include "dmlst/memo.hpp"
#include "dmlst/oracle.hpp"
#include "dmlst/solver.hpp"

namespace dmlst {

namespace {

using nlohmann::json;

struct InputOpts {
  std::string input_file;
  std::string random_spec;  // "n,p,seed"
};

void add_input_opts(CLI::App* cmd, InputOpts& in) {
  auto* f = cmd->add_option("--input", in.input_file, "edge-list file (\"n m\" header, 1-indexed arcs)");
  auto* r = cmd->add_option("--random", in.random_spec, "random instance n,p,seed");
  f->excludes(r);
  r->excludes(f);
}

DiGraph load_graph(const InputOpts& in) {
  if (!in.random_spec.empty()) {
    int n;
    double p;
    unsigned long long seed;
    char c1, c2;
    std::istringstream ss(in.random_spec);
    if (!(ss >> n >> c1 >> p >> c2 >> seed) || c1 != ',' || c2 != ',')
      throw Error("--random expects n,p,seed");
    return generate_random(n, p, seed);
  }
  if (in.input_file.empty()) throw Error("provide --input FILE or --random n,p,seed");
  std::ifstream f(in.input_file);
  if (!f) throw Error("cannot open " + in.input_file);
  return parse_graph(f);
}

Variant parse_variant(const std::string& name) {
  if (name == "branch") return Variant::BranchReduce;
  if (name == "naive") return Variant::NaiveBN;
  if (name == "memo") return Variant::Memoized;
  throw Error("unknown variant: " + name);
}

json stats_json(const SearchStats& st, bool audit) {
  json reductions = json::object();
  for (int i = 0; i < kRuleCount; ++i)
    reductions[rule_name(static_cast<Rule>(i))] = st.reductions[i];
  json cases = json::object();
  for (int i = 0; i < kCaseCount; ++i)
    cases[case_name(static_cast<CaseId>(i))] = st.branch_cases[i];
  json j{{"nodesExpanded", st.nodes_expanded},
         {"maxDepth", st.max_depth},
         {"reductions", reductions},
         {"branchCases", cases}};
  if (audit) {
    j["audit"] = {{"auditedNodes", st.audited_nodes},
                  {"maxBranchingNumber", st.max_branching_number},
                  {"claimViolations", st.claim_violations},
                  {"boundViolations", st.bound_violations},
                  {"muIncreaseViolations", st.mu_increase_violations},
                  {"muNondecreaseViolations", st.mu_nondecrease_violations}};
  }
  return j;
}

json result_json(const SolveResult& res, bool audit) {
  json j;
  switch (res.status) {
    case SolveStatus::Solved: j["status"] = "solved"; break;
    case SolveStatus::Infeasible: j["status"] = "infeasible"; break;
    case SolveStatus::Timeout: j["status"] = "timeout"; break;
  }
  j["leafCount"] = res.leaf_count;
  if (res.feasible) {
    j["root"] = res.root + 1;
    json tree = json::array();
    for (const Arc& a : res.tree) tree.push_back({a.tail + 1, a.head + 1});
    j["tree"] = tree;
  }
  j["stats"] = stats_json(res.stats, audit);
  return j;
}

void print_result_text(std::ostream& out, const SolveResult& res, bool audit) {
  const char* status = res.status == SolveStatus::Solved     ? "solved"
                       : res.status == SolveStatus::Timeout ? "timeout"
                                                            : "infeasible";
  out << "status: " << status << "\n";
  out << "leafCount: " << res.leaf_count << "\n";
  if (res.feasible) {
    out << "root: " << res.root + 1 << "\n";
    out << "tree:";
    for (const Arc& a : res.tree) out << ' ' << a.tail + 1 << "->" << a.head + 1;
    out << "\n";
  }
  const SearchStats& st = res.stats;
  out << "nodesExpanded: " << st.nodes_expanded << "\n";
  out << "maxDepth: " << st.max_depth << "\n";
  out << "reductions:";
  for (int i = 0; i < kRuleCount; ++i)
    out << ' ' << rule_name(static_cast<Rule>(i)) << '=' << st.reductions[i];
  out << "\n";
  out << "branchCases:";
  for (int i = 0; i < kCaseCount; ++i)
    out << ' ' << case_name(static_cast<CaseId>(i)) << '=' << st.branch_cases[i];
  out << "\n";
  if (audit) {
    out << "auditedNodes: " << st.audited_nodes << "\n";
    out << "maxBranchingNumber: " << st.max_branching_number << "\n";
    out << "auditViolations: claims=" << st.claim_violations << " bound=" << st.bound_violations
        << " muIncrease=" << st.mu_increase_violations
        << " muNondecrease=" << st.mu_nondecrease_violations << "\n";
  }
}

int status_exit(const SolveResult& res) {
  switch (res.status) {
    case SolveStatus::Solved: return kExitSolved;
    case SolveStatus::Timeout: return kExitTimeout;
    case SolveStatus::Infeasible: return kExitInfeasible;
  }
  return kExitError;
}

OracleResult oracle_all_roots(const DiGraph& g, int cap) {
  OracleResult best{false, -1, 0};
  for (VertexId r : g.vertices()) {
    OracleResult res = solve_unconstrained(g, r, cap);
    best.trees_enumerated += res.trees_enumerated;
    if (res.feasible && res.max_leaves > best.max_leaves) {
      best.feasible = true;
      best.max_leaves = res.max_leaves;
    }
  }
  return best;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"exact directed maximum-leaf spanning tree solver"};
  app.require_subcommand(1);

  // solve
  InputOpts solve_in;
  std::optional<int> solve_root;
  bool solve_all_roots = false;
  std::string solve_variant = "branch";
  double solve_alpha = 0.3;
  bool solve_audit = false;
  std::optional<long> solve_node_limit;
  std::string solve_format = "text";
  CLI::App* solve_cmd = app.add_subcommand("solve", "run a solver variant");
  add_input_opts(solve_cmd, solve_in);
  auto* root_opt = solve_cmd->add_option("--root", solve_root, "root vertex (1-indexed)");
  auto* all_opt = solve_cmd->add_flag("--all-roots", solve_all_roots, "try every root");
  root_opt->excludes(all_opt);
  all_opt->excludes(root_opt);
  solve_cmd->add_option("--variant", solve_variant, "branch|naive|memo")->capture_default_str();
  solve_cmd->add_option("--alpha", solve_alpha, "memo cutover fraction")->capture_default_str();
  solve_cmd->add_flag("--audit", solve_audit, "measure audit per branching node");
  std::string solve_audit_report;
  solve_cmd->add_option("--audit-report", solve_audit_report,
                        "write one audit record per branching node to this file");
  solve_cmd->add_option("--node-limit", solve_node_limit, "abort after this many search nodes");
  solve_cmd->add_option("--format", solve_format, "text|json")->capture_default_str();

  // oracle
  InputOpts oracle_in;
  std::optional<int> oracle_root;
  bool oracle_all = false;
  int oracle_cap = kOracleCap;
  std::string oracle_format = "text";
  CLI::App* oracle_cmd = app.add_subcommand("oracle", "brute-force reference solver");
  add_input_opts(oracle_cmd, oracle_in);
  oracle_cmd->add_option("--root", oracle_root, "root vertex (1-indexed)");
  oracle_cmd->add_flag("--all-roots", oracle_all, "try every root");
  oracle_cmd->add_option("--cap", oracle_cap, "vertex cap")->capture_default_str();
  oracle_cmd->add_option("--format", oracle_format, "text|json")->capture_default_str();

  // table
  InputOpts table_in;
  double table_alpha = 0.3;
  std::string table_out, table_load;
  CLI::App* table_cmd = app.add_subcommand("table", "build or inspect a memo table");
  add_input_opts(table_cmd, table_in);
  table_cmd->add_option("--alpha", table_alpha, "cutover fraction")->capture_default_str();
  table_cmd->add_option("--out", table_out, "dump the table to this file");
  table_cmd->add_option("--load", table_load, "load a dumped table and report its shape");

  // corpus
  int corpus_n = 8, corpus_count = 100;
  double corpus_p = 0.3;
  unsigned long long corpus_seed = 1;
  bool corpus_variants = false;
  double corpus_alpha = 0.3;
  CLI::App* corpus_cmd = app.add_subcommand("corpus", "batch solver-vs-oracle equivalence");
  corpus_cmd->add_option("--n", corpus_n, "vertices per instance")->capture_default_str();
  corpus_cmd->add_option("--count", corpus_count, "number of instances")->capture_default_str();
  corpus_cmd->add_option("--p", corpus_p, "arc probability")->capture_default_str();
  corpus_cmd->add_option("--seed", corpus_seed, "base seed; instance i uses seed+i")
      ->capture_default_str();
  corpus_cmd->add_flag("--variants", corpus_variants, "also compare naive and memo variants");
  corpus_cmd->add_option("--alpha", corpus_alpha, "memo alpha for --variants")
      ->capture_default_str();

  std::vector<const char*> argv;
  argv.push_back("dmlst");
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitSolved;
    }
    err << "error: " << e.what() << "\n";
    return kExitError;
  }

  try {
    if (solve_cmd->parsed()) {
      DiGraph g = load_graph(solve_in);
      SolverConfig cfg;
      cfg.variant = parse_variant(solve_variant);
      cfg.audit = solve_audit;
      cfg.alpha = solve_alpha;
      cfg.node_limit = solve_node_limit;
      SolveResult res;
      if (solve_root) {
        int r = *solve_root - 1;
        if (r < 0 || r >= g.slot_count()) throw Error("--root out of range");
        res = solve_rooted(g, r, cfg);
      } else {
        res = solve(g, cfg);
      }
      if (!solve_audit_report.empty()) {
        std::ofstream rf(solve_audit_report);
        if (!rf) throw Error("cannot open " + solve_audit_report);
        write_audit_report(rf, res.stats.audits);
      }
      if (solve_format == "json")
        out << result_json(res, solve_audit).dump(2) << "\n";
      else
        print_result_text(out, res, solve_audit);
      return status_exit(res);
    }

    if (oracle_cmd->parsed()) {
      DiGraph g = load_graph(oracle_in);
      OracleResult res;
      if (oracle_root) {
        int r = *oracle_root - 1;
        if (r < 0 || r >= g.slot_count()) throw Error("--root out of range");
        res = solve_unconstrained(g, r, oracle_cap);
      } else {
        res = oracle_all_roots(g, oracle_cap);
      }
      if (oracle_format == "json") {
        json j{{"status", res.feasible ? "solved" : "infeasible"},
               {"leafCount", res.max_leaves},
               {"treesEnumerated", res.trees_enumerated}};
        out << j.dump(2) << "\n";
      } else {
        out << "status: " << (res.feasible ? "solved" : "infeasible") << "\n";
        out << "leafCount: " << res.max_leaves << "\n";
        out << "treesEnumerated: " << res.trees_enumerated << "\n";
      }
      return res.feasible ? kExitSolved : kExitInfeasible;
    }

    if (table_cmd->parsed()) {
      if (!table_load.empty()) {
        std::ifstream f(table_load, std::ios::binary);
        if (!f) throw Error("cannot open " + table_load);
        MemoTable t = MemoTable::load(f);
        out << "n: " << t.n() << "\nalpha: " << t.alpha() << "\nmaxSubset: " << t.max_subset()
            << "\nentries: " << t.size() << "\n";
        return kExitSolved;
      }
      DiGraph g = load_graph(table_in);
      MemoTable t = build_table(g, table_alpha);
      out << "n: " << t.n() << "\nalpha: " << t.alpha() << "\nmaxSubset: " << t.max_subset()
          << "\nentries: " << t.size() << "\n";
      if (!table_out.empty()) {
        std::ofstream f(table_out, std::ios::binary);
        if (!f) throw Error("cannot open " + table_out);
        t.dump(f);
        out << "written: " << table_out << "\n";
      }
      return kExitSolved;
    }

    if (corpus_cmd->parsed()) {
      long mismatches = 0;
      for (int i = 0; i < corpus_count; ++i) {
        DiGraph g = generate_random(corpus_n, corpus_p, corpus_seed + i);
        SolveResult br = solve(g, {});
        OracleResult ora = oracle_all_roots(g, kOracleCap);
        bool ok = (br.feasible == ora.feasible) &&
                  (!br.feasible || br.leaf_count == ora.max_leaves);
        if (ok && corpus_variants) {
          SolverConfig nv;
          nv.variant = Variant::NaiveBN;
          SolveResult na = solve(g, nv);
          SolverConfig mv;
          mv.variant = Variant::Memoized;
          mv.alpha = corpus_alpha;
          SolveResult me = solve(g, mv);
          ok = na.feasible == br.feasible && me.feasible == br.feasible &&
               (!br.feasible ||
                (na.leaf_count == br.leaf_count && me.leaf_count == br.leaf_count));
        }
        if (!ok) {
          ++mismatches;
          err << "mismatch on instance " << i << " (seed " << corpus_seed + i << ")\n";
        }
      }
      out << "instances: " << corpus_count << "\n";
      out << "mismatches: " << mismatches << "\n";
      return mismatches == 0 ? kExitSolved : kExitError;
    }
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}

}  // namespace dmlst
