#include "dmlst/io.hpp"

#include <random>
#include <sstream>

#include "dmlst/errors.hpp"

namespace dmlst {

namespace {

bool is_comment_or_blank(const std::string& line) {
  for (char c : line) {
    if (c == ' ' || c == '\t' || c == '\r') continue;
    return c == '#' || c == 'c';
  }
  return true;  // blank
}

}  // namespace

DiGraph parse_graph(std::istream& is) {
  std::string line;
  int lineno = 0;
  int n = -1;
  long m = -1;
  DiGraph g;
  long arcs_seen = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (is_comment_or_blank(line)) continue;
    std::istringstream ls(line);
    if (n < 0) {
      if (!(ls >> n >> m)) throw ParseError(lineno, "expected header \"n m\"");
      std::string extra;
      if (ls >> extra) throw ParseError(lineno, "trailing tokens after header");
      if (n < 1) throw ParseError(lineno, "vertex count must be positive");
      if (m < 0) throw ParseError(lineno, "negative arc count");
      g = DiGraph(n);
      continue;
    }
    long u, v;
    if (!(ls >> u >> v)) throw ParseError(lineno, "expected arc \"u v\"");
    std::string extra;
    if (ls >> extra) throw ParseError(lineno, "trailing tokens after arc");
    if (u < 1 || u > n || v < 1 || v > n) throw ParseError(lineno, "vertex index out of range");
    if (u == v) throw ParseError(lineno, "self-loop");
    if (g.has_arc(static_cast<int>(u - 1), static_cast<int>(v - 1)))
      throw ParseError(lineno, "duplicate arc");
    if (++arcs_seen > m) throw ParseError(lineno, "more arcs than declared");
    g.add_arc(static_cast<int>(u - 1), static_cast<int>(v - 1));
  }
  if (n < 0) throw ParseError(lineno + 1, "missing header");
  if (arcs_seen != m) throw ParseError(lineno + 1, "fewer arcs than declared");
  return g;
}

DiGraph parse_graph(std::string_view text) {
  std::istringstream is{std::string(text)};
  return parse_graph(is);
}

std::string format_graph(const DiGraph& g) {
  std::ostringstream os;
  os << g.slot_count() << ' ' << g.arc_count() << '\n';
  for (const Arc& a : g.arcs()) os << a.tail + 1 << ' ' << a.head + 1 << '\n';
  return os.str();
}

DiGraph generate_random(int n, double p, std::uint64_t seed) {
  if (n < 1) throw Error("generate_random: n must be positive");
  if (p < 0.0 || p > 1.0) throw Error("generate_random: p outside [0,1]");
  DiGraph g(n);
  std::mt19937_64 rng(seed);
  for (int u = 0; u < n; ++u) {
    for (int v = 0; v < n; ++v) {
      if (u == v) continue;
      double x = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      if (x < p) g.add_arc(u, v);
    }
  }
  return g;
}

}  // namespace dmlst
