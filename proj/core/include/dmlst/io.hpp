#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

#include "dmlst/digraph.hpp"

namespace dmlst {

// Edge-list format: optional comment lines ('#' or 'c'), then "n m",
// then m lines "u v" with 1-indexed vertex ids.
DiGraph parse_graph(std::string_view text);
DiGraph parse_graph(std::istream& is);

std::string format_graph(const DiGraph& g);

// G(n,p) over ordered pairs. Driven by std::mt19937_64 seeded directly with
// `seed`; each pair (u,v), u-major then v, draws one raw 64-bit word and is
// kept when (word >> 11) * 2^-53 < p. mt19937_64 is pinned by the standard,
// so the arc set is identical on every platform.
DiGraph generate_random(int n, double p, std::uint64_t seed);

}  // namespace dmlst
