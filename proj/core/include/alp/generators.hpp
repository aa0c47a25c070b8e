#pragma once

// Hard-instance generators from two tiling problems (an exponential
// grid via a containment encoding and a width-n corridor via chained
// binary relations), plus a seeded random instance fuzzer.

#include <cstdint>
#include <utility>

#include "alp/instance.hpp"

namespace alp {

/// A tiling problem: tile types, horizontal/vertical adjacency
/// relations and the forced initial (and, for the corridor, final) row.
struct TilingSpec {
  std::size_t n = 1;  // grid: address bits; corridor: width
  std::vector<std::string> types;
  std::set<std::pair<std::string, std::string>> horiz;
  std::set<std::pair<std::string, std::string>> vert;
  std::vector<std::string> initial;
  std::vector<std::string> final_row;  // corridor only

  auto operator<=>(const TilingSpec&) const = default;
};

/// Containment instance for tiling the 2^n x 2^n grid: queries Q1 (the
/// completed top-right corner exists) and Q2 (four linked Tile atoms
/// plus a Boolean circuit asserting some constraint violation). The
/// grid is tileable iff some access path reaches a configuration
/// satisfying Q1 and falsifying Q2.
ProblemInstance gen_tiling_grid(const TilingSpec& spec);

/// Corridor-of-width-n instance: one binary relation per tile type and
/// column, Q1 a union of violation disjuncts, Q2 the final row. The
/// corridor is tileable iff some reachable configuration satisfies Q2
/// and falsifies Q1. as_cq folds Q1's disjunction into one conjunctive
/// query over bit-extended relations.
ProblemInstance gen_tiling_corridor(const TilingSpec& spec, bool as_cq);

struct RandomLimits {
  std::size_t max_domains = 2;
  std::size_t max_relations = 3;
  std::size_t max_arity = 2;
  std::size_t max_methods = 3;
  std::size_t max_facts = 4;
  std::size_t max_admitted = 2;
  std::size_t max_query_atoms = 3;
  std::size_t max_disjuncts = 2;  // 1 with cq_only
  bool cq_only = false;
  bool independent_only = false;
};

/// Reproducible random instance: schema, configuration, one Boolean
/// query named "Q" (plus "Q2" when two queries are requested via
/// `two_queries`) and a distinguished well-formed access. Always
/// validator-clean.
ProblemInstance gen_random_instance(std::uint64_t seed,
                                    const RandomLimits& limits,
                                    bool two_queries = false);

}  // namespace alp
