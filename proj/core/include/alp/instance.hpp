#pragma once

// A full problem: schema + configuration + named queries + optional
// distinguished access. The unit the CLI parses and the reductions map.

#include <optional>
#include <string>
#include <vector>

#include "alp/model.hpp"
#include "alp/query.hpp"

namespace alp {

struct ProblemInstance {
  Schema schema;
  Configuration conf;
  std::vector<NamedQuery> queries;
  std::optional<Access> access;

  const NamedQuery* find_query(const std::string& name) const {
    for (const auto& q : queries)
      if (q.name == name) return &q;
    return nullptr;
  }
  const NamedQuery& query(const std::string& name) const {
    const NamedQuery* q = find_query(name);
    if (!q) throw ModelError("unknown query: " + name);
    return *q;
  }

  auto operator<=>(const ProblemInstance&) const = default;
};

/// Schema + query + configuration diagnostics in one sweep.
std::vector<std::string> validate_instance(const ProblemInstance& inst);

/// Rough serialized size, for the polynomial-blowup assertions.
std::size_t instance_size(const ProblemInstance& inst);

}  // namespace alp
