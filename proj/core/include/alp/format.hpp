#pragma once

// Line-oriented problem format (.alp): domains, relations, access
// methods, facts, admitted constants, named queries and an optional
// distinguished access. Parse errors carry line and column.

#include <stdexcept>
#include <string>

#include "alp/instance.hpp"

namespace alp {

struct ParseError : std::runtime_error {
  ParseError(std::string msg, std::size_t line, std::size_t column)
      : std::runtime_error(std::move(msg)), line(line), column(column) {}
  std::size_t line = 0;
  std::size_t column = 0;
};

/// Parses the problem format. Validates arities, domains and query
/// constants as it goes; `admit_query_constants` auto-admits query
/// constants instead of rejecting un-admitted ones.
ProblemInstance parse_problem(const std::string& text,
                              bool admit_query_constants = false);

/// Inverse of parse_problem on canonical query trees:
/// parse_problem(print_problem(x)) == x.
std::string print_problem(const ProblemInstance& inst);

std::string print_query(const Query& q);

/// Access expression `R(v,?,...) via M`: one term per attribute of R,
/// values at the method's input positions and `?` elsewhere.
Access parse_access_expr(const std::string& text, const Schema& schema);
std::string print_access_expr(const Access& access, const Schema& schema);

}  // namespace alp
