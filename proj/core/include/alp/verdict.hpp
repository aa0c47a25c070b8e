#pragma once

// Three-valued outcomes with checkable certificates, search budgets and
// oracle enumeration limits.

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>

#include "alp/model.hpp"
#include "alp/query.hpp"

namespace alp {

enum class Outcome { Yes, No, UnknownWithinBudget };

inline const char* outcome_name(Outcome o) {
  switch (o) {
    case Outcome::Yes:
      return "yes";
    case Outcome::No:
      return "no";
    case Outcome::UnknownWithinBudget:
      return "unknown_within_budget";
  }
  return "?";
}

/// Free-form description of a guessed witness structure (which subgoals
/// the first access covers, the chosen variable mapping, ...).
struct GuessDescriptor {
  std::string text;

  auto operator<=>(const GuessDescriptor&) const = default;
};

using Certificate =
    std::variant<std::monostate, Response, Path, Homomorphism, GuessDescriptor>;

struct SearchStats {
  std::uint64_t nodes = 0;
  double millis = 0.0;
  bool exhaustive = false;  // the budget provably covered the canonical space
};

struct Verdict {
  Outcome outcome = Outcome::UnknownWithinBudget;
  Certificate certificate;
  SearchStats stats;

  bool yes() const { return outcome == Outcome::Yes; }
  bool no() const { return outcome == Outcome::No; }
  bool decided() const { return outcome != Outcome::UnknownWithinBudget; }

  static Verdict make(Outcome o, Certificate c = std::monostate{}) {
    Verdict v;
    v.outcome = o;
    v.certificate = std::move(c);
    return v;
  }
};

/// Bounds for the dependent-case searches.
struct Budget {
  std::size_t max_facts = 0;           // extra facts beyond the configuration
  std::size_t max_fresh = 0;           // fresh values per domain
  std::size_t max_depth = 0;           // support-chain depth / path length
  std::size_t max_first_response = 1;  // tuples in the initial LTR response
  std::uint64_t timeout_ms = 0;        // 0 = none

  /// Spec defaults: depth = |vars(q)|, facts = |atoms(q)| * (1 + depth).
  static Budget defaults_for(const Query& q);
};

struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Bounds for the brute-force oracles.
struct OracleLimits {
  std::size_t max_path_length = 3;
  std::size_t max_fresh = 2;
  std::size_t max_response = 1;
  std::size_t max_extension_facts = 3;  // certainty oracle
  std::uint64_t hard_cap = 2'000'000;   // explored states before bailing out
};

struct OracleCapExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double millis() const {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace alp
