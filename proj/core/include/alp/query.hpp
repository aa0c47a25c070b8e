#pragma once

// Positive queries (And/Or trees over relational atoms), DNF expansion,
// homomorphism-based evaluation, certain answers, classical containment.

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "alp/model.hpp"

namespace alp {

struct Term {
  enum Kind { Variable, Constant } kind = Variable;
  std::string name;  // variable name or constant token

  static Term var(std::string n) { return {Variable, std::move(n)}; }
  static Term con(std::string n) { return {Constant, std::move(n)}; }
  bool is_var() const { return kind == Variable; }

  auto operator<=>(const Term&) const = default;
};

struct Atom {
  std::string relation;
  std::vector<Term> terms;

  auto operator<=>(const Atom&) const = default;
};

/// Boolean positive query: a tree of conjunctions and disjunctions over
/// atoms, all variables existentially quantified.
struct Query {
  enum Kind { AtomNode, AndNode, OrNode } kind = AndNode;
  Atom atom;                     // valid when kind == AtomNode
  std::vector<Query> children;   // valid otherwise

  static Query make_atom(Atom a) {
    Query q;
    q.kind = AtomNode;
    q.atom = std::move(a);
    return q;
  }
  static Query make_and(std::vector<Query> cs) {
    Query q;
    q.kind = AndNode;
    q.children = std::move(cs);
    return q;
  }
  static Query make_or(std::vector<Query> cs) {
    Query q;
    q.kind = OrNode;
    q.children = std::move(cs);
    return q;
  }
  bool is_cq() const;

  auto operator<=>(const Query&) const = default;
};

using ConjunctiveQuery = std::vector<Atom>;  // one DNF disjunct

/// Query with a name and (for non-Boolean heads) answer variables.
struct NamedQuery {
  std::string name;
  Query body;
  std::vector<std::string> head;  // empty = Boolean

  auto operator<=>(const NamedQuery&) const = default;
};

using Homomorphism = std::map<std::string, std::string>;  // var -> token

/// All atoms of the tree, in preorder.
std::vector<Atom> collect_atoms(const Query& q);

/// Free variables in order of first occurrence.
std::vector<std::string> collect_variables(const Query& q);
std::vector<std::string> collect_variables(const ConjunctiveQuery& cq);

/// Variable -> domain map inferred from atom positions; throws on a
/// domain clash or arity mismatch.
std::map<std::string, std::string> variable_domains(const Query& q,
                                                    const Schema& schema);
std::map<std::string, std::string> variable_domains(const ConjunctiveQuery& cq,
                                                    const Schema& schema);

/// Constants of the query together with their positional domains.
std::set<TypedValue> query_constants(const Query& q, const Schema& schema);

/// Diagnostics: arity errors, domain clashes, un-admitted constants.
std::vector<std::string> validate_query(const Query& q, const Schema& schema,
                                        const Configuration& conf);

/// Disjunction of conjunctions equivalent to q. Empty disjunct = true;
/// empty result = false. Worst case exponential in the Or-nesting.
std::vector<ConjunctiveQuery> to_dnf(const Query& q);

Query dnf_to_query(const std::vector<ConjunctiveQuery>& dnf);

/// Applies a partial variable substitution to atoms.
Atom substitute(const Atom& atom, const Homomorphism& h);
ConjunctiveQuery substitute(const ConjunctiveQuery& cq, const Homomorphism& h);

Fact ground_atom(const Atom& atom, const Homomorphism& h);
bool atom_is_ground(const Atom& atom);

/// Backtracking homomorphism search from the conjunct into conf's facts.
/// Atoms are tried in ascending candidate-count order. `fixed` seeds the
/// assignment. Constants map to themselves.
std::optional<Homomorphism> find_hom(const ConjunctiveQuery& cq,
                                     const Configuration& conf,
                                     const Schema& schema,
                                     const Homomorphism& fixed = {});

bool check_hom(const ConjunctiveQuery& cq, const Homomorphism& h,
               const Configuration& conf);

struct EvalResult {
  bool holds = false;
  std::size_t disjunct = 0;  // index into to_dnf(q) when holds
  Homomorphism witness;
};

EvalResult eval(const Query& q, const Configuration& conf,
                const Schema& schema);
bool holds(const Query& q, const Configuration& conf, const Schema& schema);

/// Satisfaction witnessed through f: some atom maps onto that fact. For a
/// positive query this equals holds(conf) whenever the query was false on
/// conf minus f, so incremental searches can pin the freshly added fact.
bool holds_with(const Query& q, const Configuration& conf, const Fact& f,
                const Schema& schema);

/// Certain answer for a Boolean positive query: equals eval, since the
/// configuration is itself a consistent instance and positive queries
/// are monotone.
bool certain(const Query& q, const Configuration& conf, const Schema& schema);

/// Classical (access-free) containment q1 subseteq q2: every DNF disjunct
/// of q1 admits a homomorphism from some disjunct of q2 into its frozen
/// canonical database.
bool classical_contains(const Query& q1, const Query& q2,
                        const Schema& schema);

}  // namespace alp
