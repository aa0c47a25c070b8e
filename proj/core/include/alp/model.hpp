#pragma once

// Data model for relational sources with limited access patterns:
// schemas with typed attributes, access methods, configurations (the
// known part of a hidden instance), accesses, responses and paths.

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace alp {

struct ModelError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A constant together with its abstract domain. Identity is the pair:
/// the same token in two domains is two distinct values.
struct TypedValue {
  std::string token;
  std::string domain;

  auto operator<=>(const TypedValue&) const = default;
};

struct Attribute {
  std::string name;
  std::string domain;

  auto operator<=>(const Attribute&) const = default;
};

struct Relation {
  std::string name;
  std::vector<Attribute> attributes;

  std::size_t arity() const { return attributes.size(); }
  std::optional<std::size_t> attribute_index(const std::string& attr) const;

  auto operator<=>(const Relation&) const = default;
};

enum class AccessMode { Dependent, Independent };

/// An access method exposes a relation behind a binding pattern: the
/// input attributes must be bound to make the access. No inputs = free
/// access; all attributes inputs = Boolean (membership) access.
struct AccessMethod {
  std::string name;
  std::string relation;
  std::vector<std::string> input_attributes;  // kept sorted by position
  AccessMode mode = AccessMode::Dependent;

  bool has_input(const std::string& attr) const;

  auto operator<=>(const AccessMethod&) const = default;
};

struct Schema {
  std::vector<std::string> domains;
  std::vector<Relation> relations;
  std::vector<AccessMethod> methods;

  const Relation* find_relation(const std::string& name) const;
  const AccessMethod* find_method(const std::string& name) const;
  const Relation& relation(const std::string& name) const;      // throws
  const AccessMethod& method(const std::string& name) const;    // throws
  bool relation_has_method(const std::string& relation) const;
  bool is_boolean(const AccessMethod& m) const;
  bool is_free(const AccessMethod& m) const;

  /// Structural diagnostics: duplicate names, undeclared domains,
  /// method inputs outside the relation's attribute set.
  std::vector<std::string> validate() const;

  auto operator<=>(const Schema&) const = default;
};

/// A ground tuple for a named relation. Attribute domains are implied
/// by the schema.
struct Fact {
  std::string relation;
  std::vector<std::string> values;

  auto operator<=>(const Fact&) const = default;
};

/// The evolving known subset of the hidden instance, plus admitted
/// constants (the model's "all query constants are present" assumption
/// made explicit).
struct Configuration {
  std::set<Fact> facts;
  std::set<TypedValue> admitted;

  bool contains(const Fact& f) const { return facts.count(f) != 0; }
  bool subset_of(const Configuration& other) const;
  void insert(const Fact& f) { facts.insert(f); }

  auto operator<=>(const Configuration&) const = default;
};

/// adom(conf): every typed value occurring in a fact, plus admitted constants.
std::set<TypedValue> adom(const Configuration& conf, const Schema& schema);

/// An access: a method plus a total binding of its input attributes.
struct Access {
  std::string method;
  std::map<std::string, std::string> binding;  // input attribute -> token

  auto operator<=>(const Access&) const = default;
};

/// The set of tuples a source returned for one access.
struct Response {
  std::set<Fact> facts;

  auto operator<=>(const Response&) const = default;
};

struct PathStep {
  Access access;
  Response response;

  auto operator<=>(const PathStep&) const = default;
};

/// A sequence of accesses with their responses, replayed from an
/// initial configuration.
struct Path {
  Configuration initial;
  std::vector<PathStep> steps;

  auto operator<=>(const Path&) const = default;
};

/// Type-checks an access against the schema (method exists, binding total
/// on the input attributes, binding values typed by the attribute domains).
/// Throws ModelError on violation.
void check_access(const Access& access, const Schema& schema);

/// Well-formedness at a configuration: independent accesses always;
/// dependent accesses only when every binding value (with its attribute
/// domain) is in adom(conf).
bool is_well_formed(const Access& access, const Configuration& conf,
                    const Schema& schema);

/// Checks that a response fact agrees with the access binding on all
/// input attributes and is a well-typed tuple of the accessed relation.
void check_response(const Access& access, const Response& resp,
                    const Schema& schema);

/// conf + (access, response): adds the response facts to the accessed
/// relation, everything else unchanged. Throws on binding disagreement.
Configuration apply_response(const Configuration& conf, const Access& access,
                             const Response& resp, const Schema& schema);

struct PathDiagnostic {
  bool ok = true;
  std::size_t failing_step = 0;  // 0-based, valid when !ok
  std::string message;
};

/// True iff every step's access is well-formed at the configuration
/// accumulated so far and every response agrees with its binding.
PathDiagnostic validate_path(const Path& path, const Schema& schema);
bool path_is_valid(const Path& path, const Schema& schema);

/// Final configuration after replaying all steps. Throws if invalid.
Configuration replay_path(const Path& path, const Schema& schema);

/// Drops the first step, then keeps the maximal prefix of the remaining
/// steps whose accesses stay well-formed when replayed from the initial
/// configuration. Responses are preserved verbatim.
Path truncate_path(const Path& path, const Schema& schema);

}  // namespace alp
