#pragma once

// Instance transformers connecting the decision problems to each other:
// arity elimination for relevance, containment <-> long-term relevance
// in both query languages, and the constants-only (CM) containment view.

#include <functional>
#include <vector>

#include "alp/instance.hpp"
#include "alp/verdict.hpp"

namespace alp {

enum class QueryLanguage { Pq, Cq };

/// Replaces a k-ary query by the family of Boolean queries obtained by
/// substituting every tuple over adom(conf) extended with one fresh
/// constant per head position. Chosen fresh constants are admitted in
/// the output. k = 0 returns the input unchanged as a singleton.
std::vector<ProblemInstance> boolean_arity_reduction(
    const ProblemInstance& inst, const std::string& query_name);

/// Turns the disjunctive query shape (exists x A(x)) or Q2, conjoined
/// with Q1, into a single conjunctive query: adds a Boolean domain with
/// Or/P helper relations, pads every relation except A with a validity
/// place, pads existing facts with 1, adds one all-zero decoy fact per
/// padded relation, and rewrites to
///   exists b1 b2 b . A(b1) and Q2''(b2) and Or(b1,b2) and Q1''(b) and P(b)
/// with the access A(1)?. Expects q2's body to be a two-way disjunction
/// with one side a single atom over a unary Boolean-accessible relation.
ProblemInstance encode_disjunction_as_cq(const ProblemInstance& inst,
                                         const std::string& q1_name,
                                         const std::string& q2_name);

/// Containment to long-term relevance: adds a fresh unary relation A
/// over its own fresh domain with an independent Boolean method, builds
/// Q = ((exists x A(x)) or q2) and q1 with distinguished access A(c)?
/// for a fresh un-admitted constant c. Cq mode feeds the same shape
/// through encode_disjunction_as_cq. Guarantee: q1 contained in q2 at
/// conf iff the access is NOT long-term relevant for Q.
ProblemInstance containment_to_ltr(const ProblemInstance& inst,
                                   const std::string& q1_name,
                                   const std::string& q2_name,
                                   QueryLanguage lang);

/// Long-term relevance to containment: adds an access-free relation
/// IsBind holding exactly the access's binding tuple and rewrites every
/// atom R(i,o) of the accessed relation into R(i,o) or IsBind(i).
/// Output queries: query_name + "_prime" and the original. Guarantee:
/// the access is LTR for q at conf iff q' is not contained in q at the
/// extended configuration.
ProblemInstance ltr_to_containment(const ProblemInstance& inst,
                                   const std::string& query_name);

using ContainmentDecider =
    std::function<Verdict(const Query& q1, const Query& q2,
                          const Configuration& conf, const Schema& schema,
                          const Budget& budget)>;

/// Long-term relevance of a CQ through a containment decider: split the
/// atoms into the access-compatible part Q1 and the rest Q2; the access
/// is LTR iff for some proper subset Q1' of Q1 the query Q1' and Q2 is
/// not contained in q. Subsets are tried in ascending cardinality.
/// Unknown decider calls make the overall result unknown unless some
/// call certifies non-containment.
Verdict ltr_via_containment_cq(const Query& q, const Access& access,
                               const Configuration& conf, const Schema& schema,
                               const ContainmentDecider& decider,
                               const Budget& budget);

/// An access-free relation whose content is only partially known:
/// `required` tuples are certainly present, any subset of `candidates`
/// may additionally be.
struct OpenRelation {
  std::string relation;
  std::vector<Fact> candidates;  // includes the required tuples
  std::set<Fact> required;

  auto operator<=>(const OpenRelation&) const = default;
};

/// Constants-only statement of a containment problem: no configuration,
/// just admitted constants, with the known part of the access-free
/// relations folded into the queries and tracked as open content.
struct CmInstance {
  Schema schema;
  std::set<TypedValue> constants;
  std::vector<NamedQuery> queries;
  std::vector<OpenRelation> open;
  std::set<Fact> fixed;  // projection facts present in every expansion

  auto operator<=>(const CmInstance&) const = default;
};

/// CM to configuration form: the constants become admitted constants of
/// an otherwise empty configuration. Requires exactly one method per
/// relation and no open content.
ProblemInstance cm_to_config(const CmInstance& cm);

/// Configuration form to CM: admits adom(conf) as constants, conjoins
/// the configuration's facts onto q1, and replaces each non-monadic
/// access-free relation (arity at most K) by monadic projections whose
/// value products bound the candidate tuples; candidate tuples not in
/// the configuration are disjoined onto q2 as known-false. Queries must
/// be positive; at most one method per relation.
CmInstance config_to_cm(const ProblemInstance& inst,
                        const std::string& q1_name, const std::string& q2_name,
                        std::size_t k);

/// Containment over a CM instance: every completion of the open content
/// (required plus any candidate subset) is checked with the bounded
/// decider from a configuration holding only the constants, the fixed
/// facts and the chosen content. Yes iff all completions are contained.
Verdict decide_cm_containment(const CmInstance& cm, const std::string& q1_name,
                              const std::string& q2_name,
                              const Budget& budget);

}  // namespace alp
