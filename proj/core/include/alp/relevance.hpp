#pragma once

// Exact decision procedures: immediate relevance, its first-order
// rewriting for full-input accesses, long-term relevance when every
// method is independent, and the single-occurrence fast path.

#include <optional>

#include "alp/model.hpp"
#include "alp/query.hpp"
#include "alp/verdict.hpp"

namespace alp {

/// Immediate relevance: some increasing response to the access turns q
/// from uncertain to certain. Exact. Yes-certificate: the response.
Verdict decide_ir(const Query& q, const Access& access,
                  const Configuration& conf, const Schema& schema);

/// The IR condition as a fixed first-order sentence: holds(conf) iff
/// not holds(guard, conf) and holds(delta, conf).
struct IrRewriting {
  Query guard;  // the original query, negated in the sentence
  Query delta;  // disjunction over nonempty unifiable-subgoal subsets
};

/// Builds the rewriting. Requires the access's method to have every
/// attribute as input (the binding fixes a full tuple).
IrRewriting ir_rewriting(const Query& q, const Access& access,
                         const Schema& schema);

bool eval_ir_rewriting(const IrRewriting& rw, const Configuration& conf,
                       const Schema& schema);

/// Long-term relevance when every method in the schema is independent.
/// Exact. Yes-certificate: a witness path whose truncation loses q.
Verdict decide_ltr_independent(const Query& q, const Access& access,
                               const Configuration& conf,
                               const Schema& schema);

/// Fast path for CQs whose accessed relation occurs exactly once:
/// unify the binding into the unique subgoal and reason per connected
/// component of the substituted query. Requires independent methods.
Verdict decide_ltr_single_occurrence(const Query& q, const Access& access,
                                     const Configuration& conf,
                                     const Schema& schema);

/// Unification of an access binding into one atom of the accessed
/// relation: input positions must match (constants equal the binding,
/// variables bound consistently).
std::optional<Homomorphism> unify_access(const Atom& atom,
                                         const Access& access,
                                         const Schema& schema);

}  // namespace alp
