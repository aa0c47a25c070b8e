#pragma once

// Budget-bounded searches for the dependent case: counterexamples to
// containment under access limitations and long-term relevance
// witnesses, built around producibility of target fact sets.

#include <optional>

#include "alp/model.hpp"
#include "alp/query.hpp"
#include "alp/verdict.hpp"

namespace alp {

/// An order of singleton accesses producing exactly the target facts,
/// each well-formed at the configuration accumulated so far. Greedy
/// fixpoint (availability only grows). nullopt when no order exists.
/// Throws when a target fact's relation has no access method.
std::optional<Path> producible_closure(const Configuration& conf,
                                       const std::set<Fact>& facts,
                                       const Schema& schema);

/// Containment under access limitations, by searching for a reachable
/// configuration satisfying q1 but not q2. Outcome no carries a Path
/// certificate. Outcome yes only when the enumeration provably covered
/// the whole canonical space at these budgets; otherwise unknown.
Verdict decide_containment_bounded(const Query& q1, const Query& q2,
                                   const Configuration& conf,
                                   const Schema& schema, const Budget& budget);

/// Long-term relevance of an access with general (possibly dependent)
/// methods, by bounded path search. Yes-certificate: a path starting
/// with the access whose truncation changes the query's truth.
Verdict decide_ltr_dependent_bounded(const Query& q, const Access& access,
                                     const Configuration& conf,
                                     const Schema& schema,
                                     const Budget& budget,
                                     bool chain_heuristic = false);

}  // namespace alp
