#pragma once

// Brute-force baselines: literal definition unfolding over exhaustively
// enumerated accesses, responses and paths. Deliberately naive, shares
// no search code with the decision procedures.

#include <set>
#include <vector>

#include "alp/model.hpp"
#include "alp/query.hpp"
#include "alp/verdict.hpp"

namespace alp {

/// All configurations reachable from conf within the limits, deduplicated
/// up to renaming of fresh values. Non-initial responses are singletons.
std::set<Configuration> oracle_reachable(const Configuration& conf,
                                         const Schema& schema,
                                         const OracleLimits& limits);

/// Immediate relevance by enumerating every increasing response to the
/// access over the bounded value universe.
bool oracle_ir(const Query& q, const Access& access, const Configuration& conf,
               const Schema& schema, const OracleLimits& limits);

/// Long-term relevance by enumerating every path that starts with the
/// access and comparing query truth against the truncated path.
bool oracle_ltr(const Query& q, const Access& access,
                const Configuration& conf, const Schema& schema,
                const OracleLimits& limits);

/// Containment under access limitations: true iff no reachable
/// configuration satisfies q1 but not q2.
bool oracle_containment(const Query& q1, const Query& q2,
                        const Configuration& conf, const Schema& schema,
                        const OracleLimits& limits);

/// Certain answers by enumerating all extensions of conf by at most
/// `max_extension_facts` facts over the bounded universe.
bool oracle_certain(const Query& q, const Configuration& conf,
                    const Schema& schema, const OracleLimits& limits);

}  // namespace alp
