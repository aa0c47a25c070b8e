#pragma once

// Canonical fresh-value naming: f<domain><index>, bumped past any token
// already present in the instance so fresh values never collide.

#include <set>
#include <string>
#include <vector>

#include "alp/model.hpp"

namespace alp {

/// `count` canonical fresh tokens for `domain`, avoiding `taken` tokens.
/// Deterministic: fDom0, fDom1, ... with a tick suffix on collision.
std::vector<std::string> fresh_pool(const std::string& domain,
                                    std::size_t count,
                                    const std::set<std::string>& taken);

/// All tokens appearing anywhere in the configuration or admitted set.
std::set<std::string> all_tokens(const Configuration& conf);

}  // namespace alp
