#include "alp/oracle.hpp"

#include <algorithm>
#include <deque>
#include <map>

#include "alp/fresh.hpp"

namespace alp {

namespace {

struct Universe {
  // Per domain: canonical fresh tokens available to the enumeration.
  std::map<std::string, std::vector<std::string>> pool;

  bool is_fresh(const std::string& token) const {
    for (const auto& [d, toks] : pool)
      if (std::find(toks.begin(), toks.end(), token) != toks.end())
        return true;
    return false;
  }
};

Universe make_universe(const Configuration& conf, const Schema& schema,
                       std::size_t per_domain,
                       const std::set<std::string>& extra_taken = {}) {
  std::set<std::string> taken = all_tokens(conf);
  taken.insert(extra_taken.begin(), extra_taken.end());
  Universe u;
  for (const auto& d : schema.domains)
    u.pool[d] = fresh_pool(d, per_domain, taken);
  return u;
}

std::vector<std::string> domain_tokens(const Configuration& conf,
                                       const Schema& schema,
                                       const Universe& u,
                                       const std::string& domain) {
  std::vector<std::string> out;
  for (const auto& v : adom(conf, schema))
    if (v.domain == domain) out.push_back(v.token);
  auto it = u.pool.find(domain);
  if (it != u.pool.end())
    out.insert(out.end(), it->second.begin(), it->second.end());
  return out;
}

// Every tuple of the relation over the bounded universe that agrees with
// the binding on the access's input positions.
std::vector<Fact> candidate_facts(const std::string& rel,
                                  const std::map<std::string, std::string>& bind,
                                  const Configuration& conf,
                                  const Schema& schema, const Universe& u) {
  const Relation& r = schema.relation(rel);
  std::vector<std::vector<std::string>> choices(r.arity());
  for (std::size_t i = 0; i < r.arity(); ++i) {
    auto it = bind.find(r.attributes[i].name);
    if (it != bind.end())
      choices[i] = {it->second};
    else
      choices[i] = domain_tokens(conf, schema, u, r.attributes[i].domain);
  }
  std::vector<Fact> out;
  std::vector<std::string> row(r.arity());
  auto rec = [&](auto&& self, std::size_t i) -> void {
    if (i == r.arity()) {
      out.push_back({rel, row});
      return;
    }
    for (const auto& v : choices[i]) {
      row[i] = v;
      self(self, i + 1);
    }
  };
  rec(rec, 0);
  return out;
}

// Every binding for the method over the bounded universe (dependent
// methods draw only from the current active domain).
std::vector<Access> candidate_accesses(const AccessMethod& m,
                                       const Configuration& conf,
                                       const Schema& schema,
                                       const Universe& u) {
  const Relation& r = schema.relation(m.relation);
  std::vector<std::vector<std::string>> choices;
  for (const auto& in : m.input_attributes) {
    const std::string& domain = r.attributes[*r.attribute_index(in)].domain;
    if (m.mode == AccessMode::Dependent) {
      std::vector<std::string> vals;
      for (const auto& v : adom(conf, schema))
        if (v.domain == domain) vals.push_back(v.token);
      choices.push_back(std::move(vals));
    } else {
      choices.push_back(domain_tokens(conf, schema, u, domain));
    }
  }
  std::vector<Access> out;
  Access acc;
  acc.method = m.name;
  auto rec = [&](auto&& self, std::size_t i) -> void {
    if (i == m.input_attributes.size()) {
      out.push_back(acc);
      return;
    }
    for (const auto& v : choices[i]) {
      acc.binding[m.input_attributes[i]] = v;
      self(self, i + 1);
    }
  };
  rec(rec, 0);
  return out;
}

// Renames the fresh tokens of a configuration in first-appearance order
// over the sorted fact list, so isomorphic configurations compare equal.
Configuration canonicalize(const Configuration& conf, const Schema& schema,
                           const Universe& u) {
  std::map<std::string, std::string> rename;
  std::map<std::string, std::size_t> next;  // per domain
  for (const auto& f : conf.facts) {
    const Relation& r = schema.relation(f.relation);
    for (std::size_t i = 0; i < f.values.size(); ++i) {
      const std::string& tok = f.values[i];
      if (!u.is_fresh(tok) || rename.count(tok)) continue;
      const std::string& d = r.attributes[i].domain;
      rename[tok] = u.pool.at(d)[next[d]++];
    }
  }
  Configuration out;
  out.admitted = conf.admitted;
  for (const auto& f : conf.facts) {
    Fact g = f;
    for (auto& v : g.values) {
      auto it = rename.find(v);
      if (it != rename.end()) v = it->second;
    }
    out.insert(g);
  }
  return out;
}

}  // namespace

std::set<Configuration> oracle_reachable(const Configuration& conf,
                                         const Schema& schema,
                                         const OracleLimits& limits) {
  Universe u = make_universe(conf, schema, limits.max_fresh);
  std::set<Configuration> seen = {canonicalize(conf, schema, u)};
  std::deque<std::pair<Configuration, std::size_t>> frontier;
  frontier.push_back({*seen.begin(), 0});
  std::uint64_t explored = 0;
  while (!frontier.empty()) {
    auto [cur, depth] = frontier.front();
    frontier.pop_front();
    if (depth >= limits.max_path_length) continue;
    for (const auto& m : schema.methods) {
      for (const auto& acc : candidate_accesses(m, cur, schema, u)) {
        if (!is_well_formed(acc, cur, schema)) continue;
        for (const auto& f :
             candidate_facts(m.relation, acc.binding, cur, schema, u)) {
          if (++explored > limits.hard_cap)
            throw OracleCapExceeded("oracle_reachable blew its cap");
          if (cur.contains(f)) continue;
          Configuration next = cur;
          next.insert(f);
          Configuration canon = canonicalize(next, schema, u);
          if (seen.insert(canon).second)
            frontier.push_back({canon, depth + 1});
        }
      }
    }
  }
  return seen;
}

bool oracle_ir(const Query& q, const Access& access, const Configuration& conf,
               const Schema& schema, const OracleLimits& limits) {
  if (holds(q, conf, schema)) return false;
  const AccessMethod& m = schema.method(access.method);
  if (!is_well_formed(access, conf, schema)) return false;
  Universe u = make_universe(conf, schema, limits.max_fresh);
  std::vector<Fact> candidates;
  for (const auto& f :
       candidate_facts(m.relation, access.binding, conf, schema, u))
    if (!conf.contains(f)) candidates.push_back(f);
  // All nonempty subsets up to the response limit.
  std::size_t cap = std::min(limits.max_response, candidates.size());
  std::vector<std::size_t> pick;
  std::uint64_t explored = 0;
  auto rec = [&](auto&& self, std::size_t start) -> bool {
    if (!pick.empty()) {
      if (++explored > limits.hard_cap)
        throw OracleCapExceeded("oracle_ir blew its cap");
      Configuration ext = conf;
      for (std::size_t i : pick) ext.insert(candidates[i]);
      if (holds(q, ext, schema)) return true;
    }
    if (pick.size() == cap) return false;
    for (std::size_t i = start; i < candidates.size(); ++i) {
      pick.push_back(i);
      if (self(self, i + 1)) return true;
      pick.pop_back();
    }
    return false;
  };
  return rec(rec, 0);
}

namespace {

struct LtrSearch {
  const Query& q;
  const Schema& schema;
  const OracleLimits& limits;
  const Universe& u;
  std::uint64_t explored = 0;
  std::map<std::set<Fact>, bool> holds_cache;

  bool cached_holds(const Configuration& conf) {
    auto it = holds_cache.find(conf.facts);
    if (it != holds_cache.end()) return it->second;
    bool h = holds(q, conf, schema);
    holds_cache.emplace(conf.facts, h);
    return h;
  }

  // Extends the path one singleton step at a time, checking the LTR
  // condition at every prefix. The truncated replay (drop the first
  // step, keep the maximal well-formed prefix) is maintained
  // incrementally: trunc is its configuration, trunc_alive says the
  // prefix survived up to the current end of the path.
  bool extend(Path& path, const Configuration& cur, const Configuration& trunc,
              bool trunc_alive, std::size_t depth) {
    if (cached_holds(cur) != cached_holds(trunc)) return true;
    if (depth >= limits.max_path_length) return false;
    for (const auto& m : schema.methods) {
      for (const auto& acc : candidate_accesses(m, cur, schema, u)) {
        if (!is_well_formed(acc, cur, schema)) continue;
        for (const auto& f :
             candidate_facts(m.relation, acc.binding, cur, schema, u)) {
          if (cur.contains(f)) continue;
          if (++explored > limits.hard_cap)
            throw OracleCapExceeded("oracle_ltr blew its cap");
          Configuration next = cur;
          next.insert(f);
          bool next_alive =
              trunc_alive && is_well_formed(acc, trunc, schema);
          Configuration next_trunc = trunc;
          if (next_alive) next_trunc.insert(f);
          path.steps.push_back({acc, Response{{f}}});
          if (extend(path, next, next_trunc, next_alive, depth + 1))
            return true;
          path.steps.pop_back();
        }
      }
    }
    return false;
  }
};

}  // namespace

bool oracle_ltr(const Query& q, const Access& access,
                const Configuration& conf, const Schema& schema,
                const OracleLimits& limits) {
  if (!is_well_formed(access, conf, schema)) return false;
  const AccessMethod& m = schema.method(access.method);
  Universe u = make_universe(conf, schema, limits.max_fresh);
  std::vector<Fact> first_candidates;
  for (const auto& f :
       candidate_facts(m.relation, access.binding, conf, schema, u))
    first_candidates.push_back(f);

  // First response: any subset (including empty) up to the response limit.
  std::size_t cap = std::min(limits.max_response, first_candidates.size());
  std::vector<std::size_t> pick;
  LtrSearch search{q, schema, limits, u};
  auto rec = [&](auto&& self, std::size_t start) -> bool {
    Response resp;
    for (std::size_t i : pick) resp.facts.insert(first_candidates[i]);
    Path path{conf, {{access, resp}}};
    Configuration after = apply_response(conf, access, resp, schema);
    if (search.extend(path, after, conf, true, 1)) return true;
    if (pick.size() == cap) return false;
    for (std::size_t i = start; i < first_candidates.size(); ++i) {
      pick.push_back(i);
      if (self(self, i + 1)) return true;
      pick.pop_back();
    }
    return false;
  };
  return rec(rec, 0);
}

bool oracle_containment(const Query& q1, const Query& q2,
                        const Configuration& conf, const Schema& schema,
                        const OracleLimits& limits) {
  for (const auto& reached : oracle_reachable(conf, schema, limits))
    if (holds(q1, reached, schema) && !holds(q2, reached, schema))
      return false;
  return true;
}

bool oracle_certain(const Query& q, const Configuration& conf,
                    const Schema& schema, const OracleLimits& limits) {
  Universe u = make_universe(conf, schema, limits.max_fresh);
  std::vector<Fact> candidates;
  for (const auto& r : schema.relations)
    for (const auto& f : candidate_facts(r.name, {}, conf, schema, u))
      if (!conf.contains(f)) candidates.push_back(f);

  std::size_t cap = std::min(limits.max_extension_facts, candidates.size());
  std::vector<std::size_t> pick;
  std::uint64_t explored = 0;
  // True iff q holds in conf and every bounded extension of conf.
  auto rec = [&](auto&& self, std::size_t start) -> bool {
    if (++explored > limits.hard_cap)
      throw OracleCapExceeded("oracle_certain blew its cap");
    Configuration ext = conf;
    for (std::size_t i : pick) ext.insert(candidates[i]);
    if (!holds(q, ext, schema)) return false;
    if (pick.size() == cap) return true;
    for (std::size_t i = start; i < candidates.size(); ++i) {
      pick.push_back(i);
      if (!self(self, i + 1)) return false;
      pick.pop_back();
    }
    return true;
  };
  return rec(rec, 0);
}

}  // namespace alp
