#include "alp/witness.hpp"

#include <algorithm>
#include <deque>
#include <map>

#include "alp/fresh.hpp"

namespace alp {

namespace {

// Can some method deliver this fact at the current active domain?
const AccessMethod* producing_method(const Fact& f, const Schema& schema,
                                     const std::set<TypedValue>& available) {
  const Relation& r = schema.relation(f.relation);
  for (const auto& m : schema.methods) {
    if (m.relation != f.relation) continue;
    if (m.mode == AccessMode::Independent) return &m;
    bool ok = true;
    for (const auto& in : m.input_attributes) {
      std::size_t idx = *r.attribute_index(in);
      if (!available.count({f.values[idx], r.attributes[idx].domain})) {
        ok = false;
        break;
      }
    }
    if (ok) return &m;
  }
  return nullptr;
}

PathStep step_for(const Fact& f, const AccessMethod& m, const Schema& schema) {
  const Relation& r = schema.relation(f.relation);
  Access acc;
  acc.method = m.name;
  for (const auto& in : m.input_attributes)
    acc.binding[in] = f.values[*r.attribute_index(in)];
  return {acc, Response{{f}}};
}

struct ClosureResult {
  Path order;
  std::set<Fact> stuck;
  std::set<TypedValue> available;
};

ClosureResult closure_fixpoint(const Configuration& conf,
                               const std::set<Fact>& facts,
                               const Schema& schema) {
  ClosureResult res;
  res.order.initial = conf;
  Configuration cur = conf;
  res.stuck = facts;
  for (auto it = res.stuck.begin(); it != res.stuck.end();)
    it = cur.contains(*it) ? res.stuck.erase(it) : ++it;
  bool progress = true;
  while (progress && !res.stuck.empty()) {
    progress = false;
    std::set<TypedValue> available = adom(cur, schema);
    for (auto it = res.stuck.begin(); it != res.stuck.end();) {
      if (const AccessMethod* m = producing_method(*it, schema, available)) {
        res.order.steps.push_back(step_for(*it, *m, schema));
        cur.insert(*it);
        it = res.stuck.erase(it);
        progress = true;
        available = adom(cur, schema);
      } else {
        ++it;
      }
    }
  }
  res.available = adom(cur, schema);
  return res;
}

}  // namespace

std::optional<Path> producible_closure(const Configuration& conf,
                                       const std::set<Fact>& facts,
                                       const Schema& schema) {
  for (const auto& f : facts)
    if (!schema.relation_has_method(f.relation))
      throw ModelError("target fact on methodless relation " + f.relation);
  ClosureResult res = closure_fixpoint(conf, facts, schema);
  if (!res.stuck.empty()) return std::nullopt;
  return res.order;
}

namespace {

struct ContainmentSearch {
  const Query& q2;
  const Configuration& conf;
  const Schema& schema;
  const Budget& budget;
  std::map<std::string, std::vector<std::string>> pool;
  SearchStats stats;
  bool capped = false;
  std::optional<Path> witness;
  // Fact sets already completed without a witness, with the shallowest
  // depth tried: the same set reached by another supply order (or deeper)
  // cannot do better.
  std::map<std::set<Fact>, std::size_t> explored;

  bool pool_has(const TypedValue& v) const {
    auto it = pool.find(v.domain);
    return it != pool.end() &&
           std::find(it->second.begin(), it->second.end(), v.token) !=
               it->second.end();
  }

  // Tokens usable at a position: active domain of conf + added, then the
  // first unused token of the canonical fresh pool (unused pool tokens are
  // interchangeable, so offering more than one only duplicates work).
  std::vector<std::string> value_choices(const std::string& domain,
                                         const std::set<Fact>& added) const {
    std::vector<std::string> out;
    Configuration ext = conf;
    for (const auto& f : added) ext.insert(f);
    for (const auto& v : adom(ext, schema))
      if (v.domain == domain) out.push_back(v.token);
    auto it = pool.find(domain);
    if (it != pool.end())
      for (const auto& tok : it->second)
        if (std::find(out.begin(), out.end(), tok) == out.end()) {
          out.push_back(tok);
          break;
        }
    return out;
  }

  // Support completion: make every fact in `added` producible, branching
  // over ways to supply missing dependent-binding values.
  // just_added: the one fact inserted since the caller verified q2 false,
  // letting the monotone re-check pin an atom onto it.
  bool complete(std::set<Fact>& added, std::size_t depth,
                const Fact* just_added = nullptr) {
    ++stats.nodes;
    auto seen = explored.try_emplace(added, depth);
    if (!seen.second && seen.first->second <= depth) return false;
    seen.first->second = std::min(seen.first->second, depth);
    {
      Configuration ext = conf;
      for (const auto& f : added) ext.insert(f);
      bool q2_true = just_added ? holds_with(q2, ext, *just_added, schema)
                                : holds(q2, ext, schema);
      if (q2_true) return false;  // supersets stay q2-true
    }
    for (const auto& f : added)
      if (!schema.relation_has_method(f.relation)) return false;

    ClosureResult res = closure_fixpoint(conf, added, schema);
    if (res.stuck.empty()) {
      witness = res.order;
      return true;
    }
    if (depth >= budget.max_depth) {
      capped = true;
      return false;
    }
    const Fact& f = *res.stuck.begin();
    const Relation& r = schema.relation(f.relation);
    for (const auto& m : schema.methods) {
      if (m.relation != f.relation || m.mode == AccessMode::Independent)
        continue;
      // First input value this method still misses.
      std::optional<TypedValue> missing;
      for (const auto& in : m.input_attributes) {
        std::size_t idx = *r.attribute_index(in);
        TypedValue v{f.values[idx], r.attributes[idx].domain};
        if (!res.available.count(v)) {
          missing = v;
          break;
        }
      }
      if (!missing) continue;
      if (supply(*missing, added, depth)) return true;
    }
    return false;
  }

  // A produced fact can only introduce a new value at a position some
  // method leaves free: dependent-method inputs are already in the active
  // domain by well-formedness.
  bool position_can_emit(const Relation& rel, std::size_t pos) const {
    const std::string& attr = rel.attributes[pos].name;
    for (const auto& m : schema.methods) {
      if (m.relation != rel.name) continue;
      if (m.mode == AccessMode::Independent) return true;
      if (std::find(m.input_attributes.begin(), m.input_attributes.end(),
                    attr) == m.input_attributes.end())
        return true;
    }
    return false;
  }

  // Branch over every fact that could put `v` into the active domain.
  bool supply(const TypedValue& v, std::set<Fact>& added, std::size_t depth) {
    for (const auto& rel : schema.relations) {
      if (!schema.relation_has_method(rel.name)) continue;
      for (std::size_t pos = 0; pos < rel.arity(); ++pos) {
        if (rel.attributes[pos].domain != v.domain) continue;
        if (!position_can_emit(rel, pos)) continue;
        Fact g;
        g.relation = rel.name;
        g.values.assign(rel.arity(), "");
        g.values[pos] = v.token;
        if (fill(g, 0, pos, added, depth)) return true;
      }
    }
    return false;
  }

  bool fill(Fact& g, std::size_t i, std::size_t fixed, std::set<Fact>& added,
            std::size_t depth) {
    const Relation& r = schema.relation(g.relation);
    if (i == r.arity()) {
      if (conf.contains(g) || added.count(g)) return false;
      if (added.size() >= budget.max_facts) {
        capped = true;
        return false;
      }
      auto it = added.insert(g).first;
      if (complete(added, depth + 1, &*it)) return true;
      added.erase(it);
      return false;
    }
    if (i == fixed) return fill(g, i + 1, fixed, added, depth);
    for (const auto& tok : value_choices(r.attributes[i].domain, added)) {
      g.values[i] = tok;
      if (fill(g, i + 1, fixed, added, depth)) return true;
    }
    return false;
  }
};

// Homomorphism enumeration for one disjunct of q1 over the active domain
// plus a canonical fresh pool, with prefix symmetry breaking.
struct HomEnumerator {
  const ConjunctiveQuery& disjunct;
  const Schema& schema;
  const Configuration& conf;
  ContainmentSearch& search;

  std::vector<std::string> vars;
  std::map<std::string, std::string> var_domain;
  std::map<std::string, std::vector<std::string>> base;
  std::map<std::string, std::size_t> fresh_used;
  Homomorphism h;

  bool run() {
    vars = collect_variables(disjunct);
    var_domain = variable_domains(disjunct, schema);
    for (const auto& v : adom(conf, schema))
      base[v.domain].push_back(v.token);
    return assign(0);
  }

  bool leaf() {
    std::set<Fact> added;
    for (const auto& a : disjunct) {
      Fact f = ground_atom(a, h);
      if (!conf.contains(f)) added.insert(f);
    }
    if (added.size() > search.budget.max_facts) {
      search.capped = true;
      return false;
    }
    return search.complete(added, 0);
  }

  bool assign(std::size_t idx) {
    if (idx == vars.size()) return leaf();
    const std::string& var = vars[idx];
    const std::string& dom = var_domain.at(var);
    for (const auto& tok : base[dom]) {
      h[var] = tok;
      if (assign(idx + 1)) return true;
    }
    std::size_t used = fresh_used[dom];
    auto it = search.pool.find(dom);
    if (it != search.pool.end()) {
      for (std::size_t i = 0; i <= used && i < it->second.size(); ++i) {
        h[var] = it->second[i];
        if (i == used) fresh_used[dom] = used + 1;
        if (assign(idx + 1)) return true;
        if (i == used) fresh_used[dom] = used;
      }
    }
    h.erase(var);
    return false;
  }
};

}  // namespace

Verdict decide_containment_bounded(const Query& q1, const Query& q2,
                                   const Configuration& conf,
                                   const Schema& schema,
                                   const Budget& budget) {
  Stopwatch clock;
  ContainmentSearch search{q2, conf, schema, budget};
  std::set<std::string> taken = all_tokens(conf);
  for (const auto& d : schema.domains)
    search.pool[d] = fresh_pool(d, budget.max_fresh, taken);

  for (const auto& disjunct : to_dnf(q1)) {
    HomEnumerator en{disjunct, schema, conf, search};
    if (en.run()) {
      Verdict v;
      v.outcome = Outcome::No;
      v.certificate = *search.witness;
      v.stats = search.stats;
      v.stats.millis = clock.millis();
      return v;
    }
  }
  Verdict v;
  v.stats = search.stats;
  v.stats.exhaustive = !search.capped;
  v.outcome =
      v.stats.exhaustive ? Outcome::Yes : Outcome::UnknownWithinBudget;
  v.stats.millis = clock.millis();
  return v;
}

namespace {

struct LtrState {
  Configuration cur;
  Configuration trunc;
  bool alive = true;  // truncation replay has not yet hit an ill-formed step
  Path path;
  std::size_t extension_steps = 0;
};

struct LtrSearchContext {
  const Query& q;
  const Configuration& conf;
  const Schema& schema;
  const Budget& budget;
  bool chain_heuristic;
  std::size_t heuristic_step_cap = 0;
  std::size_t heuristic_fresh_cap = 0;
  std::map<std::string, std::vector<std::string>> pool;
  SearchStats stats;
  bool capped = false;

  bool is_pool_token(const std::string& domain,
                     const std::string& tok) const {
    auto it = pool.find(domain);
    return it != pool.end() &&
           std::find(it->second.begin(), it->second.end(), tok) !=
               it->second.end();
  }

  std::vector<std::string> value_choices(const Configuration& cur,
                                         const std::string& domain,
                                         bool allow_fresh) const {
    std::vector<std::string> out;
    for (const auto& v : adom(cur, schema))
      if (v.domain == domain) out.push_back(v.token);
    if (allow_fresh) {
      auto it = pool.find(domain);
      if (it != pool.end())
        for (const auto& tok : it->second)
          if (std::find(out.begin(), out.end(), tok) == out.end())
            out.push_back(tok);
    }
    return out;
  }

  std::size_t fresh_in_use(const Configuration& cur) const {
    std::size_t n = 0;
    std::set<std::string> seen;
    for (const auto& f : cur.facts) {
      const Relation& r = schema.relation(f.relation);
      for (std::size_t i = 0; i < f.values.size(); ++i)
        if (is_pool_token(r.attributes[i].domain, f.values[i]) &&
            seen.insert(f.values[i]).second)
          ++n;
    }
    return n;
  }

  // All facts the method can return for the binding, values drawn from
  // the current active domain plus the fresh pool.
  std::vector<Fact> response_facts(const Configuration& cur,
                                   const Access& acc) const {
    const AccessMethod& m = schema.method(acc.method);
    const Relation& r = schema.relation(m.relation);
    std::vector<std::vector<std::string>> choices(r.arity());
    for (std::size_t i = 0; i < r.arity(); ++i) {
      auto it = acc.binding.find(r.attributes[i].name);
      if (it != acc.binding.end())
        choices[i] = {it->second};
      else
        choices[i] = value_choices(cur, r.attributes[i].domain, true);
    }
    std::vector<Fact> out;
    std::vector<std::string> row(r.arity());
    auto rec = [&](auto&& self, std::size_t i) -> void {
      if (i == r.arity()) {
        out.push_back({m.relation, row});
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

  std::vector<Access> candidate_accesses(const Configuration& cur) const {
    std::vector<Access> out;
    for (const auto& m : schema.methods) {
      const Relation& r = schema.relation(m.relation);
      std::vector<std::vector<std::string>> choices;
      for (const auto& in : m.input_attributes)
        choices.push_back(
            value_choices(cur, r.attributes[*r.attribute_index(in)].domain,
                          m.mode == AccessMode::Independent));
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
    }
    return out;
  }

  // Canonical key: fresh pool tokens renamed in first-appearance order
  // over the final configuration; applied to both configurations.
  std::string state_key(const LtrState& s) const {
    std::map<std::string, std::string> rename;
    std::map<std::string, std::size_t> next;
    for (const auto& f : s.cur.facts) {
      const Relation& r = schema.relation(f.relation);
      for (std::size_t i = 0; i < f.values.size(); ++i) {
        const std::string& d = r.attributes[i].domain;
        if (!is_pool_token(d, f.values[i]) || rename.count(f.values[i]))
          continue;
        rename[f.values[i]] = pool.at(d)[next[d]++];
      }
    }
    auto dump = [&](const Configuration& c) {
      std::string out;
      for (const auto& f : c.facts) {
        out += f.relation;
        for (const auto& v : f.values) {
          auto it = rename.find(v);
          out += "," + (it != rename.end() ? it->second : v);
        }
        out += ";";
      }
      return out;
    };
    return dump(s.cur) + "|" + dump(s.trunc) + "|" +
           (s.alive ? "a" : "d");
  }
};

}  // namespace

Verdict decide_ltr_dependent_bounded(const Query& q, const Access& access,
                                     const Configuration& conf,
                                     const Schema& schema,
                                     const Budget& budget,
                                     bool chain_heuristic) {
  Stopwatch clock;
  Verdict out;
  if (!is_well_formed(access, conf, schema)) {
    out.outcome = Outcome::No;
    out.stats.exhaustive = true;
    out.stats.millis = clock.millis();
    return out;
  }
  LtrSearchContext ctx{q, conf, schema, budget, chain_heuristic};
  std::set<std::string> taken = all_tokens(conf);
  for (const auto& [attr, value] : access.binding) taken.insert(value);
  for (const auto& d : schema.domains)
    ctx.pool[d] = fresh_pool(d, budget.max_fresh, taken);
  if (chain_heuristic) {
    std::size_t vars = collect_variables(q).size();
    std::size_t atoms = collect_atoms(q).size();
    ctx.heuristic_step_cap = vars + atoms;
    ctx.heuristic_fresh_cap = vars;
  }

  auto ltr_holds = [&](const LtrState& s) {
    return holds(q, s.cur, schema) != holds(q, s.trunc, schema);
  };

  std::deque<LtrState> frontier;
  std::set<std::string> visited;

  // Seed states: one per nonempty first response within the budget.
  {
    std::vector<Fact> candidates;
    for (const auto& f : ctx.response_facts(conf, access))
      if (!conf.contains(f)) candidates.push_back(f);
    std::vector<std::size_t> pick;
    auto seed = [&](auto&& self, std::size_t start) -> void {
      if (!pick.empty()) {
        Response resp;
        for (std::size_t i : pick) resp.facts.insert(candidates[i]);
        LtrState s;
        s.cur = apply_response(conf, access, resp, schema);
        s.trunc = conf;
        s.path.initial = conf;
        s.path.steps.push_back({access, resp});
        if (visited.insert(ctx.state_key(s)).second)
          frontier.push_back(std::move(s));
      }
      if (pick.size() >= budget.max_first_response) return;
      for (std::size_t i = start; i < candidates.size(); ++i) {
        pick.push_back(i);
        self(self, i + 1);
        pick.pop_back();
      }
    };
    seed(seed, 0);
  }

  while (!frontier.empty()) {
    if (budget.timeout_ms > 0 && clock.millis() > budget.timeout_ms) {
      ctx.capped = true;
      break;
    }
    LtrState s = std::move(frontier.front());
    frontier.pop_front();
    ++ctx.stats.nodes;
    if (ltr_holds(s)) {
      out.outcome = Outcome::Yes;
      out.certificate = s.path;
      out.stats = ctx.stats;
      out.stats.millis = clock.millis();
      return out;
    }
    if (s.extension_steps >= budget.max_facts) {
      ctx.capped = true;
      continue;
    }
    if (chain_heuristic && s.extension_steps >= ctx.heuristic_step_cap) {
      ctx.capped = true;
      continue;
    }
    for (const auto& acc : ctx.candidate_accesses(s.cur)) {
      if (!is_well_formed(acc, s.cur, schema)) continue;
      for (const auto& f : ctx.response_facts(s.cur, acc)) {
        if (s.cur.contains(f)) continue;
        LtrState next = s;
        next.cur.insert(f);
        if (chain_heuristic &&
            ctx.fresh_in_use(next.cur) > ctx.heuristic_fresh_cap) {
          ctx.capped = true;
          continue;
        }
        next.path.steps.push_back({acc, Response{{f}}});
        ++next.extension_steps;
        if (next.alive && is_well_formed(acc, s.trunc, schema)) {
          next.trunc.insert(f);
        } else {
          next.alive = false;
          next.trunc = s.trunc;
        }
        if (visited.insert(ctx.state_key(next)).second)
          frontier.push_back(std::move(next));
      }
    }
  }

  out.stats = ctx.stats;
  out.stats.exhaustive = !ctx.capped;
  out.outcome =
      out.stats.exhaustive ? Outcome::No : Outcome::UnknownWithinBudget;
  out.stats.millis = clock.millis();
  return out;
}

}  // namespace alp
