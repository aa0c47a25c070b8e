#include "alp/relevance.hpp"

#include <algorithm>
#include <sstream>

#include "alp/fresh.hpp"

namespace alp {

std::optional<Homomorphism> unify_access(const Atom& atom,
                                         const Access& access,
                                         const Schema& schema) {
  const AccessMethod& m = schema.method(access.method);
  if (atom.relation != m.relation) return std::nullopt;
  const Relation& r = schema.relation(m.relation);
  Homomorphism bind;
  for (const auto& in : m.input_attributes) {
    std::size_t idx = *r.attribute_index(in);
    const std::string& value = access.binding.at(in);
    const Term& t = atom.terms[idx];
    if (!t.is_var()) {
      if (t.name != value) return std::nullopt;
    } else {
      auto [it, inserted] = bind.emplace(t.name, value);
      if (!inserted && it->second != value) return std::nullopt;
    }
  }
  return bind;
}

namespace {

bool merge_into(Homomorphism& target, const Homomorphism& extra) {
  for (const auto& [k, v] : extra) {
    auto [it, inserted] = target.emplace(k, v);
    if (!inserted && it->second != v) return false;
  }
  return true;
}

// Grounds an atom using h, minting canonical fresh tokens for variables
// h leaves unbound. Keyed per domain (the IR mapping's single fresh
// constant) or per variable (distinct witnesses for path certificates).
Fact ground_with_fresh(const Atom& atom, const Homomorphism& h,
                       const Schema& schema,
                       std::map<std::string, std::string>& fresh_cache,
                       std::set<std::string>& taken, bool per_variable) {
  const Relation& r = schema.relation(atom.relation);
  Fact f;
  f.relation = atom.relation;
  for (std::size_t i = 0; i < atom.terms.size(); ++i) {
    const Term& t = atom.terms[i];
    if (!t.is_var()) {
      f.values.push_back(t.name);
      continue;
    }
    auto it = h.find(t.name);
    if (it != h.end()) {
      f.values.push_back(it->second);
      continue;
    }
    const std::string& d = r.attributes[i].domain;
    std::string key = per_variable ? "v:" + t.name + ":" + d : "d:" + d;
    auto [fit, inserted] = fresh_cache.emplace(key, "");
    if (inserted) {
      fit->second = fresh_pool(d, 1, taken)[0];
      taken.insert(fit->second);
    }
    f.values.push_back(fit->second);
  }
  return f;
}

}  // namespace

Verdict decide_ir(const Query& q, const Access& access,
                  const Configuration& conf, const Schema& schema) {
  Verdict v;
  v.outcome = Outcome::No;
  v.stats.exhaustive = true;
  Stopwatch clock;
  if (!is_well_formed(access, conf, schema) || holds(q, conf, schema)) {
    v.stats.millis = clock.millis();
    return v;
  }
  std::set<std::string> taken = all_tokens(conf);
  for (const auto& [attr, value] : access.binding) taken.insert(value);

  for (const auto& disjunct : to_dnf(q)) {
    // Subgoals the access's binding can witness, with their unifiers.
    std::vector<std::pair<std::size_t, Homomorphism>> unifiable;
    for (std::size_t i = 0; i < disjunct.size(); ++i)
      if (auto u = unify_access(disjunct[i], access, schema))
        unifiable.push_back({i, *u});

    for (std::size_t mask = 1; mask < (1u << unifiable.size()); ++mask) {
      ++v.stats.nodes;
      Homomorphism sigma;
      std::set<std::size_t> witnessed;
      bool consistent = true;
      for (std::size_t j = 0; j < unifiable.size(); ++j) {
        if (!(mask & (1u << j))) continue;
        witnessed.insert(unifiable[j].first);
        if (!merge_into(sigma, unifiable[j].second)) {
          consistent = false;
          break;
        }
      }
      if (!consistent) continue;

      ConjunctiveQuery rest;
      for (std::size_t i = 0; i < disjunct.size(); ++i)
        if (!witnessed.count(i))
          rest.push_back(substitute(disjunct[i], sigma));
      auto h = find_hom(rest, conf, schema);
      if (!h) continue;

      Homomorphism full = sigma;
      merge_into(full, *h);
      Response resp;
      std::map<std::string, std::string> fresh_cache;
      std::set<std::string> avoid = taken;
      for (std::size_t i : witnessed)
        resp.facts.insert(ground_with_fresh(disjunct[i], full, schema,
                                            fresh_cache, avoid, false));
      v.outcome = Outcome::Yes;
      v.certificate = resp;
      v.stats.millis = clock.millis();
      return v;
    }
  }
  v.stats.millis = clock.millis();
  return v;
}

IrRewriting ir_rewriting(const Query& q, const Access& access,
                         const Schema& schema) {
  const AccessMethod& m = schema.method(access.method);
  if (m.input_attributes.size() != schema.relation(m.relation).arity())
    throw ModelError(
        "ir_rewriting requires a full-input access method; " + m.name +
        " has output attributes");

  std::vector<ConjunctiveQuery> delta;
  for (const auto& disjunct : to_dnf(q)) {
    std::vector<std::pair<std::size_t, Homomorphism>> unifiable;
    for (std::size_t i = 0; i < disjunct.size(); ++i)
      if (auto u = unify_access(disjunct[i], access, schema))
        unifiable.push_back({i, *u});
    for (std::size_t mask = 1; mask < (1u << unifiable.size()); ++mask) {
      Homomorphism sigma;
      std::set<std::size_t> witnessed;
      bool consistent = true;
      for (std::size_t j = 0; j < unifiable.size(); ++j) {
        if (!(mask & (1u << j))) continue;
        witnessed.insert(unifiable[j].first);
        if (!merge_into(sigma, unifiable[j].second)) {
          consistent = false;
          break;
        }
      }
      if (!consistent) continue;
      ConjunctiveQuery rest;
      for (std::size_t i = 0; i < disjunct.size(); ++i)
        if (!witnessed.count(i))
          rest.push_back(substitute(disjunct[i], sigma));
      if (std::find(delta.begin(), delta.end(), rest) == delta.end())
        delta.push_back(std::move(rest));
    }
  }
  return {q, dnf_to_query(delta)};
}

bool eval_ir_rewriting(const IrRewriting& rw, const Configuration& conf,
                       const Schema& schema) {
  return !holds(rw.guard, conf, schema) && holds(rw.delta, conf, schema);
}

namespace {

void require_all_independent(const Schema& schema) {
  for (const auto& m : schema.methods)
    if (m.mode == AccessMode::Dependent)
      throw ModelError("procedure requires independent access methods; " +
                       m.name + " is dependent");
}

// Values the access binding supplies, typed by the method's attributes.
std::set<TypedValue> binding_values(const Access& access,
                                    const Schema& schema) {
  const AccessMethod& m = schema.method(access.method);
  const Relation& r = schema.relation(m.relation);
  std::set<TypedValue> out;
  for (const auto& [attr, value] : access.binding)
    out.insert({value, r.attributes[*r.attribute_index(attr)].domain});
  return out;
}

// Does the fact's tuple agree with the binding on the method's input
// positions? (That is what a first-access response can deliver.)
bool fact_matches_access(const Fact& f, const Access& access,
                         const Schema& schema) {
  const AccessMethod& m = schema.method(access.method);
  if (f.relation != m.relation) return false;
  const Relation& r = schema.relation(m.relation);
  for (const auto& [attr, value] : access.binding)
    if (f.values[*r.attribute_index(attr)] != value) return false;
  return true;
}

// Builds the witness path: first the access delivering f1, then one
// independent singleton access per supporting fact.
std::optional<Path> build_independent_path(const Access& access,
                                           const std::set<Fact>& f1,
                                           const std::set<Fact>& f2,
                                           const Configuration& conf,
                                           const Schema& schema) {
  Path path;
  path.initial = conf;
  path.steps.push_back({access, Response{f1}});
  for (const auto& f : f2) {
    const AccessMethod* chosen = nullptr;
    for (const auto& m : schema.methods)
      if (m.relation == f.relation) {
        chosen = &m;
        break;
      }
    if (!chosen) return std::nullopt;
    const Relation& r = schema.relation(f.relation);
    Access step;
    step.method = chosen->name;
    for (const auto& in : chosen->input_attributes)
      step.binding[in] = f.values[*r.attribute_index(in)];
    path.steps.push_back({step, Response{{f}}});
  }
  return path;
}

struct GuessEnumerator {
  const Schema& schema;
  const Configuration& conf;
  const Query& q;
  const Access& access;
  std::uint64_t nodes = 0;

  std::vector<std::string> vars;
  std::map<std::string, std::string> var_domain;
  // Candidate tokens per domain: active domain plus binding values.
  std::map<std::string, std::vector<std::string>> base_candidates;
  std::map<std::string, std::vector<std::string>> pool;
  Homomorphism h;
  std::map<std::string, std::size_t> fresh_used;  // per domain
  const ConjunctiveQuery* disjunct = nullptr;

  std::optional<Verdict> found;

  void prepare(const ConjunctiveQuery& d) {
    disjunct = &d;
    vars = collect_variables(d);
    var_domain = variable_domains(d, schema);
    base_candidates.clear();
    std::set<TypedValue> values = adom(conf, schema);
    for (const auto& b : binding_values(access, schema)) values.insert(b);
    for (const auto& v : values)
      base_candidates[v.domain].push_back(v.token);
    std::set<std::string> taken = all_tokens(conf);
    for (const auto& [d2, toks] : base_candidates)
      taken.insert(toks.begin(), toks.end());
    pool.clear();
    for (const auto& dm : schema.domains)
      pool[dm] = fresh_pool(dm, vars.size(), taken);
    h.clear();
    fresh_used.clear();
  }

  bool try_assignment() {
    ++nodes;
    std::set<Fact> f1, f2;
    for (const auto& atom : *disjunct) {
      Fact f = ground_atom(atom, h);
      if (conf.contains(f)) continue;
      if (fact_matches_access(f, access, schema)) {
        f1.insert(f);
      } else {
        if (!schema.relation_has_method(f.relation)) return false;
        f2.insert(f);
      }
    }
    if (f1.empty()) return false;
    Configuration truncated = conf;
    for (const auto& f : f2) truncated.insert(f);
    if (holds(q, truncated, schema)) return false;

    auto path = build_independent_path(access, f1, f2, conf, schema);
    if (!path) return false;
    Verdict v;
    v.outcome = Outcome::Yes;
    v.certificate = *path;
    found = v;
    return true;
  }

  bool assign(std::size_t idx) {
    if (idx == vars.size()) return try_assignment();
    const std::string& var = vars[idx];
    const std::string& dom = var_domain.at(var);
    for (const auto& tok : base_candidates[dom]) {
      h[var] = tok;
      if (assign(idx + 1)) return true;
    }
    // Symmetry breaking: only the next unused fresh token is a new option.
    std::size_t used = fresh_used[dom];
    const auto& p = pool.at(dom);
    for (std::size_t i = 0; i <= used && i < p.size(); ++i) {
      h[var] = p[i];
      if (i == used) fresh_used[dom] = used + 1;
      if (assign(idx + 1)) return true;
      if (i == used) fresh_used[dom] = used;
    }
    h.erase(var);
    return false;
  }
};

}  // namespace

Verdict decide_ltr_independent(const Query& q, const Access& access,
                               const Configuration& conf,
                               const Schema& schema) {
  require_all_independent(schema);
  Stopwatch clock;
  GuessEnumerator en{schema, conf, q, access};
  for (const auto& disjunct : to_dnf(q)) {
    en.prepare(disjunct);
    if (en.assign(0)) {
      Verdict v = *en.found;
      v.stats.nodes = en.nodes;
      v.stats.millis = clock.millis();
      v.stats.exhaustive = true;
      return v;
    }
  }
  Verdict v;
  v.outcome = Outcome::No;
  v.stats.nodes = en.nodes;
  v.stats.millis = clock.millis();
  v.stats.exhaustive = true;
  return v;
}

namespace {

// Connected components of a conjunct under shared variables.
std::vector<std::vector<std::size_t>> components(const ConjunctiveQuery& cq) {
  std::vector<std::size_t> parent(cq.size());
  for (std::size_t i = 0; i < cq.size(); ++i) parent[i] = i;
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::map<std::string, std::size_t> owner;
  for (std::size_t i = 0; i < cq.size(); ++i)
    for (const auto& t : cq[i].terms) {
      if (!t.is_var()) continue;
      auto [it, inserted] = owner.emplace(t.name, i);
      if (!inserted) parent[find(i)] = find(it->second);
    }
  std::map<std::size_t, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < cq.size(); ++i) groups[find(i)].push_back(i);
  std::vector<std::vector<std::size_t>> out;
  for (auto& [root, members] : groups) out.push_back(std::move(members));
  return out;
}

}  // namespace

Verdict decide_ltr_single_occurrence(const Query& q, const Access& access,
                                     const Configuration& conf,
                                     const Schema& schema) {
  require_all_independent(schema);
  if (!q.is_cq()) throw ModelError("single-occurrence fast path needs a CQ");
  const AccessMethod& m = schema.method(access.method);
  ConjunctiveQuery cq = collect_atoms(q);
  std::size_t occurrences = 0, target = 0;
  for (std::size_t i = 0; i < cq.size(); ++i)
    if (cq[i].relation == m.relation) {
      ++occurrences;
      target = i;
    }
  if (occurrences != 1)
    throw ModelError("accessed relation must occur exactly once in the query");

  Stopwatch clock;
  Verdict no;
  no.outcome = Outcome::No;
  no.stats.exhaustive = true;

  if (holds(q, conf, schema)) {
    no.stats.millis = clock.millis();
    return no;
  }
  auto sigma = unify_access(cq[target], access, schema);
  if (!sigma) {
    no.stats.millis = clock.millis();
    return no;
  }
  ConjunctiveQuery grounded = substitute(cq, *sigma);

  std::set<Fact> f1, f2;
  std::map<std::string, std::string> fresh_cache;
  std::set<std::string> taken = all_tokens(conf);
  for (const auto& [attr, value] : access.binding) taken.insert(value);

  bool accessed_survives = false;
  for (const auto& comp : components(grounded)) {
    ConjunctiveQuery sub;
    for (std::size_t i : comp) sub.push_back(grounded[i]);
    if (find_hom(sub, conf, schema)) continue;  // already satisfied

    bool holds_target =
        std::find(comp.begin(), comp.end(), target) != comp.end();
    if (holds_target) accessed_survives = true;

    // The atoms only the configuration can supply must already join up.
    ConjunctiveQuery methodless;
    for (std::size_t i : comp)
      if (!schema.relation_has_method(grounded[i].relation))
        methodless.push_back(grounded[i]);
    auto anchor = find_hom(methodless, conf, schema);
    if (!anchor) {
      no.stats.millis = clock.millis();
      return no;
    }

    // Ground the component for the certificate path: anchor values where
    // forced, fresh values elsewhere.
    for (std::size_t i : comp) {
      if (!schema.relation_has_method(grounded[i].relation)) continue;
      Fact f = ground_with_fresh(grounded[i], *anchor, schema, fresh_cache,
                                 taken, true);
      if (conf.contains(f)) continue;
      if (holds_target && i == target)
        f1.insert(f);
      else
        f2.insert(f);
    }
  }
  if (!accessed_survives || f1.empty()) {
    no.stats.millis = clock.millis();
    return no;
  }

  auto path = build_independent_path(access, f1, f2, conf, schema);
  Verdict v;
  v.outcome = Outcome::Yes;
  if (path) v.certificate = *path;
  v.stats.millis = clock.millis();
  v.stats.exhaustive = true;
  return v;
}

}  // namespace alp
