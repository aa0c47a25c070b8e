#include "alp/reductions.hpp"

#include <algorithm>
#include <bit>

#include "alp/fresh.hpp"
#include "alp/relevance.hpp"
#include "alp/witness.hpp"

namespace alp {

namespace {

std::set<std::string> taken_tokens(const ProblemInstance& inst) {
  std::set<std::string> taken = all_tokens(inst.conf);
  for (const auto& nq : inst.queries)
    for (const auto& a : collect_atoms(nq.body))
      for (const auto& t : a.terms)
        if (!t.is_var()) taken.insert(t.name);
  return taken;
}

std::string fresh_name(const std::string& base,
                       const std::set<std::string>& taken) {
  if (!taken.count(base)) return base;
  for (std::size_t i = 0;; ++i) {
    std::string candidate = base + std::to_string(i);
    if (!taken.count(candidate)) return candidate;
  }
}

std::set<std::string> schema_names(const Schema& schema) {
  std::set<std::string> names(schema.domains.begin(), schema.domains.end());
  for (const auto& r : schema.relations) names.insert(r.name);
  for (const auto& m : schema.methods) names.insert(m.name);
  return names;
}

Query substitute_query(const Query& q, const Homomorphism& h) {
  if (q.kind == Query::AtomNode) return Query::make_atom(substitute(q.atom, h));
  Query out = q;
  for (auto& c : out.children) c = substitute_query(c, h);
  return out;
}

Query rename_query_vars(const Query& q,
                        const std::map<std::string, std::string>& ren) {
  if (q.kind == Query::AtomNode) {
    Atom a = q.atom;
    for (auto& t : a.terms)
      if (t.is_var()) {
        auto it = ren.find(t.name);
        if (it != ren.end()) t = Term::var(it->second);
      }
    return Query::make_atom(a);
  }
  Query out = q;
  for (auto& c : out.children) c = rename_query_vars(c, ren);
  return out;
}

/// Renames q's variables away from `avoid`, extending `avoid` with the
/// final variable set.
Query rename_apart(const Query& q, std::set<std::string>& avoid) {
  std::map<std::string, std::string> ren;
  for (const auto& v : collect_variables(q)) {
    std::string name = v;
    while (avoid.count(name)) name += "_";
    ren[v] = name;
    avoid.insert(name);
  }
  return rename_query_vars(q, ren);
}

struct ARelation {
  std::string relation;
  std::string method;
  std::string attribute;
  std::string domain;
};

/// Adds the fresh unary relation A over its own fresh domain, with an
/// independent Boolean method.
ARelation add_a_relation(ProblemInstance& inst) {
  std::set<std::string> names = schema_names(inst.schema);
  ARelation a;
  a.relation = fresh_name("A", names);
  names.insert(a.relation);
  a.method = fresh_name("mA", names);
  names.insert(a.method);
  a.domain = fresh_name("DA", names);
  a.attribute = "x";
  inst.schema.domains.push_back(a.domain);
  inst.schema.relations.push_back({a.relation, {{a.attribute, a.domain}}});
  inst.schema.methods.push_back(
      {a.method, a.relation, {a.attribute}, AccessMode::Independent});
  return a;
}

const NamedQuery& boolean_query(const ProblemInstance& inst,
                                const std::string& name) {
  const NamedQuery& q = inst.query(name);
  if (!q.head.empty())
    throw ModelError("query " + name + " must be Boolean here");
  return q;
}

}  // namespace

std::vector<ProblemInstance> boolean_arity_reduction(
    const ProblemInstance& inst, const std::string& query_name) {
  const NamedQuery& nq = inst.query(query_name);
  if (nq.head.empty()) return {inst};

  auto doms = variable_domains(nq.body, inst.schema);
  std::vector<std::string> head_domains;
  for (const auto& v : nq.head) {
    auto it = doms.find(v);
    if (it == doms.end())
      throw ModelError("head variable " + v + " does not occur in the body");
    head_domains.push_back(it->second);
  }

  std::set<std::string> taken = taken_tokens(inst);
  std::set<TypedValue> dom = adom(inst.conf, inst.schema);

  // Per head position: the known values of its domain plus one fresh
  // constant standing in for every unseen value.
  std::vector<std::vector<std::string>> candidates(nq.head.size());
  std::vector<std::string> fresh(nq.head.size());
  for (std::size_t i = 0; i < nq.head.size(); ++i) {
    for (const auto& tv : dom)
      if (tv.domain == head_domains[i]) candidates[i].push_back(tv.token);
    fresh[i] = fresh_name("c" + std::to_string(i), taken);
    taken.insert(fresh[i]);
    candidates[i].push_back(fresh[i]);
  }

  std::vector<ProblemInstance> out;
  std::vector<std::size_t> pick(nq.head.size(), 0);
  for (;;) {
    ProblemInstance next = inst;
    Homomorphism h;
    for (std::size_t i = 0; i < pick.size(); ++i) {
      const std::string& token = candidates[i][pick[i]];
      h[nq.head[i]] = token;
      if (token == fresh[i])
        next.conf.admitted.insert({token, head_domains[i]});
    }
    for (auto& q : next.queries)
      if (q.name == query_name) {
        q.body = substitute_query(q.body, h);
        q.head.clear();
      }
    out.push_back(std::move(next));

    std::size_t i = 0;
    while (i < pick.size() && ++pick[i] == candidates[i].size())
      pick[i++] = 0;
    if (i == pick.size()) break;
  }
  return out;
}

ProblemInstance encode_disjunction_as_cq(const ProblemInstance& inst,
                                         const std::string& q1_name,
                                         const std::string& q2_name) {
  const NamedQuery& q1 = boolean_query(inst, q1_name);
  const NamedQuery& q2 = boolean_query(inst, q2_name);
  if (!q1.body.is_cq())
    throw ModelError("encode_disjunction_as_cq: q1 must be conjunctive");
  if (q2.body.kind != Query::OrNode || q2.body.children.size() != 2)
    throw ModelError(
        "encode_disjunction_as_cq: q2 must be a two-way disjunction");

  // One side is a lone atom over a unary relation with a Boolean method.
  const Query* a_side = nullptr;
  const Query* cq_side = nullptr;
  for (const auto& child : q2.body.children) {
    if (a_side == nullptr && child.kind == Query::AtomNode &&
        child.atom.terms.size() == 1) {
      const Relation* r = inst.schema.find_relation(child.atom.relation);
      bool boolean_access = false;
      for (const auto& m : inst.schema.methods)
        if (m.relation == child.atom.relation && inst.schema.is_boolean(m))
          boolean_access = true;
      if (r && r->arity() == 1 && boolean_access) {
        a_side = &child;
        continue;
      }
    }
    cq_side = &child;
  }
  if (!a_side || !cq_side || !cq_side->is_cq())
    throw ModelError(
        "encode_disjunction_as_cq: q2 is not of the supported shape");
  const std::string a_rel = a_side->atom.relation;

  ProblemInstance out;
  out.schema = inst.schema;
  std::set<std::string> names = schema_names(out.schema);
  std::set<std::string> taken = taken_tokens(inst);

  const std::string bool_dom = fresh_name("BB", names);
  names.insert(bool_dom);
  const std::string or_rel = fresh_name("OrB", names);
  names.insert(or_rel);
  const std::string p_rel = fresh_name("PB", names);
  names.insert(p_rel);
  out.schema.domains.push_back(bool_dom);

  // A is retyped to the Boolean domain; its private domain goes away if
  // nothing else uses it.
  std::string a_old_domain;
  for (auto& r : out.schema.relations)
    if (r.name == a_rel) {
      a_old_domain = r.attributes[0].domain;
      r.attributes[0].domain = bool_dom;
    }
  bool old_used = false;
  for (const auto& r : out.schema.relations)
    for (const auto& at : r.attributes)
      if (at.domain == a_old_domain) old_used = true;
  if (!old_used)
    std::erase(out.schema.domains, a_old_domain);

  // Validity place on every pre-existing relation except A.
  std::set<std::string> padded;
  for (auto& r : out.schema.relations) {
    if (r.name == a_rel) continue;
    std::string attr = "b";
    for (bool clash = true; clash;) {
      clash = false;
      for (const auto& at : r.attributes)
        if (at.name == attr) {
          attr += "_";
          clash = true;
        }
    }
    r.attributes.push_back({attr, bool_dom});
    padded.insert(r.name);
  }
  out.schema.relations.push_back(
      {or_rel, {{"l", bool_dom}, {"r", bool_dom}}});
  out.schema.relations.push_back({p_rel, {{"v", bool_dom}}});

  // Existing facts are real: pad with 1.
  out.conf.admitted = inst.conf.admitted;
  for (const auto& f : inst.conf.facts) {
    Fact g = f;
    if (padded.count(f.relation)) g.values.push_back("1");
    out.conf.insert(g);
  }
  out.conf.insert({or_rel, {"1", "0"}});
  out.conf.insert({or_rel, {"0", "1"}});
  out.conf.insert({or_rel, {"1", "1"}});
  out.conf.insert({p_rel, {"1"}});
  out.conf.insert({a_rel, {"0"}});

  // One all-zero decoy per padded relation so the q2 side can be
  // satisfied vacuously at validity bit 0. Decoy values reuse the
  // instance's own active domain where possible: inventing values would
  // enlarge the reachable space (they unlock dependent accesses and act
  // as extra fresh tokens for bounded searches).
  std::set<TypedValue> original_adom = adom(inst.conf, inst.schema);
  std::map<std::string, std::string> decoy;
  auto decoy_for = [&](const std::string& domain) {
    auto it = decoy.find(domain);
    if (it != decoy.end()) return it->second;
    std::string token;
    for (const auto& v : original_adom)
      if (v.domain == domain) {
        token = v.token;
        break;
      }
    if (token.empty()) {
      token = fresh_name("z" + domain, taken);
      taken.insert(token);
    }
    decoy.emplace(domain, token);
    return token;
  };
  for (const auto& r : out.schema.relations) {
    if (!padded.count(r.name)) continue;
    Fact f;
    f.relation = r.name;
    for (std::size_t i = 0; i + 1 < r.attributes.size(); ++i)
      f.values.push_back(decoy_for(r.attributes[i].domain));
    f.values.push_back("0");
    out.conf.insert(f);
  }

  // Queries: rename apart, then pad atoms with the shared validity vars.
  std::set<std::string> avoid = {"b", "b1", "b2"};
  Query q1_body = rename_apart(q1.body, avoid);
  Query q2_body = rename_apart(*cq_side, avoid);

  // Extra decoys for q2 atoms carrying constants, which the per-relation
  // all-zero decoy cannot match.
  for (const auto& a : collect_atoms(q2_body)) {
    bool has_constant = false;
    for (const auto& t : a.terms)
      if (!t.is_var()) has_constant = true;
    if (!has_constant) continue;
    const Relation& r = out.schema.relation(a.relation);
    Fact f;
    f.relation = a.relation;
    for (std::size_t i = 0; i < a.terms.size(); ++i)
      f.values.push_back(a.terms[i].is_var()
                             ? decoy_for(r.attributes[i].domain)
                             : a.terms[i].name);
    f.values.push_back("0");
    out.conf.insert(f);
  }

  std::vector<Query> conjuncts;
  conjuncts.push_back(Query::make_atom({a_rel, {Term::var("b1")}}));
  for (const auto& a : collect_atoms(q2_body)) {
    Atom padded_atom = a;
    padded_atom.terms.push_back(Term::var("b2"));
    conjuncts.push_back(Query::make_atom(padded_atom));
  }
  conjuncts.push_back(
      Query::make_atom({or_rel, {Term::var("b1"), Term::var("b2")}}));
  for (const auto& a : collect_atoms(q1_body)) {
    Atom padded_atom = a;
    padded_atom.terms.push_back(Term::var("b"));
    conjuncts.push_back(Query::make_atom(padded_atom));
  }
  conjuncts.push_back(Query::make_atom({p_rel, {Term::var("b")}}));

  std::set<std::string> qnames;
  for (const auto& nq : inst.queries) qnames.insert(nq.name);
  out.queries.push_back(
      {fresh_name("Q", qnames), Query::make_and(std::move(conjuncts)), {}});

  std::string a_attr;
  std::string a_method;
  for (const auto& m : out.schema.methods)
    if (m.relation == a_rel && out.schema.is_boolean(m)) a_method = m.name;
  a_attr = out.schema.relation(a_rel).attributes[0].name;
  out.access = Access{a_method, {{a_attr, "1"}}};
  return out;
}

ProblemInstance containment_to_ltr(const ProblemInstance& inst,
                                   const std::string& q1_name,
                                   const std::string& q2_name,
                                   QueryLanguage lang) {
  const NamedQuery& q1 = boolean_query(inst, q1_name);
  const NamedQuery& q2 = boolean_query(inst, q2_name);
  if (lang == QueryLanguage::Cq && !(q1.body.is_cq() && q2.body.is_cq()))
    throw ModelError("containment_to_ltr: cq mode needs conjunctive queries");

  ProblemInstance out = inst;
  ARelation a = add_a_relation(out);

  std::set<std::string> avoid;
  for (const auto& v : collect_variables(q1.body)) avoid.insert(v);
  Query q2_body = rename_apart(q2.body, avoid);
  std::string xa = "xa";
  while (avoid.count(xa)) xa += "_";
  Query a_atom = Query::make_atom({a.relation, {Term::var(xa)}});

  if (lang == QueryLanguage::Pq) {
    std::set<std::string> taken = taken_tokens(inst);
    std::string c = fresh_name("c", taken);  // deliberately not admitted
    Query q_prime = Query::make_and(
        {Query::make_or({a_atom, q2_body}), q1.body});
    std::set<std::string> qnames;
    for (const auto& nq : out.queries) qnames.insert(nq.name);
    out.queries.push_back({fresh_name("Q", qnames), std::move(q_prime), {}});
    out.access = Access{a.method, {{a.attribute, c}}};
    return out;
  }

  for (auto& nq : out.queries)
    if (nq.name == q2_name)
      nq.body = Query::make_or({a_atom, q2_body});
  return encode_disjunction_as_cq(out, q1_name, q2_name);
}

ProblemInstance ltr_to_containment(const ProblemInstance& inst,
                                   const std::string& query_name) {
  if (!inst.access)
    throw ModelError("ltr_to_containment needs a distinguished access");
  const NamedQuery& q = boolean_query(inst, query_name);
  const Access& access = *inst.access;
  const AccessMethod& m = inst.schema.method(access.method);
  const Relation& rel = inst.schema.relation(m.relation);

  ProblemInstance out = inst;
  std::set<std::string> names = schema_names(out.schema);
  const std::string bind_rel = fresh_name("IsBind", names);

  Relation r;
  r.name = bind_rel;
  Fact bind_fact;
  bind_fact.relation = bind_rel;
  std::vector<std::size_t> input_positions;
  for (const auto& attr : m.input_attributes) {
    auto idx = rel.attribute_index(attr);
    if (!idx) throw ModelError("method input " + attr + " not in relation");
    r.attributes.push_back(rel.attributes[*idx]);
    bind_fact.values.push_back(access.binding.at(attr));
    input_positions.push_back(*idx);
  }
  out.schema.relations.push_back(r);
  out.conf.insert(bind_fact);

  // Each atom over the accessed relation becomes a disjunction with the
  // binding tuple projected onto the input positions.
  auto rewrite = [&](auto&& self, const Query& node) -> Query {
    if (node.kind == Query::AtomNode) {
      if (node.atom.relation != m.relation) return node;
      Atom bind_atom;
      bind_atom.relation = bind_rel;
      for (std::size_t pos : input_positions)
        bind_atom.terms.push_back(node.atom.terms[pos]);
      return Query::make_or({node, Query::make_atom(bind_atom)});
    }
    Query copy = node;
    for (auto& c : copy.children) c = self(self, c);
    return copy;
  };
  Query q_prime = rewrite(rewrite, q.body);

  std::set<std::string> qnames;
  for (const auto& nq : out.queries) qnames.insert(nq.name);
  out.queries.push_back(
      {fresh_name(query_name + "_prime", qnames), std::move(q_prime), {}});
  return out;
}

Verdict ltr_via_containment_cq(const Query& q, const Access& access,
                               const Configuration& conf, const Schema& schema,
                               const ContainmentDecider& decider,
                               const Budget& budget) {
  if (!q.is_cq())
    throw ModelError("ltr_via_containment_cq needs a conjunctive query");
  check_access(access, schema);
  Stopwatch watch;
  Verdict v;
  v.stats.exhaustive = true;

  std::vector<Atom> atoms = collect_atoms(q);
  std::vector<std::size_t> compatible;
  std::vector<Atom> rest;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (unify_access(atoms[i], access, schema))
      compatible.push_back(i);
    else
      rest.push_back(atoms[i]);
  }

  if (compatible.size() > 20)
    throw BudgetError("too many access-compatible subgoals to enumerate");
  std::vector<std::uint32_t> masks;
  for (std::uint32_t mask = 0; mask + 1 < (1u << compatible.size()); ++mask)
    masks.push_back(mask);
  std::stable_sort(masks.begin(), masks.end(),
                   [](std::uint32_t a, std::uint32_t b) {
                     return std::popcount(a) < std::popcount(b);
                   });

  bool unknown = false;
  for (std::uint32_t mask : masks) {
    std::vector<Query> conjuncts;
    for (std::size_t j = 0; j < compatible.size(); ++j)
      if (mask & (1u << j))
        conjuncts.push_back(Query::make_atom(atoms[compatible[j]]));
    for (const auto& a : rest) conjuncts.push_back(Query::make_atom(a));
    Query candidate = Query::make_and(std::move(conjuncts));

    Verdict sub = decider(candidate, q, conf, schema, budget);
    v.stats.nodes += sub.stats.nodes + 1;
    if (sub.no()) {
      v.outcome = Outcome::Yes;
      GuessDescriptor g;
      g.text = "kept " + std::to_string(std::popcount(mask)) + " of " +
               std::to_string(compatible.size()) +
               " access-compatible subgoals; remainder escapes containment";
      v.certificate = g;
      v.stats.exhaustive = sub.stats.exhaustive;
      v.stats.millis = watch.millis();
      return v;
    }
    if (!sub.decided()) unknown = true;
    if (!sub.stats.exhaustive) v.stats.exhaustive = false;
  }
  v.outcome = unknown ? Outcome::UnknownWithinBudget : Outcome::No;
  v.stats.millis = watch.millis();
  return v;
}

ProblemInstance cm_to_config(const CmInstance& cm) {
  if (!cm.open.empty() || !cm.fixed.empty())
    throw ModelError("cm_to_config: open content is not supported here");
  for (const auto& r : cm.schema.relations) {
    std::size_t count = 0;
    for (const auto& m : cm.schema.methods)
      if (m.relation == r.name) ++count;
    if (count != 1)
      throw ModelError("cm_to_config: relation " + r.name +
                       " must have exactly one method");
  }
  ProblemInstance out;
  out.schema = cm.schema;
  out.conf.admitted = cm.constants;
  out.queries = cm.queries;
  return out;
}

CmInstance config_to_cm(const ProblemInstance& inst,
                        const std::string& q1_name, const std::string& q2_name,
                        std::size_t k) {
  const NamedQuery& q1 = boolean_query(inst, q1_name);
  const NamedQuery& q2 = boolean_query(inst, q2_name);
  for (const auto& r : inst.schema.relations) {
    std::size_t count = 0;
    for (const auto& m : inst.schema.methods)
      if (m.relation == r.name) ++count;
    if (count > 1)
      throw ModelError("config_to_cm: relation " + r.name +
                       " has more than one method");
    if (count == 0 && r.arity() > k)
      throw ModelError("config_to_cm: access-free relation " + r.name +
                       " exceeds the arity bound");
  }

  CmInstance cm;
  cm.schema = inst.schema;
  cm.constants = adom(inst.conf, inst.schema);
  std::set<std::string> names = schema_names(cm.schema);

  auto ground_query_atom = [](const Fact& f) {
    Atom a;
    a.relation = f.relation;
    for (const auto& v : f.values) a.terms.push_back(Term::con(v));
    return Query::make_atom(a);
  };

  std::vector<Query> conjuncts = {q1.body};
  std::vector<Query> disjuncts = {q2.body};

  for (const auto& r : inst.schema.relations) {
    std::vector<Fact> facts;
    for (const auto& f : inst.conf.facts)
      if (f.relation == r.name) facts.push_back(f);
    if (facts.empty()) continue;

    for (const auto& f : facts) conjuncts.push_back(ground_query_atom(f));
    if (inst.schema.relation_has_method(r.name)) continue;
    if (r.arity() <= 1) {
      for (const auto& f : facts) cm.fixed.insert(f);
      continue;
    }

    // Monadic projections bound the candidate content of R; everything
    // in the product but outside the configuration is known false.
    std::vector<std::vector<std::string>> projections(r.arity());
    for (const auto& f : facts)
      for (std::size_t i = 0; i < f.values.size(); ++i)
        if (std::find(projections[i].begin(), projections[i].end(),
                      f.values[i]) == projections[i].end())
          projections[i].push_back(f.values[i]);

    for (std::size_t i = 0; i < r.arity(); ++i) {
      std::string proj_name =
          fresh_name(r.name + "_" + r.attributes[i].name, names);
      names.insert(proj_name);
      cm.schema.relations.push_back(
          {proj_name, {{r.attributes[i].name, r.attributes[i].domain}}});
      for (const auto& v : projections[i]) {
        Fact pf{proj_name, {v}};
        cm.fixed.insert(pf);
        conjuncts.push_back(ground_query_atom(pf));
      }
    }

    OpenRelation open;
    open.relation = r.name;
    open.required.insert(facts.begin(), facts.end());
    std::vector<std::size_t> pick(r.arity(), 0);
    for (;;) {
      Fact cand{r.name, {}};
      for (std::size_t i = 0; i < r.arity(); ++i)
        cand.values.push_back(projections[i][pick[i]]);
      if (!open.required.count(cand)) disjuncts.push_back(ground_query_atom(cand));
      open.candidates.push_back(std::move(cand));
      std::size_t i = 0;
      while (i < pick.size() && ++pick[i] == projections[i].size())
        pick[i++] = 0;
      if (i == pick.size()) break;
    }
    cm.open.push_back(std::move(open));
  }

  cm.queries.push_back({q1_name, Query::make_and(std::move(conjuncts)), {}});
  cm.queries.push_back({q2_name, Query::make_or(std::move(disjuncts)), {}});
  return cm;
}

Verdict decide_cm_containment(const CmInstance& cm, const std::string& q1_name,
                              const std::string& q2_name,
                              const Budget& budget) {
  const NamedQuery* q1 = nullptr;
  const NamedQuery* q2 = nullptr;
  for (const auto& nq : cm.queries) {
    if (nq.name == q1_name) q1 = &nq;
    if (nq.name == q2_name) q2 = &nq;
  }
  if (!q1 || !q2) throw ModelError("decide_cm_containment: unknown query");

  std::vector<std::vector<Fact>> optional;
  for (const auto& open : cm.open) {
    std::vector<Fact> extra;
    for (const auto& f : open.candidates)
      if (!open.required.count(f)) extra.push_back(f);
    optional.push_back(std::move(extra));
  }
  std::size_t total_optional = 0;
  for (const auto& v : optional) total_optional += v.size();
  if (total_optional > 20)
    throw BudgetError("too many open tuples to enumerate");

  Configuration base;
  base.admitted = cm.constants;
  base.facts = cm.fixed;
  for (const auto& open : cm.open)
    for (const auto& f : open.required) base.insert(f);

  Stopwatch watch;
  Verdict v;
  v.stats.exhaustive = true;
  bool unknown = false;
  std::uint64_t combos = 1ull << total_optional;
  for (std::uint64_t mask = 0; mask < combos; ++mask) {
    Configuration conf = base;
    std::size_t bit = 0;
    for (const auto& extra : optional)
      for (const auto& f : extra) {
        if (mask & (1ull << bit)) conf.insert(f);
        ++bit;
      }
    Verdict sub =
        decide_containment_bounded(q1->body, q2->body, conf, cm.schema, budget);
    v.stats.nodes += sub.stats.nodes;
    if (!sub.stats.exhaustive) v.stats.exhaustive = false;
    if (sub.no()) {
      v.outcome = Outcome::No;
      v.certificate = sub.certificate;
      v.stats.millis = watch.millis();
      return v;
    }
    if (!sub.decided()) unknown = true;
  }
  v.outcome = unknown ? Outcome::UnknownWithinBudget : Outcome::Yes;
  v.stats.millis = watch.millis();
  return v;
}

}  // namespace alp
