#include "alp/query.hpp"

#include <algorithm>

namespace alp {

bool Query::is_cq() const {
  if (kind == OrNode) return false;
  if (kind == AtomNode) return true;
  for (const auto& c : children)
    if (!c.is_cq()) return false;
  return true;
}

static void collect_atoms_into(const Query& q, std::vector<Atom>& out) {
  if (q.kind == Query::AtomNode) {
    out.push_back(q.atom);
    return;
  }
  for (const auto& c : q.children) collect_atoms_into(c, out);
}

std::vector<Atom> collect_atoms(const Query& q) {
  std::vector<Atom> out;
  collect_atoms_into(q, out);
  return out;
}

static void collect_vars_atoms(const std::vector<Atom>& atoms,
                               std::vector<std::string>& out) {
  std::set<std::string> seen;
  for (const auto& a : atoms)
    for (const auto& t : a.terms)
      if (t.is_var() && seen.insert(t.name).second) out.push_back(t.name);
}

std::vector<std::string> collect_variables(const Query& q) {
  std::vector<std::string> out;
  collect_vars_atoms(collect_atoms(q), out);
  return out;
}

std::vector<std::string> collect_variables(const ConjunctiveQuery& cq) {
  std::vector<std::string> out;
  collect_vars_atoms(cq, out);
  return out;
}

static std::map<std::string, std::string> var_domains_atoms(
    const std::vector<Atom>& atoms, const Schema& schema) {
  std::map<std::string, std::string> doms;
  for (const auto& a : atoms) {
    const Relation& r = schema.relation(a.relation);
    if (a.terms.size() != r.arity())
      throw ModelError("arity mismatch in atom on " + a.relation);
    for (std::size_t i = 0; i < a.terms.size(); ++i) {
      if (!a.terms[i].is_var()) continue;
      const std::string& d = r.attributes[i].domain;
      auto [it, inserted] = doms.emplace(a.terms[i].name, d);
      if (!inserted && it->second != d)
        throw ModelError("variable " + a.terms[i].name +
                         " used at positions of domains " + it->second +
                         " and " + d);
    }
  }
  return doms;
}

std::map<std::string, std::string> variable_domains(const Query& q,
                                                    const Schema& schema) {
  return var_domains_atoms(collect_atoms(q), schema);
}

std::map<std::string, std::string> variable_domains(const ConjunctiveQuery& cq,
                                                    const Schema& schema) {
  return var_domains_atoms(cq, schema);
}

std::set<TypedValue> query_constants(const Query& q, const Schema& schema) {
  std::set<TypedValue> out;
  for (const auto& a : collect_atoms(q)) {
    const Relation& r = schema.relation(a.relation);
    for (std::size_t i = 0; i < a.terms.size() && i < r.arity(); ++i)
      if (!a.terms[i].is_var())
        out.insert({a.terms[i].name, r.attributes[i].domain});
  }
  return out;
}

std::vector<std::string> validate_query(const Query& q, const Schema& schema,
                                        const Configuration& conf) {
  std::vector<std::string> problems;
  for (const auto& a : collect_atoms(q)) {
    const Relation* r = schema.find_relation(a.relation);
    if (!r) {
      problems.push_back("atom on unknown relation " + a.relation);
      continue;
    }
    if (a.terms.size() != r->arity())
      problems.push_back("atom on " + a.relation + " has " +
                         std::to_string(a.terms.size()) + " terms, expected " +
                         std::to_string(r->arity()));
  }
  if (!problems.empty()) return problems;
  try {
    variable_domains(q, schema);
  } catch (const ModelError& e) {
    problems.push_back(e.what());
  }
  std::set<TypedValue> dom = adom(conf, schema);
  for (const auto& c : query_constants(q, schema))
    if (!dom.count(c))
      problems.push_back("query constant " + c.token + ":" + c.domain +
                         " is not admitted in the configuration");
  return problems;
}

std::vector<ConjunctiveQuery> to_dnf(const Query& q) {
  switch (q.kind) {
    case Query::AtomNode:
      return {{q.atom}};
    case Query::OrNode: {
      std::vector<ConjunctiveQuery> out;
      for (const auto& c : q.children)
        for (auto& d : to_dnf(c)) out.push_back(std::move(d));
      return out;
    }
    case Query::AndNode: {
      std::vector<ConjunctiveQuery> out = {{}};
      for (const auto& c : q.children) {
        std::vector<ConjunctiveQuery> next;
        for (const auto& lhs : out)
          for (const auto& rhs : to_dnf(c)) {
            ConjunctiveQuery merged = lhs;
            merged.insert(merged.end(), rhs.begin(), rhs.end());
            next.push_back(std::move(merged));
          }
        out = std::move(next);
      }
      return out;
    }
  }
  return {};
}

Query dnf_to_query(const std::vector<ConjunctiveQuery>& dnf) {
  std::vector<Query> disjuncts;
  for (const auto& cq : dnf) {
    std::vector<Query> atoms;
    for (const auto& a : cq) atoms.push_back(Query::make_atom(a));
    disjuncts.push_back(atoms.size() == 1 ? std::move(atoms[0])
                                          : Query::make_and(std::move(atoms)));
  }
  return disjuncts.size() == 1 ? std::move(disjuncts[0])
                               : Query::make_or(std::move(disjuncts));
}

Atom substitute(const Atom& atom, const Homomorphism& h) {
  Atom out = atom;
  for (auto& t : out.terms)
    if (t.is_var()) {
      auto it = h.find(t.name);
      if (it != h.end()) t = Term::con(it->second);
    }
  return out;
}

ConjunctiveQuery substitute(const ConjunctiveQuery& cq,
                            const Homomorphism& h) {
  ConjunctiveQuery out;
  out.reserve(cq.size());
  for (const auto& a : cq) out.push_back(substitute(a, h));
  return out;
}

bool atom_is_ground(const Atom& atom) {
  for (const auto& t : atom.terms)
    if (t.is_var()) return false;
  return true;
}

Fact ground_atom(const Atom& atom, const Homomorphism& h) {
  Fact f;
  f.relation = atom.relation;
  for (const auto& t : atom.terms) {
    if (!t.is_var()) {
      f.values.push_back(t.name);
    } else {
      auto it = h.find(t.name);
      if (it == h.end())
        throw ModelError("unbound variable " + t.name + " when grounding");
      f.values.push_back(it->second);
    }
  }
  return f;
}

namespace {

// Facts grouped by relation, built once per evaluation.
using FactIndex = std::map<std::string, std::vector<const Fact*>>;

FactIndex index_facts(const Configuration& conf) {
  FactIndex idx;
  for (const auto& f : conf.facts) idx[f.relation].push_back(&f);
  return idx;
}

const std::vector<const Fact*>& relation_facts(const FactIndex& idx,
                                               const std::string& rel) {
  static const std::vector<const Fact*> empty;
  auto it = idx.find(rel);
  return it == idx.end() ? empty : it->second;
}

bool atom_matches(const Atom& a, const Fact& f, const Homomorphism& h,
                  Homomorphism& extension) {
  if (a.relation != f.relation || a.terms.size() != f.values.size())
    return false;
  extension.clear();
  for (std::size_t i = 0; i < a.terms.size(); ++i) {
    const Term& t = a.terms[i];
    if (!t.is_var()) {
      if (t.name != f.values[i]) return false;
      continue;
    }
    auto bound = h.find(t.name);
    const std::string* prior =
        bound != h.end() ? &bound->second : nullptr;
    if (!prior) {
      auto ext = extension.find(t.name);
      if (ext != extension.end()) prior = &ext->second;
    }
    if (prior) {
      if (*prior != f.values[i]) return false;
    } else {
      extension[t.name] = f.values[i];
    }
  }
  return true;
}

// Most-constrained-atom-first backtracking: at every step branch on the
// pending atom with the fewest facts compatible with the partial map.
bool search(const std::vector<Atom>& atoms, std::vector<bool>& done,
            std::size_t remaining, const FactIndex& idx, Homomorphism& h) {
  if (remaining == 0) return true;
  std::size_t best = atoms.size();
  std::size_t best_count = 0;
  Homomorphism ext;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (done[i]) continue;
    std::size_t count = 0;
    for (const Fact* f : relation_facts(idx, atoms[i].relation))
      if (atom_matches(atoms[i], *f, h, ext)) ++count;
    if (count == 0) return false;
    if (best == atoms.size() || count < best_count) {
      best = i;
      best_count = count;
      if (count == 1) break;
    }
  }
  const Atom& a = atoms[best];
  done[best] = true;
  for (const Fact* f : relation_facts(idx, a.relation)) {
    if (!atom_matches(a, *f, h, ext)) continue;
    for (const auto& [k, v] : ext) h.emplace(k, v);
    if (search(atoms, done, remaining - 1, idx, h)) return true;
    for (const auto& [k, v] : ext) h.erase(k);
  }
  done[best] = false;
  return false;
}

}  // namespace

std::optional<Homomorphism> find_hom(const ConjunctiveQuery& cq,
                                     const Configuration& conf,
                                     const Schema& schema,
                                     const Homomorphism& fixed) {
  (void)schema;
  Homomorphism h = fixed;
  std::vector<bool> done(cq.size(), false);
  FactIndex idx = index_facts(conf);
  if (!search(cq, done, cq.size(), idx, h)) return std::nullopt;
  return h;
}

bool check_hom(const ConjunctiveQuery& cq, const Homomorphism& h,
               const Configuration& conf) {
  try {
    for (const auto& a : cq)
      if (!conf.contains(ground_atom(a, h))) return false;
  } catch (const ModelError&) {
    return false;
  }
  return true;
}

EvalResult eval(const Query& q, const Configuration& conf,
                const Schema& schema) {
  auto dnf = to_dnf(q);
  for (std::size_t i = 0; i < dnf.size(); ++i) {
    if (auto h = find_hom(dnf[i], conf, schema)) return {true, i, *h};
  }
  return {};
}

bool holds(const Query& q, const Configuration& conf, const Schema& schema) {
  return eval(q, conf, schema).holds;
}

bool holds_with(const Query& q, const Configuration& conf, const Fact& f,
                const Schema& schema) {
  (void)schema;
  FactIndex idx = index_facts(conf);
  Homomorphism empty, ext;
  for (const auto& cq : to_dnf(q)) {
    for (std::size_t i = 0; i < cq.size(); ++i) {
      if (!atom_matches(cq[i], f, empty, ext)) continue;
      Homomorphism h = ext;
      std::vector<bool> done(cq.size(), false);
      done[i] = true;
      if (search(cq, done, cq.size() - 1, idx, h)) return true;
    }
  }
  return false;
}

bool certain(const Query& q, const Configuration& conf, const Schema& schema) {
  return holds(q, conf, schema);
}

namespace {

// Canonical database of a conjunct: variables frozen into constants that
// cannot collide with real tokens.
std::string frozen_token(const std::string& var) { return "\x01var:" + var; }

Configuration canonical_db(const ConjunctiveQuery& cq) {
  Configuration db;
  for (const auto& a : cq) {
    Fact f;
    f.relation = a.relation;
    for (const auto& t : a.terms)
      f.values.push_back(t.is_var() ? frozen_token(t.name) : t.name);
    db.insert(f);
  }
  return db;
}

}  // namespace

bool classical_contains(const Query& q1, const Query& q2,
                        const Schema& schema) {
  auto d1 = to_dnf(q1);
  auto d2 = to_dnf(q2);
  for (const auto& disjunct : d1) {
    Configuration db = canonical_db(disjunct);
    bool covered = false;
    for (const auto& candidate : d2)
      if (find_hom(candidate, db, schema)) {
        covered = true;
        break;
      }
    if (!covered) return false;
  }
  return true;
}

}  // namespace alp
