#include "alp/instance.hpp"

#include "alp/verdict.hpp"

namespace alp {

std::vector<std::string> validate_instance(const ProblemInstance& inst) {
  std::vector<std::string> problems = inst.schema.validate();
  if (!problems.empty()) return problems;

  for (const auto& f : inst.conf.facts) {
    const Relation* r = inst.schema.find_relation(f.relation);
    if (!r) {
      problems.push_back("fact on unknown relation " + f.relation);
      continue;
    }
    if (f.values.size() != r->arity())
      problems.push_back("fact on " + f.relation + " has " +
                         std::to_string(f.values.size()) +
                         " values, expected " + std::to_string(r->arity()));
  }
  std::set<std::string> domain_set(inst.schema.domains.begin(),
                                   inst.schema.domains.end());
  for (const auto& c : inst.conf.admitted)
    if (!domain_set.count(c.domain))
      problems.push_back("admitted constant " + c.token +
                         " has undeclared domain " + c.domain);
  if (!problems.empty()) return problems;

  std::set<std::string> query_names;
  for (const auto& nq : inst.queries) {
    if (!query_names.insert(nq.name).second)
      problems.push_back("duplicate query name: " + nq.name);
    for (auto& p : validate_query(nq.body, inst.schema, inst.conf))
      problems.push_back("query " + nq.name + ": " + p);
  }
  if (inst.access) {
    try {
      check_access(*inst.access, inst.schema);
    } catch (const ModelError& e) {
      problems.push_back(e.what());
    }
  }
  return problems;
}

std::size_t instance_size(const ProblemInstance& inst) {
  std::size_t n = inst.schema.domains.size();
  for (const auto& r : inst.schema.relations) n += 1 + r.arity();
  for (const auto& m : inst.schema.methods)
    n += 1 + m.input_attributes.size();
  for (const auto& f : inst.conf.facts) n += 1 + f.values.size();
  n += inst.conf.admitted.size();
  for (const auto& q : inst.queries) {
    for (const auto& a : collect_atoms(q.body)) n += 1 + a.terms.size();
  }
  return n;
}

Budget Budget::defaults_for(const Query& q) {
  Budget b;
  std::size_t vars = collect_variables(q).size();
  std::size_t atoms = collect_atoms(q).size();
  b.max_depth = vars;
  b.max_facts = atoms * (1 + b.max_depth);
  b.max_fresh = vars == 0 ? 1 : vars;
  b.max_first_response = atoms == 0 ? 1 : atoms;
  return b;
}

}  // namespace alp
