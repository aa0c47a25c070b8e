#include "alp/model.hpp"

#include <algorithm>
#include <sstream>

namespace alp {

std::optional<std::size_t> Relation::attribute_index(
    const std::string& attr) const {
  for (std::size_t i = 0; i < attributes.size(); ++i)
    if (attributes[i].name == attr) return i;
  return std::nullopt;
}

bool AccessMethod::has_input(const std::string& attr) const {
  return std::find(input_attributes.begin(), input_attributes.end(), attr) !=
         input_attributes.end();
}

const Relation* Schema::find_relation(const std::string& name) const {
  for (const auto& r : relations)
    if (r.name == name) return &r;
  return nullptr;
}

const AccessMethod* Schema::find_method(const std::string& name) const {
  for (const auto& m : methods)
    if (m.name == name) return &m;
  return nullptr;
}

const Relation& Schema::relation(const std::string& name) const {
  const Relation* r = find_relation(name);
  if (!r) throw ModelError("unknown relation: " + name);
  return *r;
}

const AccessMethod& Schema::method(const std::string& name) const {
  const AccessMethod* m = find_method(name);
  if (!m) throw ModelError("unknown access method: " + name);
  return *m;
}

bool Schema::relation_has_method(const std::string& rel) const {
  for (const auto& m : methods)
    if (m.relation == rel) return true;
  return false;
}

bool Schema::is_boolean(const AccessMethod& m) const {
  return m.input_attributes.size() == relation(m.relation).arity();
}

bool Schema::is_free(const AccessMethod& m) const {
  return m.input_attributes.empty();
}

std::vector<std::string> Schema::validate() const {
  std::vector<std::string> problems;
  std::set<std::string> domain_set(domains.begin(), domains.end());
  if (domain_set.size() != domains.size())
    problems.push_back("duplicate domain name");

  std::set<std::string> rel_names;
  for (const auto& r : relations) {
    if (!rel_names.insert(r.name).second)
      problems.push_back("duplicate relation name: " + r.name);
    std::set<std::string> attr_names;
    for (const auto& a : r.attributes) {
      if (!attr_names.insert(a.name).second)
        problems.push_back("duplicate attribute " + a.name + " in relation " +
                           r.name);
      if (!domain_set.count(a.domain))
        problems.push_back("undeclared domain " + a.domain + " in relation " +
                           r.name);
    }
  }

  std::set<std::string> method_names;
  for (const auto& m : methods) {
    if (!method_names.insert(m.name).second)
      problems.push_back("duplicate method name: " + m.name);
    const Relation* r = find_relation(m.relation);
    if (!r) {
      problems.push_back("method " + m.name + " on unknown relation " +
                         m.relation);
      continue;
    }
    std::set<std::string> seen;
    for (const auto& in : m.input_attributes) {
      if (!r->attribute_index(in))
        problems.push_back("method " + m.name + " inputs unknown attribute " +
                           in);
      if (!seen.insert(in).second)
        problems.push_back("method " + m.name + " repeats input " + in);
    }
  }
  return problems;
}

bool Configuration::subset_of(const Configuration& other) const {
  return std::includes(other.facts.begin(), other.facts.end(), facts.begin(),
                       facts.end()) &&
         std::includes(other.admitted.begin(), other.admitted.end(),
                       admitted.begin(), admitted.end());
}

std::set<TypedValue> adom(const Configuration& conf, const Schema& schema) {
  std::set<TypedValue> out = conf.admitted;
  for (const auto& f : conf.facts) {
    const Relation& r = schema.relation(f.relation);
    for (std::size_t i = 0; i < f.values.size(); ++i)
      out.insert({f.values[i], r.attributes[i].domain});
  }
  return out;
}

void check_access(const Access& access, const Schema& schema) {
  const AccessMethod& m = schema.method(access.method);
  const Relation& r = schema.relation(m.relation);
  for (const auto& in : m.input_attributes)
    if (!access.binding.count(in))
      throw ModelError("access via " + m.name + " misses binding for " + in);
  for (const auto& [attr, value] : access.binding) {
    if (!m.has_input(attr))
      throw ModelError("access via " + m.name + " binds non-input attribute " +
                       attr);
    if (!r.attribute_index(attr))
      throw ModelError("access via " + m.name + " binds unknown attribute " +
                       attr);
  }
}

bool is_well_formed(const Access& access, const Configuration& conf,
                    const Schema& schema) {
  const AccessMethod& m = schema.method(access.method);
  if (m.mode == AccessMode::Independent) return true;
  const Relation& r = schema.relation(m.relation);
  std::set<TypedValue> dom = adom(conf, schema);
  for (const auto& [attr, value] : access.binding) {
    std::size_t idx = *r.attribute_index(attr);
    if (!dom.count({value, r.attributes[idx].domain})) return false;
  }
  return true;
}

void check_response(const Access& access, const Response& resp,
                    const Schema& schema) {
  const AccessMethod& m = schema.method(access.method);
  const Relation& r = schema.relation(m.relation);
  for (const auto& f : resp.facts) {
    if (f.relation != m.relation)
      throw ModelError("response fact on " + f.relation +
                       " does not match accessed relation " + m.relation);
    if (f.values.size() != r.arity())
      throw ModelError("response fact arity mismatch on " + f.relation);
    for (const auto& [attr, value] : access.binding) {
      std::size_t idx = *r.attribute_index(attr);
      if (f.values[idx] != value) {
        std::ostringstream msg;
        msg << "response fact disagrees with binding on " << attr << " ("
            << f.values[idx] << " vs " << value << ")";
        throw ModelError(msg.str());
      }
    }
  }
}

Configuration apply_response(const Configuration& conf, const Access& access,
                             const Response& resp, const Schema& schema) {
  check_access(access, schema);
  check_response(access, resp, schema);
  Configuration out = conf;
  for (const auto& f : resp.facts) out.insert(f);
  return out;
}

PathDiagnostic validate_path(const Path& path, const Schema& schema) {
  Configuration conf = path.initial;
  for (std::size_t i = 0; i < path.steps.size(); ++i) {
    const PathStep& step = path.steps[i];
    try {
      check_access(step.access, schema);
      check_response(step.access, step.response, schema);
    } catch (const ModelError& e) {
      return {false, i, e.what()};
    }
    if (!is_well_formed(step.access, conf, schema))
      return {false, i, "access not well-formed at step " + std::to_string(i)};
    conf = apply_response(conf, step.access, step.response, schema);
  }
  return {};
}

bool path_is_valid(const Path& path, const Schema& schema) {
  return validate_path(path, schema).ok;
}

Configuration replay_path(const Path& path, const Schema& schema) {
  Configuration conf = path.initial;
  for (const auto& step : path.steps) {
    if (!is_well_formed(step.access, conf, schema))
      throw ModelError("path replay hit an ill-formed access");
    conf = apply_response(conf, step.access, step.response, schema);
  }
  return conf;
}

Path truncate_path(const Path& path, const Schema& schema) {
  if (path.steps.empty()) throw ModelError("cannot truncate an empty path");
  Path out;
  out.initial = path.initial;
  Configuration conf = path.initial;
  for (std::size_t i = 1; i < path.steps.size(); ++i) {
    const PathStep& step = path.steps[i];
    if (!is_well_formed(step.access, conf, schema)) break;
    conf = apply_response(conf, step.access, step.response, schema);
    out.steps.push_back(step);
  }
  return out;
}

}  // namespace alp
