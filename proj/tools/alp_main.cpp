// alp: decide relevance and containment questions for relational
// sources with limited access patterns. Reads the .alp problem format,
// emits one JSON verdict on standard output.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "alp/format.hpp"
#include "alp/generators.hpp"
#include "alp/oracle.hpp"
#include "alp/reductions.hpp"
#include "alp/relevance.hpp"
#include "alp/witness.hpp"
#include "json.hpp"

using nlohmann::json;

namespace {

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_input(const std::string& path) {
  if (path == "-") {
    std::ostringstream buf;
    buf << std::cin.rdbuf();
    return buf.str();
  }
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string fnv1a(const std::string& text) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char out[17];
  std::snprintf(out, sizeof out, "%016llx", static_cast<unsigned long long>(h));
  return out;
}

json fact_json(const alp::Fact& f) {
  json j;
  j["relation"] = f.relation;
  j["values"] = f.values;
  return j;
}

alp::Fact fact_from_json(const json& j) {
  alp::Fact f;
  f.relation = j.at("relation").get<std::string>();
  f.values = j.at("values").get<std::vector<std::string>>();
  return f;
}

json certificate_json(const alp::Certificate& cert) {
  if (std::holds_alternative<std::monostate>(cert)) return nullptr;
  json j;
  if (const auto* resp = std::get_if<alp::Response>(&cert)) {
    j["type"] = "response";
    j["facts"] = json::array();
    for (const auto& f : resp->facts) j["facts"].push_back(fact_json(f));
  } else if (const auto* path = std::get_if<alp::Path>(&cert)) {
    j["type"] = "path";
    j["steps"] = json::array();
    for (const auto& step : path->steps) {
      json s;
      s["method"] = step.access.method;
      s["binding"] = step.access.binding;
      s["response"] = json::array();
      for (const auto& f : step.response.facts)
        s["response"].push_back(f.values);
      j["steps"].push_back(s);
    }
  } else if (const auto* hom = std::get_if<alp::Homomorphism>(&cert)) {
    j["type"] = "hom";
    j["map"] = *hom;
  } else if (const auto* guess = std::get_if<alp::GuessDescriptor>(&cert)) {
    j["type"] = "guess";
    j["text"] = guess->text;
  }
  return j;
}

alp::Path path_from_json(const json& j, const alp::Configuration& initial,
                         const alp::Schema& schema) {
  alp::Path p;
  p.initial = initial;
  for (const auto& s : j.at("steps")) {
    alp::PathStep step;
    step.access.method = s.at("method").get<std::string>();
    step.access.binding =
        s.at("binding").get<std::map<std::string, std::string>>();
    const alp::AccessMethod& m = schema.method(step.access.method);
    for (const auto& values : s.at("response")) {
      alp::Fact f;
      f.relation = m.relation;
      f.values = values.get<std::vector<std::string>>();
      step.response.facts.insert(f);
    }
    p.steps.push_back(std::move(step));
  }
  return p;
}

json budget_json(const alp::Budget& b) {
  json j;
  j["facts"] = b.max_facts;
  j["fresh"] = b.max_fresh;
  j["depth"] = b.max_depth;
  j["first_response"] = b.max_first_response;
  j["timeout_ms"] = b.timeout_ms;
  return j;
}

int emit(const std::string& command, const std::string& digest,
         const alp::Verdict& v, const alp::Budget* budget) {
  json j;
  j["command"] = command;
  j["digest"] = digest;
  j["result"] = alp::outcome_name(v.outcome);
  j["certificate"] = certificate_json(v.certificate);
  if (budget) j["budgets"] = budget_json(*budget);
  j["stats"] = {{"nodes", v.stats.nodes},
                {"millis", v.stats.millis},
                {"exhaustive", v.stats.exhaustive}};
  std::cout << j.dump(2) << "\n";
  std::cerr << command << ": " << alp::outcome_name(v.outcome) << " ("
            << v.stats.nodes << " nodes, " << v.stats.millis << " ms)\n";
  return v.decided() ? 0 : 1;
}

struct Options {
  std::string file;
  std::string query = "Q";
  std::string q1 = "Q1";
  std::string q2 = "Q2";
  std::string access_expr;
  std::string algo = "auto";
  long long budget_facts = -1;
  long long budget_fresh = -1;
  long long budget_depth = -1;
  long long budget_first_response = -1;
  std::uint64_t timeout_ms = 0;
  std::uint64_t seed = 1;
  bool admit_query_constants = false;
  bool chain_heuristic = false;
  bool deterministic = false;
};

void add_budget_flags(CLI::App* cmd, Options& opt) {
  cmd->add_option("--budget-facts", opt.budget_facts);
  cmd->add_option("--budget-fresh", opt.budget_fresh);
  cmd->add_option("--budget-depth", opt.budget_depth);
  cmd->add_option("--budget-first-response", opt.budget_first_response);
  cmd->add_option("--timeout-ms", opt.timeout_ms);
  cmd->add_flag("--chain-heuristic", opt.chain_heuristic);
}

void add_common_flags(CLI::App* cmd, Options& opt) {
  cmd->add_option("file", opt.file)->required();
  cmd->add_option("--seed", opt.seed);
  cmd->add_flag("--admit-query-constants", opt.admit_query_constants);
  cmd->add_flag("--deterministic", opt.deterministic);
}

alp::Budget resolve_budget(const Options& opt, const alp::Query& q) {
  alp::Budget b = alp::Budget::defaults_for(q);
  if (opt.budget_facts >= 0) b.max_facts = opt.budget_facts;
  if (opt.budget_fresh >= 0) b.max_fresh = opt.budget_fresh;
  if (opt.budget_depth >= 0) b.max_depth = opt.budget_depth;
  if (opt.budget_first_response >= 0)
    b.max_first_response = opt.budget_first_response;
  b.timeout_ms = opt.timeout_ms;
  return b;
}

alp::Access resolve_access(const Options& opt,
                           const alp::ProblemInstance& inst) {
  if (!opt.access_expr.empty())
    return alp::parse_access_expr(opt.access_expr, inst.schema);
  if (inst.access) return *inst.access;
  throw InputError("no access: pass --access or add a 'use' line");
}

bool all_independent(const alp::Schema& schema) {
  for (const auto& m : schema.methods)
    if (m.mode == alp::AccessMode::Dependent) return false;
  return true;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

struct GenTiling {
  std::size_t n = 1;
  std::string tiles = "1";
  std::string h = "all";
  std::string v = "all";
  std::string initial;
  std::string final_row;
  bool as_cq = false;
};

alp::TilingSpec resolve_spec(const GenTiling& g, bool corridor) {
  alp::TilingSpec spec;
  spec.n = g.n;
  bool numeric = !g.tiles.empty() &&
                 g.tiles.find_first_not_of("0123456789") == std::string::npos;
  if (numeric) {
    std::size_t k = std::stoull(g.tiles);
    for (std::size_t i = 1; i <= k; ++i)
      spec.types.push_back("T" + std::to_string(i));
  } else {
    spec.types = split_list(g.tiles);
  }
  auto pairs = [&](const std::string& text) {
    std::set<std::pair<std::string, std::string>> out;
    if (text == "all") {
      for (const auto& a : spec.types)
        for (const auto& b : spec.types) out.insert({a, b});
    } else if (text != "none") {
      for (const auto& item : split_list(text)) {
        auto colon = item.find(':');
        if (colon == std::string::npos)
          throw InputError("constraint pairs look like a:b");
        out.insert({item.substr(0, colon), item.substr(colon + 1)});
      }
    }
    return out;
  };
  spec.horiz = pairs(g.h);
  spec.vert = pairs(g.v);
  std::size_t width = corridor ? g.n : 2;
  spec.initial = g.initial.empty()
                     ? std::vector<std::string>(width, spec.types.at(0))
                     : split_list(g.initial);
  if (corridor)
    spec.final_row = g.final_row.empty()
                         ? std::vector<std::string>(width, spec.types.at(0))
                         : split_list(g.final_row);
  return spec;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"access-limitation solver"};
  app.require_subcommand(1);
  Options opt;

  auto* eval_cmd = app.add_subcommand("eval", "evaluate a query");
  add_common_flags(eval_cmd, opt);
  eval_cmd->add_option("--query", opt.query);

  auto* certain_cmd = app.add_subcommand("certain", "certain answer");
  add_common_flags(certain_cmd, opt);
  certain_cmd->add_option("--query", opt.query);

  auto* ir_cmd = app.add_subcommand("ir", "immediate relevance");
  add_common_flags(ir_cmd, opt);
  ir_cmd->add_option("--query", opt.query);
  ir_cmd->add_option("--access", opt.access_expr);

  auto* ltr_cmd = app.add_subcommand("ltr", "long-term relevance");
  add_common_flags(ltr_cmd, opt);
  ltr_cmd->add_option("--query", opt.query);
  ltr_cmd->add_option("--access", opt.access_expr);
  ltr_cmd->add_option("--algo", opt.algo)
      ->check(CLI::IsMember({"auto", "independent", "single-occurrence",
                             "bounded", "via-containment"}));
  add_budget_flags(ltr_cmd, opt);

  auto* contain_cmd = app.add_subcommand("contain", "containment");
  add_common_flags(contain_cmd, opt);
  contain_cmd->add_option("--q1", opt.q1);
  contain_cmd->add_option("--q2", opt.q2);
  add_budget_flags(contain_cmd, opt);

  auto* classic_cmd = app.add_subcommand("classic-contain",
                                         "classical containment");
  add_common_flags(classic_cmd, opt);
  classic_cmd->add_option("--q1", opt.q1);
  classic_cmd->add_option("--q2", opt.q2);

  auto* reduce_cmd = app.add_subcommand("reduce", "instance transformers");
  std::string reduce_kind;
  add_common_flags(reduce_cmd, opt);
  reduce_cmd->add_option("--kind", reduce_kind)
      ->required()
      ->check(CLI::IsMember(
          {"bool-arity", "to-ltr-pq", "to-ltr-cq", "to-containment"}));
  reduce_cmd->add_option("--query", opt.query);
  reduce_cmd->add_option("--q1", opt.q1);
  reduce_cmd->add_option("--q2", opt.q2);

  auto* gen_cmd = app.add_subcommand("gen", "instance generators");
  gen_cmd->require_subcommand(1);
  GenTiling gt;
  auto* grid_cmd = gen_cmd->add_subcommand("tiling-grid");
  grid_cmd->set_help_flag("--help", "print help");
  grid_cmd->add_option("--n", gt.n);
  grid_cmd->add_option("--tiles", gt.tiles);
  grid_cmd->add_option("--h", gt.h);
  grid_cmd->add_option("--v", gt.v);
  grid_cmd->add_option("--initial", gt.initial);
  auto* corridor_cmd = gen_cmd->add_subcommand("tiling-corridor");
  corridor_cmd->set_help_flag("--help", "print help");
  corridor_cmd->add_option("--n", gt.n);
  corridor_cmd->add_option("--tiles", gt.tiles);
  corridor_cmd->add_option("--h", gt.h);
  corridor_cmd->add_option("--v", gt.v);
  corridor_cmd->add_option("--initial", gt.initial);
  corridor_cmd->add_option("--final", gt.final_row);
  corridor_cmd->add_flag("--as-cq", gt.as_cq);
  auto* random_cmd = gen_cmd->add_subcommand("random");
  alp::RandomLimits limits;
  random_cmd->add_option("--seed", opt.seed);
  random_cmd->add_option("--max-relations", limits.max_relations);
  random_cmd->add_option("--max-arity", limits.max_arity);
  random_cmd->add_option("--max-facts", limits.max_facts);
  random_cmd->add_flag("--cq-only", limits.cq_only);
  random_cmd->add_flag("--independent-only", limits.independent_only);

  auto* oracle_cmd = app.add_subcommand("oracle", "brute-force oracles");
  std::string oracle_which = "ir";
  alp::OracleLimits olimits;
  add_common_flags(oracle_cmd, opt);
  oracle_cmd->add_option("--which", oracle_which)
      ->check(CLI::IsMember({"reachable", "ir", "ltr", "contain", "certain"}));
  oracle_cmd->add_option("--query", opt.query);
  oracle_cmd->add_option("--q1", opt.q1);
  oracle_cmd->add_option("--q2", opt.q2);
  oracle_cmd->add_option("--access", opt.access_expr);
  oracle_cmd->add_option("--path-length", olimits.max_path_length);
  oracle_cmd->add_option("--fresh", olimits.max_fresh);
  oracle_cmd->add_option("--response", olimits.max_response);
  oracle_cmd->add_option("--extension-facts", olimits.max_extension_facts);

  auto* fuzz_cmd = app.add_subcommand("fuzz", "differential fuzzing");
  std::string fuzz_kind = "ir";
  std::size_t fuzz_count = 100;
  fuzz_cmd->add_option("--kind", fuzz_kind)
      ->check(CLI::IsMember({"ir", "ltr", "contain"}));
  fuzz_cmd->add_option("--count", fuzz_count);
  fuzz_cmd->add_option("--seed", opt.seed);

  auto* check_cmd = app.add_subcommand("check-certificate", "");
  check_cmd->group("");  // hidden
  std::string verdict_path;
  add_common_flags(check_cmd, opt);
  check_cmd->add_option("--verdict", verdict_path)->required();
  check_cmd->add_option("--query", opt.query);
  check_cmd->add_option("--q1", opt.q1);
  check_cmd->add_option("--q2", opt.q2);
  check_cmd->add_option("--access", opt.access_expr);

  CLI11_PARSE(app, argc, argv);

  try {
    if (grid_cmd->parsed() || corridor_cmd->parsed() || random_cmd->parsed()) {
      alp::ProblemInstance inst;
      if (grid_cmd->parsed())
        inst = alp::gen_tiling_grid(resolve_spec(gt, false));
      else if (corridor_cmd->parsed())
        inst = alp::gen_tiling_corridor(resolve_spec(gt, true), gt.as_cq);
      else
        inst = alp::gen_random_instance(opt.seed, limits);
      std::cout << alp::print_problem(inst);
      return 0;
    }

    if (fuzz_cmd->parsed()) {
      alp::RandomLimits fl;
      if (fuzz_kind == "ltr") {
        fl.independent_only = true;
        fl.max_relations = 2;
        fl.max_facts = 3;
      }
      std::vector<std::uint64_t> disagreements;
      for (std::size_t i = 0; i < fuzz_count; ++i) {
        std::uint64_t seed = opt.seed + i;
        alp::ProblemInstance inst =
            alp::gen_random_instance(seed, fl, fuzz_kind == "contain");
        const alp::Query& q = inst.queries[0].body;
        // Oracle limits sized to cover the exact procedure's witnesses.
        alp::OracleLimits ol;
        ol.max_path_length = alp::collect_atoms(q).size() + 1;
        ol.max_response = alp::collect_atoms(q).size() + 1;
        ol.max_fresh = alp::collect_variables(q).size() + 1;
        bool agree = true;
        if (fuzz_kind == "ir") {
          agree = alp::decide_ir(q, *inst.access, inst.conf, inst.schema)
                      .yes() ==
                  alp::oracle_ir(q, *inst.access, inst.conf, inst.schema, ol);
        } else if (fuzz_kind == "ltr") {
          agree = alp::decide_ltr_independent(q, *inst.access, inst.conf,
                                              inst.schema)
                      .yes() ==
                  alp::oracle_ltr(q, *inst.access, inst.conf, inst.schema, ol);
        } else {
          ol.max_path_length = 3;
          ol.max_fresh = 2;
          ol.max_response = 1;
          alp::Budget b;
          b.max_facts = ol.max_path_length;
          b.max_fresh = ol.max_fresh;
          b.max_depth = ol.max_path_length;
          const alp::Query& q2 = inst.queries[1].body;
          alp::Verdict v = alp::decide_containment_bounded(q, q2, inst.conf,
                                                           inst.schema, b);
          bool oracle = alp::oracle_containment(q, q2, inst.conf, inst.schema,
                                                ol);
          agree = !v.decided() || v.yes() == oracle;
        }
        if (!agree) disagreements.push_back(seed);
      }
      json j;
      j["command"] = "fuzz";
      j["kind"] = fuzz_kind;
      j["checked"] = fuzz_count;
      j["disagreements"] = disagreements;
      std::cout << j.dump(2) << "\n";
      return disagreements.empty() ? 0 : 1;
    }

    std::string text = read_input(opt.file);
    alp::ProblemInstance inst =
        alp::parse_problem(text, opt.admit_query_constants);
    auto problems = alp::validate_instance(inst);
    if (!problems.empty()) {
      for (const auto& p : problems) std::cerr << "error: " << p << "\n";
      return 2;
    }
    std::string digest = fnv1a(alp::print_problem(inst));

    if (eval_cmd->parsed() || certain_cmd->parsed()) {
      const alp::Query& q = inst.query(opt.query).body;
      alp::EvalResult r = alp::eval(q, inst.conf, inst.schema);
      alp::Verdict v = alp::Verdict::make(
          r.holds ? alp::Outcome::Yes : alp::Outcome::No,
          r.holds ? alp::Certificate{r.witness} : alp::Certificate{});
      v.stats.exhaustive = true;
      return emit(eval_cmd->parsed() ? "eval" : "certain", digest, v, nullptr);
    }

    if (ir_cmd->parsed()) {
      const alp::Query& q = inst.query(opt.query).body;
      alp::Access access = resolve_access(opt, inst);
      alp::Verdict v = alp::decide_ir(q, access, inst.conf, inst.schema);
      return emit("ir", digest, v, nullptr);
    }

    if (ltr_cmd->parsed()) {
      const alp::Query& q = inst.query(opt.query).body;
      alp::Access access = resolve_access(opt, inst);
      alp::Budget budget = resolve_budget(opt, q);
      std::string algo = opt.algo;
      if (algo == "auto")
        algo = all_independent(inst.schema) ? "independent" : "bounded";
      alp::Verdict v;
      if (algo == "independent") {
        v = alp::decide_ltr_independent(q, access, inst.conf, inst.schema);
      } else if (algo == "single-occurrence") {
        v = alp::decide_ltr_single_occurrence(q, access, inst.conf,
                                              inst.schema);
      } else if (algo == "via-containment") {
        v = alp::ltr_via_containment_cq(
            q, access, inst.conf, inst.schema,
            [](const alp::Query& a, const alp::Query& b,
               const alp::Configuration& c, const alp::Schema& s,
               const alp::Budget& bu) {
              return alp::decide_containment_bounded(a, b, c, s, bu);
            },
            budget);
      } else {
        v = alp::decide_ltr_dependent_bounded(q, access, inst.conf,
                                              inst.schema, budget,
                                              opt.chain_heuristic);
      }
      return emit("ltr", digest, v, &budget);
    }

    if (contain_cmd->parsed()) {
      const alp::Query& q1 = inst.query(opt.q1).body;
      const alp::Query& q2 = inst.query(opt.q2).body;
      alp::Budget budget = resolve_budget(opt, q1);
      alp::Verdict v =
          alp::decide_containment_bounded(q1, q2, inst.conf, inst.schema,
                                          budget);
      return emit("contain", digest, v, &budget);
    }

    if (classic_cmd->parsed()) {
      const alp::Query& q1 = inst.query(opt.q1).body;
      const alp::Query& q2 = inst.query(opt.q2).body;
      bool yes = alp::classical_contains(q1, q2, inst.schema);
      alp::Verdict v =
          alp::Verdict::make(yes ? alp::Outcome::Yes : alp::Outcome::No);
      v.stats.exhaustive = true;
      return emit("classic-contain", digest, v, nullptr);
    }

    if (reduce_cmd->parsed()) {
      if (reduce_kind == "bool-arity") {
        auto outs = alp::boolean_arity_reduction(inst, opt.query);
        for (std::size_t i = 0; i < outs.size(); ++i) {
          if (i) std::cout << "# --\n";
          std::cout << alp::print_problem(outs[i]);
        }
      } else if (reduce_kind == "to-ltr-pq" || reduce_kind == "to-ltr-cq") {
        auto out = alp::containment_to_ltr(inst, opt.q1, opt.q2,
                                           reduce_kind == "to-ltr-pq"
                                               ? alp::QueryLanguage::Pq
                                               : alp::QueryLanguage::Cq);
        std::cout << alp::print_problem(out);
      } else {
        auto out = alp::ltr_to_containment(inst, opt.query);
        std::cout << alp::print_problem(out);
      }
      return 0;
    }

    if (oracle_cmd->parsed()) {
      alp::Verdict v;
      v.stats.exhaustive = true;
      if (oracle_which == "reachable") {
        auto reached =
            alp::oracle_reachable(inst.conf, inst.schema, olimits);
        json j;
        j["command"] = "oracle";
        j["which"] = "reachable";
        j["digest"] = digest;
        j["count"] = reached.size();
        std::cout << j.dump(2) << "\n";
        return 0;
      }
      bool yes = false;
      if (oracle_which == "ir") {
        yes = alp::oracle_ir(inst.query(opt.query).body,
                             resolve_access(opt, inst), inst.conf, inst.schema,
                             olimits);
      } else if (oracle_which == "ltr") {
        yes = alp::oracle_ltr(inst.query(opt.query).body,
                              resolve_access(opt, inst), inst.conf,
                              inst.schema, olimits);
      } else if (oracle_which == "contain") {
        yes = alp::oracle_containment(inst.query(opt.q1).body,
                                      inst.query(opt.q2).body, inst.conf,
                                      inst.schema, olimits);
      } else {
        yes = alp::oracle_certain(inst.query(opt.query).body, inst.conf,
                                  inst.schema, olimits);
      }
      v.outcome = yes ? alp::Outcome::Yes : alp::Outcome::No;
      return emit("oracle-" + oracle_which, digest, v, nullptr);
    }

    if (check_cmd->parsed()) {
      json verdict = json::parse(read_input(verdict_path));
      std::string command = verdict.at("command").get<std::string>();
      const json& cert = verdict.at("certificate");
      bool valid = false;
      if (cert.is_null()) {
        valid = false;
      } else if (command == "ir") {
        const alp::Query& q = inst.query(opt.query).body;
        alp::Access access = resolve_access(opt, inst);
        alp::Response resp;
        for (const auto& fj : cert.at("facts"))
          resp.facts.insert(fact_from_json(fj));
        try {
          alp::Configuration after =
              alp::apply_response(inst.conf, access, resp, inst.schema);
          valid = !alp::holds(q, inst.conf, inst.schema) &&
                  alp::holds(q, after, inst.schema);
        } catch (const alp::ModelError&) {
          valid = false;
        }
      } else if (command == "ltr") {
        const alp::Query& q = inst.query(opt.query).body;
        alp::Access access = resolve_access(opt, inst);
        alp::Path p = path_from_json(cert, inst.conf, inst.schema);
        if (alp::path_is_valid(p, inst.schema) && !p.steps.empty() &&
            p.steps[0].access == access) {
          alp::Configuration full = alp::replay_path(p, inst.schema);
          alp::Configuration cut =
              alp::replay_path(alp::truncate_path(p, inst.schema), inst.schema);
          valid = alp::holds(q, full, inst.schema) !=
                  alp::holds(q, cut, inst.schema);
        }
      } else if (command == "contain") {
        const alp::Query& q1 = inst.query(opt.q1).body;
        const alp::Query& q2 = inst.query(opt.q2).body;
        alp::Path p = path_from_json(cert, inst.conf, inst.schema);
        if (alp::path_is_valid(p, inst.schema)) {
          alp::Configuration end = alp::replay_path(p, inst.schema);
          valid = alp::holds(q1, end, inst.schema) &&
                  !alp::holds(q2, end, inst.schema);
        }
      }
      json j;
      j["command"] = "check-certificate";
      j["digest"] = digest;
      j["valid"] = valid;
      std::cout << j.dump(2) << "\n";
      return valid ? 0 : 1;
    }
  } catch (const alp::ParseError& e) {
    std::cerr << "parse error at " << e.line << ":" << e.column << ": "
              << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
