#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "alp/format.hpp"
#include "alp/reductions.hpp"
#include "support/reduction_checks.hpp"

using namespace alp;

TEST_CASE("boolean_arity_reduction enumerates adom plus one fresh per head") {
  ProblemInstance inst = parse_problem(R"(domain D
relation R(a:D, b:D)
access mR on R inputs() dependent
fact R("u", "v")
)");
  inst.queries.push_back({"Q",
                          Query::make_atom({"R", {Term::var("x"),
                                                  Term::var("y")}}),
                          {"x", "y"}});
  auto family = boolean_arity_reduction(inst, "Q");
  // Candidates per head position: {u, v, fresh} -> 9 instances.
  CHECK(family.size() == 9);
  for (const auto& member : family) {
    CHECK(member.query("Q").head.empty());
    CHECK(collect_variables(member.query("Q").body).empty());
    CHECK(validate_instance(member).empty());
  }
  // Some member admits a fresh constant that the input did not.
  bool saw_fresh = false;
  for (const auto& member : family)
    if (member.conf.admitted.size() > inst.conf.admitted.size())
      saw_fresh = true;
  CHECK(saw_fresh);
}

TEST_CASE("boolean_arity_reduction is the identity on Boolean queries") {
  ProblemInstance inst = parse_problem(R"(domain D
relation R(a:D)
access mR on R inputs() dependent
query Q = R(x)
)");
  auto family = boolean_arity_reduction(inst, "Q");
  REQUIRE(family.size() == 1);
  CHECK(family[0] == inst);
}

TEST_CASE("containment_to_ltr output is well formed in both languages") {
  ProblemInstance inst = parse_problem(R"(domain D
relation R(a:D, b:D)
relation S(a:D)
access mR on R inputs() independent
access mS on S inputs(a) independent
fact R("u", "v")
query Q = R(x, y)
query Q2 = S(x)
)");
  for (auto lang : {QueryLanguage::Pq, QueryLanguage::Cq}) {
    ProblemInstance out = containment_to_ltr(inst, "Q", "Q2", lang);
    CHECK(out.access.has_value());
    CHECK(validate_instance(out).empty());
    // The probe method is an independent Boolean access.
    const AccessMethod& m = out.schema.method(out.access->method);
    CHECK(m.mode == AccessMode::Independent);
    CHECK(out.schema.is_boolean(m));
  }
}

TEST_CASE("pq probe constant is deliberately not admitted") {
  ProblemInstance inst = parse_problem(R"(domain D
relation R(a:D)
relation S(a:D)
access mR on R inputs() independent
access mS on S inputs() independent
query Q = R(x)
query Q2 = S(x)
)");
  ProblemInstance out =
      containment_to_ltr(inst, "Q", "Q2", QueryLanguage::Pq);
  const AccessMethod& m = out.schema.method(out.access->method);
  const Relation& rel = out.schema.relation(m.relation);
  const std::string& c = out.access->binding.begin()->second;
  CHECK(out.conf.admitted.count({c, rel.attributes[0].domain}) == 0);
}

TEST_CASE("ltr_to_containment installs the binding relation") {
  ProblemInstance inst = parse_problem(R"(domain D
relation R(a:D, b:D)
access mR on R inputs(b) independent
const 5:D
fact R(3, 5)
query Q = R(x, 5)
use R(?, 5) via mR
)");
  ProblemInstance out = ltr_to_containment(inst, "Q");
  const Relation* bind = out.schema.find_relation("IsBind");
  REQUIRE(bind != nullptr);
  CHECK(bind->arity() == 1);
  CHECK(out.conf.contains({"IsBind", {"5"}}));
  CHECK(!out.schema.relation_has_method("IsBind"));
  // The rewritten query gains an IsBind alternative per R atom.
  const Query& qp = out.queries.back().body;
  bool has_isbind = false;
  for (const auto& a : collect_atoms(qp))
    if (a.relation == "IsBind") has_isbind = true;
  CHECK(has_isbind);
}

TEST_CASE("reduction outputs stay polynomial in the input size") {
  RandomLimits lim;
  lim.max_arity = 3;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    ProblemInstance inst = gen_random_instance(seed, lim, true);
    std::size_t s = instance_size(inst);
    std::size_t bound = 40 * (s + 20) * (s + 20);
    CAPTURE(seed);
    CHECK(instance_size(containment_to_ltr(inst, "Q", "Q2",
                                           QueryLanguage::Pq)) <= bound);
    CHECK(instance_size(ltr_to_containment(inst, "Q")) <= bound);
    if (inst.query("Q").body.is_cq() && inst.query("Q2").body.is_cq())
      CHECK(instance_size(containment_to_ltr(inst, "Q", "Q2",
                                             QueryLanguage::Cq)) <= bound);
  }
}

TEST_CASE("containment to ltr biconditional, pq") {
  auto res = support::check_containment_to_ltr(QueryLanguage::Pq, 40);
  CAPTURE(res.failure);
  CHECK(res.ok());
}

TEST_CASE("containment to ltr biconditional, cq") {
  auto res = support::check_containment_to_ltr(QueryLanguage::Cq, 25);
  CAPTURE(res.failure);
  CHECK(res.ok());
}

TEST_CASE("ltr to containment biconditional") {
  auto res = support::check_ltr_to_containment(40);
  CAPTURE(res.failure);
  CHECK(res.ok());
}

TEST_CASE("ltr via containment subset splitting") {
  auto res = support::check_ltr_via_containment(40);
  CAPTURE(res.failure);
  CHECK(res.ok());
}

TEST_CASE("cm view round trips") {
  auto res = support::check_cm_roundtrip(30);
  CAPTURE(res.failure);
  CHECK(res.ok());
  auto back = support::check_cm_to_config(30);
  CAPTURE(back.failure);
  CHECK(back.ok());
}

TEST_CASE("cm_to_config rejects open content and multi-method relations") {
  CmInstance cm;
  cm.schema.domains = {"D"};
  cm.schema.relations.push_back({"R", {{"a", "D"}}});
  cm.schema.methods.push_back({"m1", "R", {}, AccessMode::Dependent});
  cm.schema.methods.push_back({"m2", "R", {}, AccessMode::Dependent});
  cm.queries.push_back({"Q", Query::make_atom({"R", {Term::var("x")}}), {}});
  cm.queries.push_back({"Q2", Query::make_atom({"R", {Term::var("x")}}), {}});
  CHECK_THROWS_AS(cm_to_config(cm), ModelError);
  cm.schema.methods.pop_back();
  CHECK_NOTHROW(cm_to_config(cm));
  cm.open.push_back({"R", {{"R", {"u"}}}, {}});
  CHECK_THROWS_AS(cm_to_config(cm), ModelError);
}
