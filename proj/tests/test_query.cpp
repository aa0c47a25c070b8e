#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "alp/format.hpp"
#include "alp/query.hpp"

using namespace alp;

namespace {

const char* kBase = R"(
domain D
relation R(a:D, b:D)
relation S(a:D)
access mR on R inputs() dependent
fact R("u", "v")
fact R("v", "v")
fact S("v")
query Qand = R(x, y) & S(y)
query Qor = S(x) | R(x, x)
query Qmix = (S(x) | R(x, y)) & R(y, y)
)";

}  // namespace

TEST_CASE("to_dnf distributes disjunction over conjunction") {
  auto inst = parse_problem(kBase);
  auto dnf = to_dnf(inst.query("Qmix").body);
  REQUIRE(dnf.size() == 2);
  CHECK(dnf[0].size() == 2);
  CHECK(dnf[1].size() == 2);

  // Round-trip through the canonical tree.
  Query q = dnf_to_query(dnf);
  CHECK(to_dnf(q) == dnf);
}

TEST_CASE("dnf_to_query canonicalizes single-atom and single-disjunct shapes") {
  Atom a{"S", {Term::var("x")}};
  Query single = dnf_to_query({{a}});
  CHECK(single.kind == Query::AtomNode);

  Query empty_and = dnf_to_query({{}});  // true
  CHECK(holds(empty_and, {}, {}));
  Query empty_or = dnf_to_query({});  // false
  CHECK(!holds(empty_or, {}, {}));
}

TEST_CASE("eval finds homomorphisms and certain equals holds") {
  auto inst = parse_problem(kBase);
  CHECK(holds(inst.query("Qand").body, inst.conf, inst.schema));
  CHECK(holds(inst.query("Qor").body, inst.conf, inst.schema));
  CHECK(holds(inst.query("Qmix").body, inst.conf, inst.schema));
  CHECK(certain(inst.query("Qand").body, inst.conf, inst.schema));

  EvalResult r = eval(inst.query("Qand").body, inst.conf, inst.schema);
  REQUIRE(r.holds);
  CHECK(r.witness.at("y") == "v");
}

TEST_CASE("find_hom honors seeded assignments") {
  auto inst = parse_problem(kBase);
  ConjunctiveQuery cq = to_dnf(inst.query("Qand").body)[0];
  auto h1 = find_hom(cq, inst.conf, inst.schema, {{"x", "u"}});
  REQUIRE(h1.has_value());
  CHECK(h1->at("x") == "u");
  auto h2 = find_hom(cq, inst.conf, inst.schema, {{"y", "u"}});
  CHECK(!h2.has_value());
}

TEST_CASE("constants in atoms match only themselves") {
  auto inst = parse_problem(R"(
domain D
relation R(a:D, b:D)
access mR on R inputs() dependent
const "u":D
fact R("u", "v")
query Q1 = R("u", z)
query Q2 = R(z, "u")
)");
  CHECK(holds(inst.query("Q1").body, inst.conf, inst.schema));
  CHECK(!holds(inst.query("Q2").body, inst.conf, inst.schema));
}

TEST_CASE("classical containment by canonical database freezing") {
  auto inst = parse_problem(R"(
domain D
relation R(a:D, b:D)
access mR on R inputs() dependent
query Qxx = R(x, x)
query Qxy = R(x, y)
query Qsym = R(x, y) & R(y, x)
)");
  const Query& qxx = inst.query("Qxx").body;
  const Query& qxy = inst.query("Qxy").body;
  const Query& qsym = inst.query("Qsym").body;
  CHECK(classical_contains(qxx, qxy, inst.schema));
  CHECK(!classical_contains(qxy, qxx, inst.schema));
  CHECK(classical_contains(qxx, qsym, inst.schema));
  CHECK(classical_contains(qsym, qxy, inst.schema));
  CHECK(!classical_contains(qxy, qsym, inst.schema));
}

TEST_CASE("classical containment handles disjunction per disjunct") {
  auto inst = parse_problem(R"(
domain D
relation R(a:D, b:D)
relation S(a:D)
access mR on R inputs() dependent
query Qu = R(x, x) | S(y)
query Qv = R(x, y) | S(y)
)");
  CHECK(classical_contains(inst.query("Qu").body, inst.query("Qv").body,
                           inst.schema));
  CHECK(!classical_contains(inst.query("Qv").body, inst.query("Qu").body,
                            inst.schema));
}

TEST_CASE("variable_domains rejects domain clashes") {
  auto inst = parse_problem(R"(
domain D
domain E
relation R(a:D)
relation S(a:E)
access mR on R inputs() dependent
query Q = R(x)
)");
  Query clash = Query::make_and(
      {Query::make_atom({"R", {Term::var("x")}}),
       Query::make_atom({"S", {Term::var("x")}})});
  CHECK_THROWS(variable_domains(clash, inst.schema));
}

TEST_CASE("validate_query reports arity and admission problems") {
  auto inst = parse_problem(R"(
domain D
relation R(a:D, b:D)
access mR on R inputs() dependent
fact R("u", "v")
)");
  Query bad_arity = Query::make_atom({"R", {Term::var("x")}});
  CHECK(!validate_query(bad_arity, inst.schema, inst.conf).empty());
  Query bad_const =
      Query::make_atom({"R", {Term::con("nope"), Term::var("x")}});
  CHECK(!validate_query(bad_const, inst.schema, inst.conf).empty());
  Query good = Query::make_atom({"R", {Term::con("u"), Term::var("x")}});
  CHECK(validate_query(good, inst.schema, inst.conf).empty());
}

TEST_CASE("collect_variables is order of first occurrence, deduplicated") {
  auto inst = parse_problem(kBase);
  auto vars = collect_variables(inst.query("Qmix").body);
  CHECK(vars == std::vector<std::string>{"x", "y"});
}
