#include <benchmark/benchmark.h>

#include "alp/generators.hpp"
#include "alp/relevance.hpp"

namespace {

// Bank-style fixture: employees, offices, approvals scaled by `size`.
alp::ProblemInstance bank_instance(std::size_t size) {
  alp::ProblemInstance inst;
  alp::Schema& s = inst.schema;
  s.domains = {"Emp", "Off", "State"};
  s.relations.push_back({"Employee", {{"eid", "Emp"}, {"office", "Off"}}});
  s.relations.push_back({"Office", {{"office", "Off"}, {"state", "State"}}});
  s.relations.push_back({"Approval", {{"state", "State"}}});
  s.methods.push_back(
      {"EmpOffAcc", "Employee", {"eid"}, alp::AccessMode::Dependent});
  s.methods.push_back(
      {"OfficeInfoAcc", "Office", {"office"}, alp::AccessMode::Dependent});
  s.methods.push_back(
      {"StateApprAcc", "Approval", {"state"}, alp::AccessMode::Dependent});
  for (std::size_t i = 0; i < size; ++i) {
    std::string e = "e" + std::to_string(i);
    std::string o = "o" + std::to_string(i % (size / 10 + 1));
    std::string st = "s" + std::to_string(i % 7);
    inst.conf.insert({"Employee", {e, o}});
    inst.conf.insert({"Office", {o, st}});
    if (i % 3 == 0) inst.conf.insert({"Approval", {st}});
  }
  alp::Atom a1{"Employee", {alp::Term::var("x"), alp::Term::var("o")}};
  alp::Atom a2{"Office", {alp::Term::var("o"), alp::Term::var("s")}};
  alp::Atom a3{"Approval", {alp::Term::var("s")}};
  inst.queries.push_back(
      {"Q",
       alp::Query::make_and({alp::Query::make_atom(a1),
                             alp::Query::make_atom(a2),
                             alp::Query::make_atom(a3)}),
       {}});
  return inst;
}

void bench_eval(benchmark::State& state) {
  auto inst = bank_instance(static_cast<std::size_t>(state.range(0)));
  const alp::Query& q = inst.queries[0].body;
  for (auto _ : state)
    benchmark::DoNotOptimize(alp::holds(q, inst.conf, inst.schema));
}
BENCHMARK(bench_eval)->Arg(100)->Arg(1000)->Arg(10000);

void bench_decide_ir(benchmark::State& state) {
  auto inst = bank_instance(static_cast<std::size_t>(state.range(0)));
  const alp::Query& q = inst.queries[0].body;
  alp::Access access{"EmpOffAcc", {{"eid", "fresh_emp"}}};
  inst.conf.admitted.insert({"fresh_emp", "Emp"});
  for (auto _ : state)
    benchmark::DoNotOptimize(
        alp::decide_ir(q, access, inst.conf, inst.schema));
}
BENCHMARK(bench_decide_ir)->Arg(100)->Arg(1000)->Arg(10000);

}  // namespace

BENCHMARK_MAIN();
