#include "doctest.h"
#include "oclsql/prover.hpp"
#include "oclsql/sql2msfol.hpp"
#include "solver_helper.hpp"
#include "university.hpp"

using namespace oclsql;
using prover::SolverResult;
using prover::TheoryKind;
using prover::Verdict;

namespace {

prover::CorrectnessProblem make_problem(const testdata::Example& ex, bool with_assumptions) {
  prover::CorrectnessProblem p;
  p.dm = load_data_model(testdata::kUniversityJson);
  p.schema = rel::o2s(p.dm);
  p.frees = ex.vars;
  p.expr = ocl::parse_ocl(ex.ocl, p.dm, ex.vars);
  if (with_assumptions)
    for (const auto& a : ex.assumptions)
      p.assumptions.push_back(ocl::parse_ocl(a, p.dm, ex.vars));
  p.sel = sql::parse_select(ex.sql, p.schema, ex.vars);
  return p;
}

testdata::Example example(const std::string& name) {
  for (const auto& e : testdata::examples())
    if (e.name == name) return e;
  fail("tests", "unknown example " + name);
}

}  // namespace

TEST_CASE("problems must have exactly one select-item and declared variables") {
  prover::CorrectnessProblem p = make_problem(example("exm3"), true);
  CHECK_NOTHROW(p.validate());

  prover::CorrectnessProblem two_items = p;
  two_items.sel = sql::parse_select("SELECT age, name FROM Student", p.schema, p.frees);
  CHECK_THROWS_AS(two_items.validate(), Error);

  prover::CorrectnessProblem missing_var = p;
  missing_var.frees.clear();
  CHECK_THROWS_AS(missing_var.validate(), Error);
}

TEST_CASE("theory shapes match their refutation goals") {
  prover::CorrectnessProblem p = make_problem(example("exm3"), true);

  msfol::Theory c1 = prover::build_theory(TheoryKind::C1, p);
  REQUIRE(c1.goals().size() == 1);
  CHECK(msfol::to_smt(c1.goals()[0]) ==
        "(not (exists ((x Int)) (and (index_sel x) (forall ((y Int)) "
        "(=> (not (= y x)) (not (index_sel y)))))))");

  msfol::Theory c2 = prover::build_theory(TheoryKind::C2, p);
  REQUIRE(c2.goals().size() == 1);
  std::string c2_goal = msfol::to_smt(c2.goals()[0]);
  CHECK(c2_goal.find("(not (forall ((x Int)) (=> (index_sel x)") == 0);
  // The constraint itself is an axiom of C2.
  bool found = false;
  for (const auto& a : c2.axioms())
    if (msfol::to_smt(a).find("(>= (age self) 18)") != std::string::npos) found = true;
  CHECK(found);

  msfol::Theory c3 = prover::build_theory(TheoryKind::C3, p);
  REQUIRE(c3.goals().size() == 1);
  CHECK(msfol::to_smt(c3.goals()[0]).find("(not (and") == 0);
}

TEST_CASE("theory construction is byte-stable") {
  prover::CorrectnessProblem p = make_problem(example("exm5"), true);
  for (TheoryKind kind : {TheoryKind::C1, TheoryKind::C2, TheoryKind::C3}) {
    CHECK(msfol::emit_smtlib(prover::build_theory(kind, p)) ==
          msfol::emit_smtlib(prover::build_theory(kind, p)));
  }
}

TEST_CASE("assumptions are translated into every theory") {
  prover::CorrectnessProblem p = make_problem(example("exm5"), true);
  for (TheoryKind kind : {TheoryKind::C1, TheoryKind::C2, TheoryKind::C3}) {
    msfol::Theory t = prover::build_theory(kind, p);
    bool found = false;
    for (size_t i = 0; i < t.axioms().size(); ++i)
      if (t.axiom_comments()[i].find("assumption") == 0) found = true;
    CHECK(found);
  }
}

TEST_CASE("the verdict is the conjunction rule over solver results") {
  using R = SolverResult;
  CHECK(prover::decide({{"C1", R::Unsat}, {"C2", R::Unsat}, {"C3", R::Unsat}}).kind ==
        Verdict::Kind::Correct);
  Verdict incorrect = prover::decide({{"C1", R::Unsat}, {"C2", R::Sat}, {"C3", R::Unsat}});
  CHECK(incorrect.kind == Verdict::Kind::Incorrect);
  CHECK(incorrect.witness == "C2");
  Verdict inconclusive = prover::decide({{"C1", R::Unknown}, {"C2", R::Unsat}, {"C3", R::Unsat}});
  CHECK(inconclusive.kind == Verdict::Kind::Inconclusive);
  CHECK(inconclusive.unknowns == std::vector<std::string>{"C1"});
  // SAT wins over UNKNOWN, and obligations participate.
  CHECK(prover::decide({{"OB1", R::Sat}, {"C1", R::Unknown}}).witness == "OB1");
  CHECK(prover::decide({{"C1", R::Timeout}, {"C2", R::Unsat}, {"C3", R::Unsat}}).kind ==
        Verdict::Kind::Inconclusive);
}

TEST_CASE("a contradictory goal is unsatisfiable through the external solver") {
  msfol::Theory t;
  t.declare({"b", {}, msfol::Sort::Bool});
  t.add_goal(msfol::mk::and_({msfol::mk::sym("b", msfol::Sort::Bool),
                              msfol::mk::not_(msfol::mk::sym("b", msfol::Sort::Bool))}));
  CHECK(testsolver::check(t, "contradiction") == SolverResult::Unsat);
  msfol::Theory sat;
  sat.declare({"b", {}, msfol::Sort::Bool});
  sat.add_goal(msfol::mk::sym("b", msfol::Sort::Bool));
  CHECK(testsolver::check(sat, "satisfiable") == SolverResult::Sat);
}

TEST_CASE("solver launch failures are tool errors, not verdicts") {
  msfol::Theory t;
  prover::SolverConfig cfg;
  cfg.path = "/nonexistent/solver";
  CHECK_THROWS_AS(prover::check(t, cfg, "/tmp/oclsql-launch-test.smt2"), Error);
}

TEST_CASE("cross_check: a correct pair has no discrepancies") {
  prover::CorrectnessProblem p = make_problem(example("exm1"), true);
  EnumerationBounds bounds;
  bounds.max_objects_per_class = 1;
  prover::OracleReport report = prover::cross_check(p, bounds);
  CHECK(report.instances > 0);
  CHECK(report.discrepancies == 0);
  CHECK(report.row_count_witnesses == 0);
}

TEST_CASE("cross_check: dropping the non-null assumption exposes the null scenario") {
  prover::CorrectnessProblem with = make_problem(example("exm5"), true);
  prover::CorrectnessProblem without = make_problem(example("exm5"), false);
  EnumerationBounds bounds;
  bounds.max_objects_per_class = 1;
  CHECK(prover::cross_check(with, bounds).discrepancies == 0);
  prover::OracleReport bad = prover::cross_check(without, bounds);
  CHECK(bad.discrepancies >= 1);
  REQUIRE_FALSE(bad.samples.empty());
  CHECK(bad.samples[0].find("constraint true, statement not TRUE") != std::string::npos);
}

TEST_CASE("cross_check on a ground expression covers the empty instance") {
  prover::CorrectnessProblem p = make_problem(example("exm1"), true);
  EnumerationBounds bounds;
  bounds.max_objects_per_class = 0;
  prover::OracleReport report = prover::cross_check(p, bounds);
  CHECK(report.instances == 1);
  CHECK(report.discrepancies == 0);
}

TEST_CASE("obligations: one per scalar subselect, discharged before the theories") {
  prover::CorrectnessProblem p = make_problem(example("exm5"), true);
  auto obligations = prover::build_obligations(p);
  REQUIRE(obligations.size() == 1);
  CHECK(obligations[0].name == "OB1");
  CHECK(obligations[0].subject.find("SELECT") == 0);
  CHECK(prover::build_obligations(make_problem(example("exm3"), true)).empty());
}
