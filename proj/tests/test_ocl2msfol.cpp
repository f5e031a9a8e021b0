#include <unistd.h>

#include "doctest.h"
#include "oclsql/ocl2msfol.hpp"
#include "solver_helper.hpp"
#include "university.hpp"

using namespace oclsql;
using namespace oclsql::o2f;
namespace mk = msfol::mk;

namespace {

DataModel dm() { return load_data_model(testdata::kUniversityJson); }

std::string axioms_text(const msfol::Theory& t) {
  std::string out;
  for (const auto& a : t.axioms()) out += msfol::to_smt(a) + "\n";
  return out;
}

}  // namespace

TEST_CASE("the data theory declares predicates, functions and the distinguished constants") {
  msfol::Theory t = o2f_data(dm());
  for (const char* name : {"nullInt", "invalInt", "nullString", "invalString", "nullClassifier",
                           "invalClassifier", "Student", "Lecturer", "name", "age", "Enrolment"})
    CHECK(t.has_declaration(name));
  const msfol::Declaration* age = t.find_declaration("age");
  CHECK(age->params == std::vector<msfol::Sort>{msfol::Sort::Classifier});
  CHECK(age->result == msfol::Sort::Int);

  std::string text = axioms_text(t);
  CHECK(text.find("(distinct nullInt invalInt)") != std::string::npos);
  CHECK(text.find("(not (Student nullClassifier))") != std::string::npos);
  // Class disjointness and association typing.
  CHECK(text.find("(not (and (Lecturer c) (Student c)))") != std::string::npos);
  CHECK(text.find("(=> (Enrolment c d) (and (Student c) (Lecturer d)))") != std::string::npos);
}

TEST_CASE("the empty model yields only sorts, constants and distinctness") {
  msfol::Theory t = o2f_data(load_data_model("{}"));
  CHECK(t.declarations().size() == 6);
  CHECK(t.axioms().size() == 3);
}

TEST_CASE("class-typed attributes map to Classifier-valued functions with typing frames") {
  DataModel model = load_data_model(R"({
    "classes": {"A": [], "B": [{"name": "buddy", "type": "A"}]}})");
  msfol::Theory t = o2f_data(model);
  const msfol::Declaration* buddy = t.find_declaration("buddy");
  REQUIRE(buddy != nullptr);
  CHECK(buddy->result == msfol::Sort::Classifier);
  std::string text = axioms_text(t);
  CHECK(text.find("(or (A (buddy c)) (= (buddy c) nullClassifier))") != std::string::npos);
}

TEST_CASE("free variable declarations") {
  DataModel model = dm();
  SUBCASE("object variables are constrained to their class") {
    FreeDecls frees = declare_frees({{"self", "Student"}}, model);
    CHECK(frees.theory.has_declaration("self"));
    CHECK(axioms_text(frees.theory).find("(Student self)") != std::string::npos);
  }
  SUBCASE("string variables carry no constraint") {
    FreeDecls frees = declare_frees({{"user", "String"}}, model);
    CHECK(frees.theory.has_declaration("user"));
    CHECK(frees.theory.axioms().empty());
  }
  SUBCASE("empty list declares nothing") {
    FreeDecls frees = declare_frees({}, model);
    CHECK(frees.theory.declarations().empty());
  }
}

TEST_CASE("notEmpty over allInstances produces the defined set predicate") {
  DataModel model = dm();
  FreeDecls frees = declare_frees({}, model);
  Translator tr(model, frees);
  ocl::ExprPtr e = ocl::parse_ocl("Student.allInstances()->notEmpty()", model, {});
  msfol::TermPtr t = tr.o2f_true(e);
  std::string pred = "def_" + msfol::sanitize_symbol("Student.allInstances()");
  CHECK(msfol::to_smt(t) == "(exists ((x Classifier)) (" + pred + " x))");
  std::string defs = axioms_text(tr.definitions());
  CHECK(defs.find("(= (" + pred + " x) (Student x))") != std::string::npos);
}

TEST_CASE("attribute access translates to function application") {
  DataModel model = dm();
  FreeDecls frees = declare_frees({{"p", "Student"}}, model);
  Translator tr(model, frees);
  ocl::ExprPtr e = ocl::parse_ocl("p.age >= 18", model, {{"p", "Student"}});
  std::string t = msfol::to_smt(tr.o2f_true(e));
  CHECK(t.find("(age p)") != std::string::npos);
  CHECK(t.find("(>= (age p) 18)") != std::string::npos);
}

TEST_CASE("true literal maps to the true formula") {
  DataModel model = dm();
  FreeDecls frees = declare_frees({}, model);
  Translator tr(model, frees);
  CHECK(msfol::to_smt(tr.o2f_true(ocl::parse_ocl("true", model, {}))) == "true");
  CHECK(msfol::to_smt(tr.o2f_false(ocl::parse_ocl("true", model, {}))) == "false");
}

TEST_CASE("integer and string literals acquire distinctness axioms") {
  DataModel model = dm();
  FreeDecls frees = declare_frees({{"self", "Student"}}, model);
  Translator tr(model, frees);
  tr.o2f_true(ocl::parse_ocl("self.age >= 18 and self.name = 'a'", model, {{"self", "Student"}}));
  std::string defs = axioms_text(tr.definitions());
  CHECK(defs.find("(and (not (= 18 nullInt)) (not (= 18 invalInt)))") != std::string::npos);
  CHECK(defs.find("(and (not (= \"a\" nullString)) (not (= \"a\" invalString)))") !=
        std::string::npos);
}

TEST_CASE("select bodies reuse the paper-shaped definition") {
  DataModel model = dm();
  FreeDecls frees = declare_frees({}, model);
  Translator tr(model, frees);
  ocl::ExprPtr e = ocl::parse_ocl(
      "Student.allInstances()->select(s | s.age.oclIsUndefined())->notEmpty()", model, {});
  tr.o2f_true(e);
  std::string defs = axioms_text(tr.definitions());
  // The selected set is the source restricted to elements whose body is true.
  CHECK(defs.find("(= (age s) nullInt)") != std::string::npos);
  CHECK(defs.find("(= s nullClassifier)") != std::string::npos);
}

TEST_CASE("translating the same expression twice reuses the definition") {
  DataModel model = dm();
  FreeDecls frees = declare_frees({}, model);
  Translator tr(model, frees);
  ocl::ExprPtr e = ocl::parse_ocl("Student.allInstances()->notEmpty()", model, {});
  tr.o2f_true(e);
  size_t axioms = tr.definitions().axioms().size();
  tr.o2f_false(e);
  tr.o2f_true(e);
  CHECK(tr.definitions().axioms().size() == axioms);
}

TEST_CASE("parameterized sets under iterators quantify over their parameters") {
  DataModel model = dm();
  FreeDecls frees = declare_frees({}, model);
  Translator tr(model, frees);
  ocl::ExprPtr e = ocl::parse_ocl(
      "Student.allInstances()->forAll(s | s.lecturers->isEmpty())", model, {});
  tr.o2f_true(e);
  std::string defs = axioms_text(tr.definitions());
  // s.lecturers is defined relative to the bound student s.
  std::string pred = "def_" + msfol::sanitize_symbol("s.lecturers");
  CHECK(defs.find("(= (" + pred + " s x) (Enrolment s x))") != std::string::npos);
}

TEST_CASE("the four valuations are pairwise exclusive and jointly exhaustive") {
  DataModel model = dm();
  const std::vector<TypedVar> vars = {{"x", "Boolean"}, {"y", "Boolean"}, {"self", "Student"},
                                      {"user", "String"}, {"n", "Integer"}};
  const std::vector<std::string> exprs = {
      "x and y",
      "x or (not y)",
      "self.age >= 18",
      "self.name = user",
      "user <> null",
      "n < 3 implies x",
      "caller_free.students->isEmpty()",
      "Student.allInstances()->exists(s | s.age > n)",
      "self.age.oclIsUndefined()",
      "null = null",
  };
  std::vector<TypedVar> all_vars = vars;
  all_vars.push_back({"caller_free", "Lecturer"});

  for (const auto& text : exprs) {
    CAPTURE(text);
    FreeDecls frees = declare_frees(all_vars, model);
    Translator tr(model, frees);
    ocl::ExprPtr e = ocl::parse_ocl(text, model, all_vars);
    msfol::TermPtr t = tr.o2f_true(e), f = tr.o2f_false(e), n = tr.o2f_null(e),
                   i = tr.o2f_inval(e);
    msfol::Theory base = theory_union(o2f_data(model), frees.theory);
    base = theory_union(base, tr.definitions());

    const std::vector<std::pair<std::string, msfol::TermPtr>> pairs = {
        {"tf", mk::and_({t, f})}, {"tn", mk::and_({t, n})}, {"ti", mk::and_({t, i})},
        {"fn", mk::and_({f, n})}, {"fi", mk::and_({f, i})}, {"ni", mk::and_({n, i})},
        {"none", mk::not_(mk::or_({t, f, n, i}))}};
    for (const auto& [tag, formula] : pairs) {
      CAPTURE(tag);
      msfol::Theory problem = base;
      problem.add_goal(formula);
      CHECK(testsolver::check(problem, "excl") == prover::SolverResult::Unsat);
    }
  }
}
