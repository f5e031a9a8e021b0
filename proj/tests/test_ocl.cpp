#include "doctest.h"
#include "oclsql/ocl_ast.hpp"
#include "oclsql/ocl_eval.hpp"
#include "university.hpp"

using namespace oclsql;
using namespace oclsql::ocl;

namespace {

DataModel dm() { return load_data_model(testdata::kUniversityJson); }

Value eval_text(const std::string& text, const ObjectModel& om, const Assignment& sigma,
                const std::vector<TypedVar>& vars) {
  DataModel model = dm();
  return eval_ocl(om, sigma, parse_ocl(text, model, vars));
}

B4 truth_text(const std::string& text, const ObjectModel& om = {}, const Assignment& sigma = {},
              const std::vector<TypedVar>& vars = {}) {
  return truth_of(eval_text(text, om, sigma, vars));
}

}  // namespace

TEST_CASE("parser recognizes the studied constraint shapes") {
  DataModel model = dm();
  ExprPtr age = parse_ocl("self.age >= 18", model, {{"self", "Student"}});
  CHECK(age->kind == Expr::Kind::Compare);
  CHECK(age->cmp == Expr::CmpKind::Ge);
  CHECK(age->src->kind == Expr::Kind::AttrAccess);

  ExprPtr empty = parse_ocl("caller.students->isEmpty()", model, {{"caller", "Lecturer"}});
  CHECK(empty->kind == Expr::Kind::CollTest);
  CHECK(empty->src->kind == Expr::Kind::Navigation);
  CHECK(empty->src->assoc == "Enrolment");

  CHECK_THROWS_WITH_AS(parse_ocl("self.salary", model, {{"self", "Student"}}),
                       doctest::Contains("salary"), Error);
  CHECK_THROWS_AS(parse_ocl("self.age >= 'a'", model, {{"self", "Student"}}), Error);
  CHECK_THROWS_AS(parse_ocl("missing.age", model, {}), Error);
}

TEST_CASE("parsing round-trips through print") {
  DataModel model = dm();
  std::vector<TypedVar> vars = {{"self", "Student"}, {"caller", "Lecturer"},
                                {"user", "String"},  {"n", "Integer"},
                                {"b", "Boolean"}};
  for (const std::string text : {
           "(self.age >= 18)",
           "caller.students->isEmpty()",
           "Student.allInstances()->forAll(s | s.lecturers->forAll(l | (s.age < l.age)))",
           "(self.name = user)",
           "((b and (n < 3)) or (not (user <> null)))",
           "Student.allInstances()->select(s | s.age.oclIsUndefined())->notEmpty()",
           "Student.allInstances()->collect(s | s.age)->excluding(null)->isEmpty()",
           "(caller.students->including(self)->union(Student.allInstances())->exists(s | "
           "(s.age > n)) implies b)",
       }) {
    ExprPtr e = parse_ocl(text, model, vars);
    CHECK(print(parse_ocl(print(e), model, vars)) == print(e));
  }
}

TEST_CASE("null equals null") {
  CHECK(truth_text("null = null") == B4::True);
}

TEST_CASE("allInstances on the empty instance is empty") {
  CHECK(truth_text("Student.allInstances()->isEmpty()") == B4::True);
  CHECK(truth_text("Student.allInstances()->notEmpty()") == B4::False);
}

/*
Documented four-valued connective tables (docs/null-semantics.md):

 and | T F N I      or | T F N I     not
 ----+--------     ----+--------     ----
  T  | T F N I      T  | T T T T     T->F
  F  | F F F F      F  | T F N I     F->T
  N  | N F N I      N  | T N N I     N->N
  I  | I F I I      I  | T I I I     I->I

 implies = (not a) or b
*/
TEST_CASE("four-valued connective tables") {
  const B4 vals[4] = {B4::True, B4::False, B4::Null, B4::Inval};
  const B4 and_table[4][4] = {{B4::True, B4::False, B4::Null, B4::Inval},
                              {B4::False, B4::False, B4::False, B4::False},
                              {B4::Null, B4::False, B4::Null, B4::Inval},
                              {B4::Inval, B4::False, B4::Inval, B4::Inval}};
  const B4 or_table[4][4] = {{B4::True, B4::True, B4::True, B4::True},
                             {B4::True, B4::False, B4::Null, B4::Inval},
                             {B4::True, B4::Null, B4::Null, B4::Inval},
                             {B4::True, B4::Inval, B4::Inval, B4::Inval}};
  const B4 not_table[4] = {B4::False, B4::True, B4::Null, B4::Inval};

  for (int i = 0; i < 4; ++i) {
    CHECK(b4_not(vals[i]) == not_table[i]);
    for (int j = 0; j < 4; ++j) {
      CAPTURE(i);
      CAPTURE(j);
      CHECK(b4_and(vals[i], vals[j]) == and_table[i][j]);
      CHECK(b4_or(vals[i], vals[j]) == or_table[i][j]);
      CHECK(b4_implies(vals[i], vals[j]) == b4_or(b4_not(vals[i]), vals[j]));
    }
  }
}

TEST_CASE("evaluator matches the tables through expression syntax") {
  // invalid is produced by 1 < null; null by the literal.
  DataModel model = dm();
  auto term_for = [](B4 v) -> std::string {
    switch (v) {
      case B4::True: return "true";
      case B4::False: return "false";
      case B4::Null: return "null";
      case B4::Inval: return "(1 < null)";
    }
    return "";
  };
  const B4 vals[4] = {B4::True, B4::False, B4::Null, B4::Inval};
  for (B4 a : vals) {
    CHECK(truth_text("not " + term_for(a)) == b4_not(a));
    for (B4 b : vals) {
      CHECK(truth_text(term_for(a) + " and " + term_for(b)) == b4_and(a, b));
      CHECK(truth_text(term_for(a) + " or " + term_for(b)) == b4_or(a, b));
      CHECK(truth_text(term_for(a) + " implies " + term_for(b)) == b4_implies(a, b));
    }
  }
}

TEST_CASE("attribute access on null or invalid is invalid; comparisons are strict") {
  DataModel model = dm();
  Assignment sigma;
  sigma.bindings["self"] = OclScalar::null();
  ObjectModel om;
  CHECK(truth_text("self.age >= 18", om, sigma, {{"self", "Student"}}) == B4::Inval);
  CHECK(truth_text("self.age.oclIsUndefined()", om, sigma, {{"self", "Student"}}) == B4::True);
  CHECK(truth_text("null < 5") == B4::Inval);
  CHECK(truth_text("null <> null") == B4::False);
}

TEST_CASE("navigation from a null object yields the empty set") {
  DataModel model = dm();
  ObjectModel om = load_object_model(
      R"({"objects": [{"id": 1, "class": "Student"}, {"id": 2, "class": "Lecturer"}],
          "links": [{"assoc": "Enrolment", "left": 1, "right": 2}]})",
      model);
  Assignment sigma;
  sigma.bindings["caller"] = OclScalar::null();
  CHECK(truth_text("caller.students->isEmpty()", om, sigma, {{"caller", "Lecturer"}}) ==
        B4::True);
  sigma.bindings["caller"] = OclScalar::of_object(2);
  CHECK(truth_text("caller.students->isEmpty()", om, sigma, {{"caller", "Lecturer"}}) ==
        B4::False);
}

TEST_CASE("nested forAll over enrolments") {
  DataModel model = dm();
  const std::string expr =
      "Student.allInstances()->forAll(s | s.lecturers->forAll(l | s.age < l.age))";
  // Students aged 20 and 25, lecturer aged 30, both enrolled: all ages below.
  ObjectModel om = load_object_model(
      R"({"objects": [
            {"id": 1, "class": "Student", "attrs": {"age": 20}},
            {"id": 2, "class": "Student", "attrs": {"age": 25}},
            {"id": 3, "class": "Lecturer", "attrs": {"age": 30}}],
          "links": [{"assoc": "Enrolment", "left": 1, "right": 3},
                    {"assoc": "Enrolment", "left": 2, "right": 3}]})",
      model);
  CHECK(truth_text(expr, om, {}, {}) == B4::True);

  ObjectModel young = load_object_model(
      R"({"objects": [
            {"id": 1, "class": "Student", "attrs": {"age": 20}},
            {"id": 2, "class": "Student", "attrs": {"age": 25}},
            {"id": 3, "class": "Lecturer", "attrs": {"age": 22}}],
          "links": [{"assoc": "Enrolment", "left": 1, "right": 3},
                    {"assoc": "Enrolment", "left": 2, "right": 3}]})",
      model);
  CHECK(truth_text(expr, young, {}, {}) == B4::False);
}

TEST_CASE("quantifiers use certain-answer semantics over undefined bodies") {
  DataModel model = dm();
  // One student with a null age: the comparison is invalid, which neither
  // witnesses exists nor refutes forAll.
  ObjectModel om = load_object_model(
      R"({"objects": [{"id": 1, "class": "Student", "attrs": {"age": null}}]})", model);
  CHECK(truth_text("Student.allInstances()->forAll(s | s.age < 30)", om, {}, {}) == B4::True);
  CHECK(truth_text("Student.allInstances()->exists(s | s.age < 30)", om, {}, {}) == B4::False);
  // Over the empty set forAll is true and exists is false.
  ObjectModel empty;
  CHECK(truth_text("Student.allInstances()->forAll(s | s.age < 30)", empty, {}, {}) == B4::True);
  CHECK(truth_text("Student.allInstances()->exists(s | s.age < 30)", empty, {}, {}) == B4::False);
}

TEST_CASE("select keeps true elements; invalid bodies poison the collection") {
  DataModel model = dm();
  ObjectModel om = load_object_model(
      R"({"objects": [{"id": 1, "class": "Student", "attrs": {"age": 17}},
                      {"id": 2, "class": "Student", "attrs": {"age": 19}}]})",
      model);
  CHECK(truth_text("Student.allInstances()->select(s | s.age >= 18)->notEmpty()", om, {}, {}) ==
        B4::True);
  CHECK(truth_text("Student.allInstances()->reject(s | s.age >= 18)->isEmpty()", om, {}, {}) ==
        B4::False);
  // A null age makes the body invalid for that element.
  ObjectModel with_null = load_object_model(
      R"({"objects": [{"id": 1, "class": "Student", "attrs": {"age": null}}]})", model);
  CHECK(truth_text("Student.allInstances()->select(s | s.age >= 18)->isEmpty()", with_null, {},
                   {}) == B4::Inval);
}

TEST_CASE("collect gathers values into a set including nulls") {
  DataModel model = dm();
  ObjectModel om = load_object_model(
      R"({"objects": [{"id": 1, "class": "Student", "attrs": {"age": 17}},
                      {"id": 2, "class": "Student", "attrs": {"age": 17}},
                      {"id": 3, "class": "Student"}]})",
      model);
  Value v = eval_text("Student.allInstances()->collect(s | s.age)", om, {}, {});
  REQUIRE(v.kind == Value::Kind::Set);
  CHECK(v.set.size() == 2);  // {17, null} after de-duplication
  CHECK(truth_text("Student.allInstances()->collect(s | s.age)->excluding(null)->notEmpty()", om,
                   {}, {}) == B4::True);
}

TEST_CASE("substituting bound values matches direct evaluation") {
  DataModel model = dm();
  ObjectModel om = load_object_model(
      R"({"objects": [{"id": 1, "class": "Student", "attrs": {"age": 19, "name": "a"}}]})",
      model);
  Assignment sigma;
  sigma.bindings["self"] = OclScalar::of_object(1);
  sigma.bindings["user"] = OclScalar::of_string("a");
  CHECK(truth_text("self.name = user", om, sigma, {{"self", "Student"}, {"user", "String"}}) ==
        B4::True);
  // Textual substitution of user by its value agrees.
  CHECK(truth_text("self.name = 'a'", om, sigma, {{"self", "Student"}}) == B4::True);
}

TEST_CASE("every boolean evaluation lands in exactly one truth value") {
  DataModel model = dm();
  EnumerationBounds bounds;
  bounds.max_objects_per_class = 1;
  std::vector<TypedVar> vars = {{"self", "Student"}};
  ExprPtr e = parse_ocl("self.age >= 18 or self.name = 'a'", model, vars);
  for (const auto& om : enumerate_object_models(model, bounds)) {
    for (const auto& sigma : enumerate_assignments(vars, om, bounds)) {
      Value v = eval_ocl(om, sigma, e);
      B4 b = truth_of(v);
      bool classified = b == B4::True || b == B4::False || b == B4::Null || b == B4::Inval;
      CHECK(classified);
    }
  }
}
