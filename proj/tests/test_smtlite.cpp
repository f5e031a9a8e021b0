#include <string>

#include "doctest.h"
#include "solver.hpp"

using smtlite::Answer;
using smtlite::solve_script;

namespace {

const char* kPrelude =
    "(set-logic ALL)\n"
    "(declare-sort Classifier 0)\n"
    "(declare-datatypes ((SqlBool 0)) (((TRUE) (FALSE) (NULL))))\n";

Answer run(const std::string& body) { return solve_script(kPrelude + body, 20.0); }

}  // namespace

TEST_CASE("propositional basics") {
  CHECK(run("(declare-fun p () Bool)(assert (and p (not p)))(check-sat)") == Answer::Unsat);
  CHECK(run("(declare-fun p () Bool)(declare-fun q () Bool)"
            "(assert (or p q))(assert (not p))(check-sat)") == Answer::Sat);
}

TEST_CASE("equality and congruence") {
  CHECK(run("(declare-fun a () Classifier)(declare-fun b () Classifier)"
            "(declare-fun f (Classifier) Int)"
            "(assert (= a b))(assert (not (= (f a) (f b))))(check-sat)") == Answer::Unsat);
  CHECK(run("(declare-fun a () Classifier)(declare-fun b () Classifier)"
            "(assert (distinct a b))(check-sat)") == Answer::Sat);
  CHECK(run("(declare-fun a () Classifier)"
            "(assert (distinct a a))(check-sat)") == Answer::Unsat);
}

TEST_CASE("integer literals and comparisons") {
  CHECK(run("(declare-fun x () Int)(assert (>= x 18))(assert (not (>= x 18)))(check-sat)") ==
        Answer::Unsat);
  CHECK(run("(declare-fun x () Int)(assert (>= x 18))(assert (<= x 17))(check-sat)") ==
        Answer::Unsat);
  CHECK(run("(declare-fun x () Int)(assert (>= x 18))(assert (= x 17))(check-sat)") ==
        Answer::Unsat);
  CHECK(run("(declare-fun x () Int)(assert (>= x 18))(assert (<= x 19))(check-sat)") ==
        Answer::Sat);
  CHECK(run("(assert (< 2 1))(check-sat)") == Answer::Unsat);
}

TEST_CASE("string literals are distinct values") {
  CHECK(run("(declare-fun s () String)(assert (= s \"a\"))(assert (= s \"b\"))(check-sat)") ==
        Answer::Unsat);
  CHECK(run("(declare-fun s () String)(assert (not (= s \"a\")))(check-sat)") == Answer::Sat);
}

TEST_CASE("datatype constructors are distinct and exhaustive") {
  CHECK(run("(declare-fun v () SqlBool)"
            "(assert (not (= v TRUE)))(assert (not (= v FALSE)))(assert (not (= v NULL)))"
            "(check-sat)") == Answer::Unsat);
  CHECK(run("(assert (= TRUE FALSE))(check-sat)") == Answer::Unsat);
  CHECK(run("(declare-fun v () SqlBool)(assert (not (= v TRUE)))(check-sat)") == Answer::Sat);
}

TEST_CASE("quantified refutations") {
  // All students are adults, some student is not: unsat.
  CHECK(run("(declare-fun Student (Classifier) Bool)(declare-fun age (Classifier) Int)"
            "(declare-fun c () Classifier)"
            "(assert (forall ((x Classifier)) (=> (Student x) (>= (age x) 18))))"
            "(assert (Student c))(assert (< (age c) 18))(check-sat)") == Answer::Unsat);
  // Existential witness against a universal exclusion: unsat.
  CHECK(run("(declare-fun p (Int) Bool)"
            "(assert (exists ((x Int)) (p x)))"
            "(assert (forall ((x Int)) (not (p x))))(check-sat)") == Answer::Unsat);
  // Single-row property and its negation: unsat.
  CHECK(run("(declare-fun idx (Int) Bool)"
            "(assert (exists ((x Int)) (and (idx x) "
            "(forall ((y Int)) (=> (not (= y x)) (not (idx y)))))))"
            "(assert (not (exists ((x Int)) (and (idx x) "
            "(forall ((y Int)) (=> (not (= y x)) (not (idx y))))))))(check-sat)") ==
        Answer::Unsat);
}

TEST_CASE("quantified models") {
  // A universal constraint with a satisfying finite model.
  CHECK(run("(declare-fun Student (Classifier) Bool)(declare-fun age (Classifier) Int)"
            "(declare-fun c () Classifier)"
            "(assert (forall ((x Classifier)) (=> (Student x) (>= (age x) 18))))"
            "(assert (Student c))(check-sat)") == Answer::Sat);
  // Guarded integer quantification admits a finite-support model.
  CHECK(run("(declare-fun idx (Int) Bool)(declare-fun v (Int) SqlBool)"
            "(assert (exists ((x Int)) (idx x)))"
            "(assert (forall ((x Int)) (=> (idx x) (= (v x) NULL))))(check-sat)") ==
        Answer::Sat);
}

TEST_CASE("functions compose under congruence") {
  CHECK(run("(declare-fun id (Int) Classifier)(declare-fun left (Int) Int)"
            "(declare-fun x () Int)(declare-fun y () Int)"
            "(assert (= (left x) (left y)))"
            "(assert (not (= (id (left x)) (id (left y)))))(check-sat)") == Answer::Unsat);
}
