#include "doctest.h"
#include "oclsql/sql_ast.hpp"
#include "oclsql/sql_exec.hpp"
#include "university.hpp"

using namespace oclsql;
using namespace oclsql::sql;
using rel::SqlValue;

namespace {

struct Fixture {
  DataModel dm = load_data_model(testdata::kUniversityJson);
  rel::SqlSchema schema = rel::o2s(dm);

  SelectPtr parse(const std::string& text, const std::vector<TypedVar>& vars = {}) {
    return parse_select(text, schema, vars);
  }
  rel::DatabaseInstance instance(const std::string& om_json) {
    return rel::o2s_inst(dm, schema, load_object_model(om_json, dm));
  }
};

SqlValue T() { return SqlValue::of_bool(true); }
SqlValue F() { return SqlValue::of_bool(false); }
SqlValue N() { return SqlValue::null(); }

}  // namespace

TEST_CASE("parser handles the studied statement shapes") {
  Fixture fx;
  SelectPtr trivial = fx.parse("SELECT TRUE;");
  CHECK(trivial->items.size() == 1);
  CHECK_FALSE(trivial->from.has_value());

  SelectPtr nested = fx.parse(
      "SELECT NOT EXISTS (SELECT 1 FROM (SELECT s.age, e.lecturers FROM Student s "
      "JOIN Enrolment e ON e.students = s.Student_id) AS TEMP JOIN Lecturer l "
      "WHERE TEMP.age >= l.age AND l.Lecturer_id = TEMP.lecturers);");
  REQUIRE(nested->items.size() == 1);
  const Expr& item = *nested->items[0].expr;
  CHECK(item.kind == Expr::Kind::Not);
  CHECK(item.args[0]->kind == Expr::Kind::Exists);
  const Select& sub = *item.args[0]->sub;
  REQUIRE(sub.from.has_value());
  CHECK(sub.from->kind == FromItem::Kind::Subselect);
  CHECK(sub.from->alias == "TEMP");
  REQUIRE(sub.join.has_value());
  CHECK(sub.join->table == "Lecturer");
  CHECK(sub.where != nullptr);
  CHECK(sub.on == nullptr);
}

TEST_CASE("correlated subqueries are rejected") {
  Fixture fx;
  CHECK_THROWS_WITH_AS(
      fx.parse("SELECT EXISTS (SELECT name FROM Lecturer WHERE Lecturer_id = s.Student_id) "
               "FROM Student s"),
      doctest::Contains("correlated"), Error);
}

TEST_CASE("unknown columns and ambiguous bare names are rejected") {
  Fixture fx;
  CHECK_THROWS_AS(fx.parse("SELECT salary FROM Student"), Error);
  // `name` exists on both sides of the join.
  CHECK_THROWS_WITH_AS(fx.parse("SELECT name FROM Student JOIN Lecturer"),
                       doctest::Contains("ambiguous"), Error);
  CHECK_THROWS_AS(fx.parse("SELECT age FROM Missing"), Error);
}

TEST_CASE("statements round-trip through print") {
  Fixture fx;
  std::vector<TypedVar> vars = {{"self", "Student"}, {"user", "String"},
                                {"caller", "Lecturer"}};
  for (const auto& ex : testdata::examples()) {
    SelectPtr s = fx.parse(ex.sql, vars);
    CHECK(print(fx.parse(print(s), vars)) == print(s));
  }
}

TEST_CASE("select null equality returns a single NULL cell") {
  Fixture fx;
  ResultTable rt = exec_sql({}, {}, fx.parse("SELECT NULL = NULL"));
  REQUIRE(rt.rows.size() == 1);
  REQUIRE(rt.rows[0].size() == 1);
  CHECK(rt.rows[0][0].is_null());
}

TEST_CASE("from-less selects return exactly one row") {
  Fixture fx;
  ResultTable rt = exec_sql({}, {}, fx.parse("SELECT TRUE;"));
  REQUIRE(rt.rows.size() == 1);
  CHECK(rt.rows[0][0] == T());
}

/*
Three-valued tables:
  AND: FALSE dominates, NULL is contagious otherwise.
  OR:  TRUE dominates, NULL is contagious otherwise.
  NOT: swaps TRUE/FALSE, keeps NULL.
*/
TEST_CASE("three-valued AND OR NOT tables, all 9+9+3 cases") {
  Fixture fx;
  const char* tokens[3] = {"TRUE", "FALSE", "NULL"};
  const SqlValue vals[3] = {T(), F(), N()};
  const SqlValue and_table[3][3] = {{T(), F(), N()}, {F(), F(), F()}, {N(), F(), N()}};
  const SqlValue or_table[3][3] = {{T(), T(), T()}, {T(), F(), N()}, {T(), N(), N()}};
  const SqlValue not_table[3] = {F(), T(), N()};

  for (int i = 0; i < 3; ++i) {
    CHECK(sql3_not(vals[i]) == not_table[i]);
    ResultTable rn =
        exec_sql({}, {}, fx.parse(std::string("SELECT NOT ") + tokens[i]));
    CHECK(rn.rows[0][0] == not_table[i]);
    for (int j = 0; j < 3; ++j) {
      CAPTURE(i);
      CAPTURE(j);
      CHECK(sql3_and(vals[i], vals[j]) == and_table[i][j]);
      CHECK(sql3_or(vals[i], vals[j]) == or_table[i][j]);
      ResultTable ra = exec_sql(
          {}, {}, fx.parse(std::string("SELECT ") + tokens[i] + " AND " + tokens[j]));
      CHECK(ra.rows[0][0] == and_table[i][j]);
      ResultTable ro = exec_sql(
          {}, {}, fx.parse(std::string("SELECT ") + tokens[i] + " OR " + tokens[j]));
      CHECK(ro.rows[0][0] == or_table[i][j]);
    }
  }
}

TEST_CASE("comparisons with NULL operands are NULL") {
  Fixture fx;
  for (const char* stmt : {"SELECT NULL = NULL", "SELECT 1 = NULL", "SELECT NULL >= 3"})
    CHECK(exec_sql({}, {}, fx.parse(stmt)).rows[0][0].is_null());
  CHECK(exec_sql({}, {}, fx.parse("SELECT 3 >= 3")).rows[0][0] == T());
  CHECK(exec_sql({}, {}, fx.parse("SELECT 2 >= 3")).rows[0][0] == F());
  CHECK(exec_sql({}, {}, fx.parse("SELECT 2 <> 3")).rows[0][0] == T());
}

TEST_CASE("IS NULL is two-valued") {
  Fixture fx;
  CHECK(exec_sql({}, {}, fx.parse("SELECT NULL IS NULL")).rows[0][0] == T());
  CHECK(exec_sql({}, {}, fx.parse("SELECT 1 IS NULL")).rows[0][0] == F());
  CHECK(exec_sql({}, {}, fx.parse("SELECT (NULL = NULL) IS NULL")).rows[0][0] == T());
}

TEST_CASE("CASE takes the else branch on FALSE and on NULL") {
  Fixture fx;
  CHECK(exec_sql({}, {}, fx.parse("SELECT CASE WHEN TRUE THEN 1 ELSE 2 END")).rows[0][0] ==
        SqlValue::of_int(1));
  CHECK(exec_sql({}, {}, fx.parse("SELECT CASE WHEN FALSE THEN 1 ELSE 2 END")).rows[0][0] ==
        SqlValue::of_int(2));
  CHECK(exec_sql({}, {}, fx.parse("SELECT CASE WHEN NULL THEN 1 ELSE 2 END")).rows[0][0] ==
        SqlValue::of_int(2));
}

TEST_CASE("where filters on TRUE only; join is the filtered cross product") {
  Fixture fx;
  auto db = fx.instance(
      R"({"objects": [
            {"id": 1, "class": "Student", "attrs": {"age": 19}},
            {"id": 2, "class": "Student", "attrs": {"age": null}},
            {"id": 3, "class": "Lecturer", "attrs": {"age": 30}}],
          "links": [{"assoc": "Enrolment", "left": 1, "right": 3}]})");

  // The null-aged student's comparison is NULL, so the row is dropped.
  ResultTable adults = exec_sql(db, {}, fx.parse("SELECT Student_id FROM Student WHERE age >= 18"));
  REQUIRE(adults.rows.size() == 1);
  CHECK(adults.rows[0][0] == SqlValue::of_int(1));

  ResultTable joined = exec_sql(
      db, {},
      fx.parse("SELECT s.Student_id, l.Lecturer_id FROM Student s JOIN Lecturer l"));
  CHECK(joined.rows.size() == 2);  // 2 students x 1 lecturer

  ResultTable on_filtered = exec_sql(
      db, {},
      fx.parse("SELECT e.students FROM Enrolment e JOIN Student s ON e.students = s.Student_id "
               "WHERE s.age >= 18"));
  REQUIRE(on_filtered.rows.size() == 1);
  CHECK(on_filtered.rows[0][0] == SqlValue::of_int(1));
}

TEST_CASE("not exists over enrolments, with and without a matching lecturer") {
  Fixture fx;
  std::vector<TypedVar> vars = {{"caller", "Lecturer"}};
  SelectPtr stmt = fx.parse(
      "SELECT NOT EXISTS (SELECT students FROM Enrolment WHERE lecturers = caller);", vars);

  auto db = fx.instance(
      R"({"objects": [{"id": 1, "class": "Student"}, {"id": 2, "class": "Lecturer"},
                      {"id": 3, "class": "Lecturer"}],
          "links": [{"assoc": "Enrolment", "left": 1, "right": 2}]})");

  rel::SqlAssignment with_enrolment{{{"caller", SqlValue::of_int(2)}}};
  CHECK(exec_sql(db, with_enrolment, stmt).rows[0][0] == F());

  rel::SqlAssignment without{{{"caller", SqlValue::of_int(3)}}};
  CHECK(exec_sql(db, without, stmt).rows[0][0] == T());

  rel::SqlAssignment null_caller{{{"caller", SqlValue::null()}}};
  CHECK(exec_sql(db, null_caller, stmt).rows[0][0] == T());
}

TEST_CASE("scalar subselects demand exactly one row") {
  Fixture fx;
  std::vector<TypedVar> vars = {{"self", "Student"}, {"user", "String"}};
  SelectPtr stmt = fx.parse(
      "SELECT (SELECT name FROM Student WHERE Student_id = self) = user;", vars);

  auto db = fx.instance(
      R"({"objects": [{"id": 1, "class": "Student", "attrs": {"name": "a"}}]})");
  rel::SqlAssignment good{
      {{"self", SqlValue::of_int(1)}, {"user", SqlValue::of_varchar("a")}}};
  CHECK(exec_sql(db, good, stmt).rows[0][0] == T());

  rel::SqlAssignment missing{
      {{"self", SqlValue::of_int(9)}, {"user", SqlValue::of_varchar("a")}}};
  CHECK_THROWS_AS(exec_sql(db, missing, stmt), ScalarCardinalityError);
}
