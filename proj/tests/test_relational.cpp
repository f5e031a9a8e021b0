#include "doctest.h"
#include "oclsql/relational.hpp"
#include "university.hpp"

using namespace oclsql;
using namespace oclsql::rel;

namespace {

DataModel dm() { return load_data_model(testdata::kUniversityJson); }

}  // namespace

TEST_CASE("schema maps classes and associations to keyed tables") {
  SqlSchema schema = o2s(dm());
  const Table* student = schema.find_table("Student");
  REQUIRE(student != nullptr);
  CHECK(student->primary_key == "Student_id");
  CHECK(student->columns.size() == 3);  // id, name, age
  CHECK(student->find_column("age")->type == Column::Type::Int);
  CHECK(student->find_column("name")->type == Column::Type::Varchar);

  const Table* enrolment = schema.find_table("Enrolment");
  REQUIRE(enrolment != nullptr);
  CHECK(enrolment->is_association);
  CHECK(enrolment->find_column("students")->references == "Student");
  CHECK(enrolment->find_column("lecturers")->references == "Lecturer");
}

TEST_CASE("class-typed attributes become int columns with foreign keys") {
  DataModel model = load_data_model(R"({
    "classes": {"A": [], "B": [{"name": "buddy", "type": "A"}]}})");
  SqlSchema schema = o2s(model);
  const Column* col = schema.find_table("B")->find_column("buddy");
  REQUIRE(col != nullptr);
  CHECK(col->type == Column::Type::Int);
  CHECK(col->references == "A");
  CHECK(emit_ddl(model).find("FOREIGN KEY fk_B_buddy") != std::string::npos);
}

TEST_CASE("empty model yields an empty schema") {
  CHECK(o2s(load_data_model("{}")).tables.empty());
}

TEST_CASE("instances carry object rows, attribute cells and link rows") {
  DataModel model = dm();
  SqlSchema schema = o2s(model);
  ObjectModel om = load_object_model(
      R"({"objects": [
            {"id": 1, "class": "Student", "attrs": {"age": null}},
            {"id": 2, "class": "Lecturer", "attrs": {"age": 30, "name": "b"}}],
          "links": [{"assoc": "Enrolment", "left": 1, "right": 2}]})",
      model);
  DatabaseInstance db = o2s_inst(model, schema, om);

  const auto& students = db.rows.at("Student");
  REQUIRE(students.size() == 1);
  CHECK(students[0][0] == SqlValue::of_int(1));  // Student_id
  CHECK(students[0][1].is_null());               // name unset
  CHECK(students[0][2].is_null());               // age explicitly null

  const auto& links = db.rows.at("Enrolment");
  REQUIRE(links.size() == 1);
  CHECK(links[0][0] == SqlValue::of_int(1));
  CHECK(links[0][1] == SqlValue::of_int(2));

  validate_instance(model, schema, db);
}

TEST_CASE("empty instance leaves every table empty") {
  DataModel model = dm();
  DatabaseInstance db = o2s_inst(model, o2s(model), {});
  for (const auto& [table, rows] : db.rows) CHECK(rows.empty());
}

TEST_CASE("assignment mapping projects objects to ids and keeps scalars") {
  Assignment sigma;
  sigma.bindings["self"] = OclScalar::of_object(7);
  sigma.bindings["user"] = OclScalar::of_string("a");
  sigma.bindings["caller"] = OclScalar::null();
  SqlAssignment mapped = o2s_inst_assignment(sigma);
  CHECK(mapped.bindings.at("self") == SqlValue::of_int(7));
  CHECK(mapped.bindings.at("user") == SqlValue::of_varchar("a"));
  CHECK(mapped.bindings.at("caller").is_null());
}

TEST_CASE("ddl and dml follow the statement ordering") {
  DataModel model = dm();
  std::string ddl = emit_ddl(model);
  size_t create_student = ddl.find("CREATE TABLE Student (Student_id int PRIMARY KEY);");
  size_t alter = ddl.find("ALTER TABLE Student ADD COLUMN");
  size_t create_assoc = ddl.find("CREATE TABLE Enrolment");
  REQUIRE(create_student != std::string::npos);
  REQUIRE(alter != std::string::npos);
  REQUIRE(create_assoc != std::string::npos);
  CHECK(create_student < alter);
  CHECK(alter < create_assoc);

  ObjectModel om = load_object_model(
      R"({"objects": [{"id": 1, "class": "Student", "attrs": {"age": 19}},
                      {"id": 2, "class": "Lecturer"}],
          "links": [{"assoc": "Enrolment", "left": 1, "right": 2}]})",
      model);
  std::string dml = emit_dml(model, om);
  size_t insert = dml.find("INSERT INTO Student (Student_id) VALUES (1);");
  size_t update = dml.find("UPDATE Student SET age = 19 WHERE Student_id = 1;");
  size_t link = dml.find("INSERT INTO Enrolment (students, lecturers) VALUES (1, 2);");
  REQUIRE(insert != std::string::npos);
  REQUIRE(update != std::string::npos);
  REQUIRE(link != std::string::npos);
  CHECK(insert < update);
  CHECK(update < link);
}

TEST_CASE("instance mapping is injective over enumerated models") {
  DataModel model = dm();
  SqlSchema schema = o2s(model);
  EnumerationBounds bounds;
  bounds.max_objects_per_class = 1;
  std::set<std::string> seen;
  for (const auto& om : enumerate_object_models(model, bounds)) {
    DatabaseInstance db = o2s_inst(model, schema, om);
    validate_instance(model, schema, db);
    std::string key;
    for (const auto& [table, rows] : db.rows) {
      key += table + "[";
      for (const auto& row : rows) {
        for (const auto& cell : row) {
          switch (cell.kind) {
            case SqlValue::Kind::Null: key += "_,"; break;
            case SqlValue::Kind::Int: key += std::to_string(cell.int_value) + ","; break;
            case SqlValue::Kind::Varchar: key += "'" + cell.str_value + "',"; break;
            case SqlValue::Kind::Bool: key += cell.bool_value ? "T," : "F,"; break;
          }
        }
        key += ";";
      }
      key += "]";
    }
    CHECK(seen.insert(key).second);
  }
}
