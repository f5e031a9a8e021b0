#include "doctest.h"
#include "oclsql/datamodel.hpp"
#include "university.hpp"

using namespace oclsql;

TEST_CASE("university model loads with two classes, four attributes, one association") {
  DataModel dm = load_data_model(testdata::kUniversityJson);
  CHECK(dm.classes.size() == 2);
  CHECK(dm.attributes.size() == 4);
  CHECK(dm.associations.size() == 1);
  CHECK(dm.find_attribute("Student", "age")->type.kind == AttrType::Kind::Integer);
  CHECK(dm.find_attribute("Lecturer", "name")->type.kind == AttrType::Kind::String);
  const Association* as = dm.find_association("Enrolment");
  REQUIRE(as != nullptr);
  CHECK(as->left_end == "students");
  CHECK(as->right_class == "Lecturer");
}

TEST_CASE("empty document yields an empty model") {
  DataModel dm = load_data_model("{}");
  CHECK(dm.classes.empty());
  CHECK(dm.attributes.empty());
}

TEST_CASE("attribute with a missing class type is rejected") {
  const char* doc = R"({"classes": {"A": [{"name": "x", "type": "Missing"}]}})";
  CHECK_THROWS_WITH_AS(load_data_model(doc), doctest::Contains("Missing"), Error);
}

TEST_CASE("identical association end names are rejected") {
  const char* doc = R"({
    "classes": {"A": [], "B": []},
    "associations": [{"name":"r","leftEnd":"x","leftClass":"A","rightEnd":"x","rightClass":"B"}]})";
  CHECK_THROWS_AS(load_data_model(doc), Error);
}

TEST_CASE("object model loads a single student") {
  DataModel dm = load_data_model(testdata::kUniversityJson);
  ObjectModel om = load_object_model(
      R"({"objects": [{"id": 1, "class": "Student", "attrs": {"age": 20, "name": "a"}}]})", dm);
  CHECK(om.objects.size() == 1);
  CHECK(om.attribute_value("age", 1) == OclScalar::of_int(20));
  CHECK(om.attribute_value("name", 1) == OclScalar::of_string("a"));
}

TEST_CASE("empty object document yields the empty instance") {
  DataModel dm = load_data_model(testdata::kUniversityJson);
  ObjectModel om = load_object_model("{}", dm);
  CHECK(om.objects.empty());
  CHECK(om.links.empty());
}

TEST_CASE("a link between two students violates the association typing") {
  DataModel dm = load_data_model(testdata::kUniversityJson);
  const char* doc = R"({
    "objects": [{"id": 1, "class": "Student"}, {"id": 2, "class": "Student"}],
    "links": [{"assoc": "Enrolment", "left": 1, "right": 2}]})";
  CHECK_THROWS_AS(load_object_model(doc, dm), Error);
}

TEST_CASE("duplicate object ids are rejected") {
  DataModel dm = load_data_model(testdata::kUniversityJson);
  const char* doc = R"({
    "objects": [{"id": 1, "class": "Student"}, {"id": 1, "class": "Lecturer"}]})";
  CHECK_THROWS_AS(load_object_model(doc, dm), Error);
}

TEST_CASE("null attribute values round through explicitly") {
  DataModel dm = load_data_model(testdata::kUniversityJson);
  ObjectModel om = load_object_model(
      R"({"objects": [{"id": 3, "class": "Student", "attrs": {"age": null}}]})", dm);
  CHECK(om.attribute_value("age", 3).is_null());
  CHECK(om.attribute_value("name", 3).is_null());
}

namespace {

// Independent count for the enumeration oracle: per object, attribute choices
// multiply; links are free subsets of the candidate pairs.
long long expected_model_count(int max_per_class, int age_choices, int name_choices) {
  long long total = 0;
  for (int students = 0; students <= max_per_class; ++students) {
    for (int lecturers = 0; lecturers <= max_per_class; ++lecturers) {
      long long per_student = static_cast<long long>(age_choices) * name_choices;
      long long count = 1;
      for (int k = 0; k < students + lecturers; ++k) count *= per_student;
      count <<= students * lecturers;  // link subsets
      total += count;
    }
  }
  return total;
}

}  // namespace

TEST_CASE("bounded enumeration visits every instance exactly once") {
  DataModel dm = load_data_model(testdata::kUniversityJson);
  EnumerationBounds bounds;
  bounds.max_objects_per_class = 1;

  auto models = enumerate_object_models(dm, bounds);
  CHECK(models.size() == static_cast<size_t>(expected_model_count(1, 3, 2)));
  CHECK(models.size() == 85);  // 1 + 6 + 6 + 72

  // Pairwise distinct (prints are canonical).
  std::set<std::string> prints;
  for (const auto& om : models) {
    om.validate(dm);
    CHECK(prints.insert(print_object_model(om)).second);
  }
}

TEST_CASE("zero bounds yield exactly the empty instance") {
  DataModel dm = load_data_model(testdata::kUniversityJson);
  EnumerationBounds bounds;
  bounds.max_objects_per_class = 0;
  auto models = enumerate_object_models(dm, bounds);
  REQUIRE(models.size() == 1);
  CHECK(models[0].objects.empty());
}

TEST_CASE("one attribute-free class under bound 1 yields two models") {
  DataModel dm = load_data_model(R"({"classes": {"A": []}})");
  EnumerationBounds bounds;
  bounds.max_objects_per_class = 1;
  CHECK(enumerate_object_models(dm, bounds).size() == 2);
}

TEST_CASE("models enumerated under smaller bounds recur under larger bounds") {
  DataModel dm = load_data_model(testdata::kUniversityJson);
  EnumerationBounds small, large;
  small.max_objects_per_class = 1;
  large.max_objects_per_class = 2;
  std::set<std::string> big;
  for (const auto& om : enumerate_object_models(dm, large)) big.insert(print_object_model(om));
  for (const auto& om : enumerate_object_models(dm, small))
    CHECK(big.count(print_object_model(om)) == 1);
}

TEST_CASE("object models round-trip through the document format") {
  DataModel dm = load_data_model(testdata::kUniversityJson);
  EnumerationBounds bounds;
  bounds.max_objects_per_class = 1;
  for (const auto& om : enumerate_object_models(dm, bounds)) {
    ObjectModel reloaded = load_object_model(print_object_model(om), dm);
    CHECK(reloaded == om);
  }
}

TEST_CASE("assignment enumeration") {
  DataModel dm = load_data_model(testdata::kUniversityJson);
  ObjectModel om = load_object_model(
      R"({"objects": [{"id": 1, "class": "Student"}, {"id": 2, "class": "Student"}]})", dm);
  EnumerationBounds bounds;

  SUBCASE("no variables: exactly one empty assignment") {
    auto as = enumerate_assignments({}, om, bounds);
    REQUIRE(as.size() == 1);
    CHECK(as[0].bindings.empty());
  }
  SUBCASE("one object variable ranges over the class plus null") {
    auto as = enumerate_assignments({{"self", "Student"}}, om, bounds);
    CHECK(as.size() == 3);
  }
  SUBCASE("object x string variables form the cartesian product") {
    ObjectModel one = load_object_model(R"({"objects": [{"id": 1, "class": "Student"}]})", dm);
    auto as = enumerate_assignments({{"self", "Student"}, {"user", "String"}}, one, bounds);
    CHECK(as.size() == 4);  // (null, #1) x (null, "a")
  }
}
