#pragma once

#include <string>
#include <vector>

#include "oclsql/datamodel.hpp"

// The studied data model and the seven constraint/implementation pairs the
// acceptance suite exercises.

namespace testdata {

inline const char* kUniversityJson = R"({
  "classes": {
    "Student":  [ {"name": "name", "type": "String"}, {"name": "age", "type": "Integer"} ],
    "Lecturer": [ {"name": "name", "type": "String"}, {"name": "age", "type": "Integer"} ]
  },
  "associations": [
    {"name": "Enrolment", "leftEnd": "students", "leftClass": "Student",
     "rightEnd": "lecturers", "rightClass": "Lecturer"}
  ]
})";

struct Example {
  std::string name;
  std::string ocl;
  std::string sql;
  std::vector<oclsql::TypedVar> vars;
  std::vector<std::string> assumptions;  // needed for the Correct verdict
};

inline std::vector<Example> examples() {
  return {
      {"exm1", "true", "SELECT TRUE;", {}, {}},

      {"exm2",
       "caller.students->isEmpty()",
       "SELECT NOT EXISTS (SELECT students FROM Enrolment WHERE lecturers = caller);",
       {{"caller", "Lecturer"}},
       {}},

      {"exm3",
       "self.age >= 18",
       "SELECT age >= 18 FROM Student WHERE Student_id = self;",
       {{"self", "Student"}},
       {}},

      {"exm4",
       "Student.allInstances()->forAll(s | s.lecturers->forAll(l | s.age < l.age))",
       "SELECT NOT EXISTS (SELECT 1 FROM (SELECT s.age, e.lecturers FROM Student s "
       "JOIN Enrolment e ON e.students = s.Student_id) AS TEMP JOIN Lecturer l "
       "WHERE TEMP.age >= l.age AND l.Lecturer_id = TEMP.lecturers);",
       {},
       {}},

      {"exm5",
       "self.name = user",
       "SELECT (SELECT name FROM Student WHERE Student_id = self) = user;",
       {{"self", "Student"}, {"user", "String"}},
       {"user <> null"}},

      {"exm6",
       "self.name = user",
       "SELECT name = user FROM Student WHERE Student_id = self;",
       {{"self", "Student"}, {"user", "String"}},
       {"user <> null"}},

      {"exm7",
       "self.name = user",
       "SELECT CASE WHEN name IS NULL THEN user IS NULL ELSE CASE WHEN user IS NULL "
       "THEN FALSE ELSE name = user END END FROM Student WHERE Student_id = self;",
       {{"self", "Student"}, {"user", "String"}},
       {}},
  };
}

}  // namespace testdata
