#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "oclsql/error.hpp"

// Class models and their instances. All types are immutable value types once
// loaded; the enumerators below are pure and deterministic, so results can be
// consumed from multiple threads.

namespace oclsql {

// Attribute value types: the two predefined scalars or a class name.
struct AttrType {
  enum class Kind { Integer, String, Class };
  Kind kind = Kind::Integer;
  std::string class_name;  // when kind == Class

  bool operator==(const AttrType&) const = default;
};

struct Attribute {
  std::string name;
  std::string owner;
  AttrType type;
};

struct Association {
  std::string name;
  std::string left_end;
  std::string left_class;
  std::string right_end;
  std::string right_class;
};

class DataModel {
public:
  std::vector<std::string> classes;  // insertion order, unique
  std::vector<Attribute> attributes;
  std::vector<Association> associations;

  bool has_class(const std::string& name) const;
  const Attribute* find_attribute(const std::string& cls, const std::string& attr) const;
  std::vector<const Attribute*> attributes_of(const std::string& cls) const;
  const Association* find_association(const std::string& name) const;
  // Checks all structural invariants, raising Error naming the offender.
  void validate() const;
};

using ObjectId = long long;

// A scalar OCL value: integer, string, boolean, object reference, or null.
struct OclScalar {
  enum class Kind { Null, Int, String, Bool, Object };
  Kind kind = Kind::Null;
  long long int_value = 0;
  std::string str_value;
  bool bool_value = false;
  ObjectId object = 0;

  static OclScalar null() { return {}; }
  static OclScalar of_int(long long v) {
    OclScalar s;
    s.kind = Kind::Int;
    s.int_value = v;
    return s;
  }
  static OclScalar of_string(std::string v) {
    OclScalar s;
    s.kind = Kind::String;
    s.str_value = std::move(v);
    return s;
  }
  static OclScalar of_bool(bool v) {
    OclScalar s;
    s.kind = Kind::Bool;
    s.bool_value = v;
    return s;
  }
  static OclScalar of_object(ObjectId id) {
    OclScalar s;
    s.kind = Kind::Object;
    s.object = id;
    return s;
  }

  bool is_null() const { return kind == Kind::Null; }
  bool operator==(const OclScalar&) const = default;
  bool operator<(const OclScalar& other) const;
};

struct Object {
  ObjectId id = 0;
  std::string cls;
};

struct Link {
  std::string assoc;
  ObjectId left = 0;
  ObjectId right = 0;

  bool operator==(const Link&) const = default;
};

class ObjectModel {
public:
  std::vector<Object> objects;
  // (attribute name, object id) -> value; absent entries are null.
  std::map<std::pair<std::string, ObjectId>, OclScalar> attribute_values;
  std::vector<Link> links;

  const Object* find_object(ObjectId id) const;
  std::vector<ObjectId> objects_of_class(const std::string& cls) const;
  OclScalar attribute_value(const std::string& attr, ObjectId id) const;
  bool has_link(const std::string& assoc, ObjectId left, ObjectId right) const;
  void validate(const DataModel& dm) const;

  bool operator==(const ObjectModel& other) const;
};

// A binding of free variables to scalar OCL values. `invalid` is not a value
// and can never be bound.
struct Assignment {
  std::map<std::string, OclScalar> bindings;

  bool operator==(const Assignment&) const = default;
};

// Finite search space for the brute-force oracle.
struct EnumerationBounds {
  int max_objects_per_class = 1;
  std::vector<OclScalar> int_domain{OclScalar::null(), OclScalar::of_int(17),
                                    OclScalar::of_int(19)};
  std::vector<OclScalar> string_domain{OclScalar::null(), OclScalar::of_string("a")};
};

DataModel load_data_model(const std::string& json_text);
ObjectModel load_object_model(const std::string& json_text, const DataModel& dm);
std::string print_object_model(const ObjectModel& om);

// Every conformant object model within the bounds, each exactly once, in a
// deterministic order. Object ids are assigned densely across classes.
std::vector<ObjectModel> enumerate_object_models(const DataModel& dm,
                                                 const EnumerationBounds& bounds);

// Typed free variables. `type` is "Integer", "String", "Boolean", or a class.
struct TypedVar {
  std::string name;
  std::string type;
};

// All valid assignments of the variables over `om`: object variables range
// over that class's objects plus null, scalars over the bounds' domains,
// Booleans over {true, false, null}.
std::vector<Assignment> enumerate_assignments(const std::vector<TypedVar>& vars,
                                              const ObjectModel& om,
                                              const EnumerationBounds& bounds);

}  // namespace oclsql
