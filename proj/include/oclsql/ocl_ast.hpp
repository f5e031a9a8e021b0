#pragma once

#include <memory>
#include <string>
#include <vector>

#include "oclsql/datamodel.hpp"

namespace oclsql::ocl {

// Static types of the supported OCL subset. Null is the type of the `null`
// literal before it is adopted by a context; it conforms to every type.
struct Type {
  enum class Kind { Bool, Int, String, Class, Set, Null };
  Kind kind = Kind::Null;
  std::string cls;               // Kind::Class
  std::shared_ptr<Type> elem;    // Kind::Set

  static Type boolean() { return {Kind::Bool, "", nullptr}; }
  static Type integer() { return {Kind::Int, "", nullptr}; }
  static Type string() { return {Kind::String, "", nullptr}; }
  static Type of_class(std::string name) { return {Kind::Class, std::move(name), nullptr}; }
  static Type set_of(const Type& elem) {
    return {Kind::Set, "", std::make_shared<Type>(elem)};
  }
  static Type null() { return {Kind::Null, "", nullptr}; }

  bool is_set() const { return kind == Kind::Set; }
  bool is_boolean() const { return kind == Kind::Bool || kind == Kind::Null; }
  std::string to_string() const;
};

// Two types are compatible when one conforms to the other (Null conforms to
// everything).
bool compatible(const Type& a, const Type& b);

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class Kind {
    BoolLit,
    IntLit,
    StrLit,
    NullLit,
    Var,
    AttrAccess,     // src.attr
    Navigation,     // src.end  (association-end, yields a set)
    AllInstances,   // Class.allInstances()
    IsUndefined,    // src.oclIsUndefined()
    Iterate,        // src->forAll(v | body) and friends
    CollTest,       // src->isEmpty() / notEmpty()
    CollBinary,     // src->including(e) / excluding / union / intersection
    Compare,        // = <> < <= > >=
    BoolBinary,     // and or implies
    BoolNot,
  };
  enum class IterKind { ForAll, Exists, Select, Reject, Collect };
  enum class CollTestKind { IsEmpty, NotEmpty };
  enum class CollBinKind { Including, Excluding, Union, Intersection };
  enum class CmpKind { Eq, Ne, Lt, Le, Gt, Ge };
  enum class BoolBinKind { And, Or, Implies };

  Kind kind;
  Type type;

  bool bool_value = false;
  long long int_value = 0;
  std::string text;  // Var name / StrLit value / attr / end / class name

  ExprPtr src;
  ExprPtr arg;
  std::string iter_var;

  IterKind iter_kind = IterKind::ForAll;
  CollTestKind coll_test = CollTestKind::IsEmpty;
  CollBinKind coll_bin = CollBinKind::Including;
  CmpKind cmp = CmpKind::Eq;
  BoolBinKind bool_bin = BoolBinKind::And;

  // Navigation metadata resolved at parse time.
  std::string assoc;
  bool nav_to_left = false;  // true: src sits at the right end, result is the left end
};

// Canonical textual form; parsing it yields an equal AST.
std::string print(const ExprPtr& e);

// Free variables in the order of first occurrence.
std::vector<std::string> free_vars(const ExprPtr& e);

ExprPtr parse_ocl(const std::string& text, const DataModel& dm,
                  const std::vector<TypedVar>& vars);

}  // namespace oclsql::ocl
