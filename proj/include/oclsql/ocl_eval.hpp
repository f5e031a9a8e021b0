#pragma once

#include <vector>

#include "oclsql/datamodel.hpp"
#include "oclsql/ocl_ast.hpp"

namespace oclsql::ocl {

// An evaluation result: a scalar (which may be null), a finite set of
// scalars, or invalid.
struct Value {
  enum class Kind { Invalid, Scalar, Set };
  Kind kind = Kind::Invalid;
  OclScalar scalar;
  std::vector<OclScalar> set;  // sorted, unique

  static Value invalid() { return {}; }
  static Value of(OclScalar s) {
    Value v;
    v.kind = Kind::Scalar;
    v.scalar = std::move(s);
    return v;
  }
  static Value of_set(std::vector<OclScalar> elems);

  bool is_invalid() const { return kind == Kind::Invalid; }
  bool is_null() const { return kind == Kind::Scalar && scalar.is_null(); }
  bool is_true() const {
    return kind == Kind::Scalar && scalar.kind == OclScalar::Kind::Bool && scalar.bool_value;
  }
};

// The four truth values of an OCL Boolean expression.
enum class B4 { True, False, Null, Inval };

B4 b4_not(B4 a);
B4 b4_and(B4 a, B4 b);
B4 b4_or(B4 a, B4 b);
B4 b4_implies(B4 a, B4 b);

B4 truth_of(const Value& v);
Value value_of(B4 b);

// Evaluates `e` over `om` under the assignment. Never throws for semantic
// reasons; errors are the value `invalid`. Missing bindings for free
// variables are a caller bug and raise Error.
Value eval_ocl(const ObjectModel& om, const Assignment& sigma, const ExprPtr& e);

}  // namespace oclsql::ocl
