#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "oclsql/datamodel.hpp"
#include "oclsql/msfol.hpp"
#include "oclsql/ocl_ast.hpp"

// Translation of class models and OCL Boolean expressions into MSFOL.
//
// A data model becomes a theory with one unary predicate per class, one
// function per attribute and one binary predicate per association, plus the
// distinguished null/invalid constants of every sort. A Boolean expression e
// becomes four formulas characterising exactly when e evaluates to true,
// false, null or invalid. Non-Boolean subexpressions translate to terms;
// set-valued subexpressions translate to defined predicates whose axioms are
// collected on the side (the definitions theory).

namespace oclsql::o2f {

msfol::Theory o2f_data(const DataModel& dm);

// The MSFOL function symbol and result sort of an attribute. Same-named
// attributes of different classes share one symbol when their value sorts
// agree and are class-qualified otherwise.
std::string attr_symbol(const DataModel& dm, const Attribute& attr);
msfol::Sort attr_sort(const Attribute& attr);

msfol::TermPtr null_of(msfol::Sort s);
msfol::TermPtr inval_of(msfol::Sort s);

// How a free variable is realised in the theory.
struct VarEntry {
  enum class Kind { Scalar, Boolean } kind = Kind::Scalar;
  msfol::TermPtr term;  // Scalar: the declared constant
  msfol::Sort sort = msfol::Sort::Int;
  // Boolean variables are encoded by three Bool constants (true/null/invalid
  // markers with an at-most-one axiom); false is the absence of all three.
  msfol::TermPtr is_true, is_null, is_inval;
};

struct FreeDecls {
  msfol::Theory theory;
  std::map<std::string, VarEntry> env;
};

// One constant per variable: object-typed variables are Classifier constants
// constrained to their class predicate; Integer/String variables are
// unconstrained (so satisfiability ranges over null and invalid scalars too).
FreeDecls declare_frees(const std::vector<TypedVar>& vars, const DataModel& dm);

struct BoolInfo {
  msfol::TermPtr t, f, n, i;
};

// Accumulates the definitions (set predicates, literal axioms) produced by
// translating expressions. One translator must be reused across all four
// valuations of the same problem so definitions are emitted exactly once.
class Translator {
public:
  Translator(const DataModel& dm, const FreeDecls& frees);

  msfol::TermPtr o2f_true(const ocl::ExprPtr& e) { return translate(e).t; }
  msfol::TermPtr o2f_false(const ocl::ExprPtr& e) { return translate(e).f; }
  msfol::TermPtr o2f_null(const ocl::ExprPtr& e) { return translate(e).n; }
  msfol::TermPtr o2f_inval(const ocl::ExprPtr& e) { return translate(e).i; }
  BoolInfo translate(const ocl::ExprPtr& e);

  // o2f_def: everything the translated formulas depend on.
  const msfol::Theory& definitions() const { return defs_; }

private:
  struct ValueInfo {
    msfol::TermPtr term;
    msfol::TermPtr is_null, is_inval;
    msfol::Sort sort;
  };
  struct SetOcc {
    std::string pred;
    std::vector<msfol::TermPtr> params;
    std::vector<msfol::Sort> param_sorts;
    msfol::Sort elem;
    msfol::TermPtr is_inval;
  };
  struct Env {
    std::map<std::string, VarEntry> vars;
  };

  BoolInfo bool_info(const ocl::ExprPtr& e, const Env& env);
  ValueInfo value_info(const ocl::ExprPtr& e, const Env& env,
                       std::optional<msfol::Sort> hint);
  SetOcc set_info(const ocl::ExprPtr& e, const Env& env);

  msfol::TermPtr apply_set(const SetOcc& s, msfol::TermPtr elem);
  std::string ensure_set_def(const ocl::ExprPtr& e, const Env& env, const SetOcc& occ);
  void literal_axiom(const msfol::TermPtr& lit, msfol::Sort sort, const std::string& text);
  std::string fresh_binder(const std::string& base, const Env& env) const;

  const DataModel& dm_;
  Env globals_;
  msfol::Theory defs_;
  std::set<std::string> defined_sets_;
  std::set<std::string> literal_done_;
};

}  // namespace oclsql::o2f
