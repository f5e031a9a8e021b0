#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

// A small SMT-LIB2 solver for quantified problems over uninterpreted sorts,
// enumerated datatypes, linear integer comparisons and string equality.
// Answers are sound by construction: "unsat" is backed by a ground
// refutation, "sat" by an explicitly verified finite model.

namespace smtlite {

struct SolverError {
  std::string message;
};

[[noreturn]] inline void die(const std::string& message) { throw SolverError{message}; }

enum class SortKind { Bool, Int, String, Uninterpreted, Datatype };

struct SortInfo {
  SortKind kind = SortKind::Uninterpreted;
  std::string name;
  std::vector<std::string> constructors;  // Datatype
};

using SortId = int;
using TermId = int;

struct FunInfo {
  std::string name;
  std::vector<SortId> params;
  SortId result = 0;
  bool is_constructor = false;
};

struct Term {
  enum class Kind {
    True,
    False,
    IntLit,
    StrLit,
    Var,   // quantified variable (de-named: carries its symbol)
    App,   // declared function/constant application
    Eq,    // also covers Bool-typed equality (iff)
    Not,
    And,
    Or,
    Implies,
    Distinct,
    Lt,
    Le,
    Gt,
    Ge,
    Forall,
    Exists,
  };
  Kind kind = Kind::True;
  SortId sort = 0;
  long long int_value = 0;
  std::string sym;             // Var name / StrLit payload / App function name
  int fun = -1;                // App: function table index
  std::vector<TermId> args;
  std::vector<std::pair<std::string, SortId>> binders;
};

// Interning arena; structurally identical terms share one id.
class TermStore {
public:
  TermStore();

  SortId bool_sort() const { return 0; }
  SortId int_sort() const { return 1; }
  SortId string_sort() const { return 2; }

  SortId declare_sort(const std::string& name, SortKind kind);
  SortId add_datatype(const std::string& name, const std::vector<std::string>& constructors);
  std::optional<SortId> find_sort(const std::string& name) const;
  const SortInfo& sort(SortId s) const { return sorts_[s]; }
  int sort_count() const { return static_cast<int>(sorts_.size()); }

  int declare_fun(const std::string& name, std::vector<SortId> params, SortId result,
                  bool is_constructor = false);
  std::optional<int> find_fun(const std::string& name) const;
  const FunInfo& fun(int f) const { return funs_[f]; }
  int fun_count() const { return static_cast<int>(funs_.size()); }

  TermId mk_true();
  TermId mk_false();
  TermId mk_int(long long v);
  TermId mk_str(const std::string& s);
  TermId mk_var(const std::string& name, SortId sort);
  TermId mk_app(int fun, std::vector<TermId> args);
  TermId mk_eq(TermId a, TermId b);
  TermId mk_not(TermId a);
  TermId mk_and(std::vector<TermId> xs);
  TermId mk_or(std::vector<TermId> xs);
  TermId mk_implies(TermId a, TermId b);
  TermId mk_distinct(std::vector<TermId> xs);
  TermId mk_cmp(Term::Kind kind, TermId a, TermId b);
  TermId mk_quant(Term::Kind kind, std::vector<std::pair<std::string, SortId>> binders,
                  TermId body);

  const Term& term(TermId t) const { return terms_[t]; }
  int term_count() const { return static_cast<int>(terms_.size()); }
  std::string to_string(TermId t) const;

private:
  TermId intern(Term t);

  std::vector<SortInfo> sorts_;
  std::map<std::string, SortId> sort_names_;
  std::vector<FunInfo> funs_;
  std::map<std::string, int> fun_names_;
  std::vector<Term> terms_;
  std::map<std::string, TermId> memo_;
};

struct Problem {
  TermStore store;
  std::vector<TermId> assertions;
  bool has_check_sat = false;
};

// Parses the SMT-LIB2 subset emitted by the tool chain: declare-sort,
// declare-datatypes (nullary constructors), declare-fun/const, assert,
// check-sat; terms over and/or/not/=>/=/distinct/</<=/>/>=/forall/exists.
Problem parse_script(const std::string& text);

}  // namespace smtlite
