#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "oclsql/error.hpp"

// Many-sorted first-order terms, formulas and theories, printed as SMT-LIB2.
// Formulas are Bool-sorted terms. Everything is immutable after construction;
// the factory functions in `mk` reject ill-sorted applications.

namespace oclsql::msfol {

enum class Sort { Bool, Int, String, Classifier, SqlBool };

const char* sort_name(Sort s);

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Binder {
  std::string name;
  Sort sort;
};

struct Term {
  enum class Kind {
    True,
    False,
    IntLit,
    StrLit,
    Sym,       // declared constant or function application (args may be empty)
    BoundVar,  // variable bound by an enclosing quantifier
    Eq,
    Distinct,
    Not,
    And,
    Or,
    Implies,
    Iff,
    Lt,
    Le,
    Gt,
    Ge,
    Forall,
    Exists,
  };

  Kind kind;
  Sort sort;
  std::string name;          // Sym / BoundVar / StrLit payload
  long long int_value = 0;   // IntLit payload
  std::vector<TermPtr> args;
  std::vector<Binder> binders;  // Forall / Exists
};

namespace mk {

TermPtr tru();
TermPtr fls();
TermPtr int_lit(long long v);
TermPtr str_lit(const std::string& s);
TermPtr sym(const std::string& name, Sort sort);  // nullary symbol reference
TermPtr app(const std::string& name, const std::vector<Sort>& params, Sort result,
            const std::vector<TermPtr>& args);
TermPtr bound(const std::string& name, Sort sort);
// SqlBool enumeration literals TRUE / FALSE / NULL.
TermPtr sql_true();
TermPtr sql_false();
TermPtr sql_null();

TermPtr eq(TermPtr a, TermPtr b);
TermPtr ne(TermPtr a, TermPtr b);
TermPtr distinct(std::vector<TermPtr> xs);
TermPtr not_(TermPtr a);
TermPtr and_(std::vector<TermPtr> xs);
TermPtr or_(std::vector<TermPtr> xs);
TermPtr implies(TermPtr a, TermPtr b);
TermPtr iff(TermPtr a, TermPtr b);
TermPtr lt(TermPtr a, TermPtr b);
TermPtr le(TermPtr a, TermPtr b);
TermPtr gt(TermPtr a, TermPtr b);
TermPtr ge(TermPtr a, TermPtr b);
TermPtr forall(std::vector<Binder> binders, TermPtr body);
TermPtr exists(std::vector<Binder> binders, TermPtr body);

}  // namespace mk

// Renders a term in SMT-LIB2 concrete syntax. Pure and deterministic.
std::string to_smt(const TermPtr& t);

struct Declaration {
  std::string name;
  std::vector<Sort> params;
  Sort result;

  bool operator==(const Declaration& other) const = default;
};

// An ordered collection of declarations and closed Bool-sorted axioms, plus
// optional goal assertions kept separate so provers can see what is being
// refuted. Union keeps first-occurrence order and drops exact duplicates.
class Theory {
public:
  void declare(const Declaration& d);
  void add_axiom(TermPtr axiom, const std::string& comment = "");
  void add_goal(TermPtr goal, const std::string& comment = "");

  const std::vector<Declaration>& declarations() const { return decls_; }
  const std::vector<TermPtr>& axioms() const { return axioms_; }
  const std::vector<TermPtr>& goals() const { return goals_; }

  bool has_declaration(const std::string& name) const;
  const Declaration* find_declaration(const std::string& name) const;

private:
  friend Theory theory_union(const Theory& a, const Theory& b);

  std::vector<Declaration> decls_;
  std::vector<TermPtr> axioms_;
  std::vector<std::string> axiom_comments_;
  std::vector<TermPtr> goals_;
  std::vector<std::string> goal_comments_;

public:
  const std::vector<std::string>& axiom_comments() const { return axiom_comments_; }
  const std::vector<std::string>& goal_comments() const { return goal_comments_; }
};

// Declarations and axioms of both sides concatenated; identical declarations
// and textually identical axioms are kept once. A name redeclared with a
// different signature is an error.
Theory theory_union(const Theory& a, const Theory& b);

// Full SMT-LIB2 script: logic, Classifier sort, SqlBool datatype,
// declarations, one assert per axiom and goal, check-sat. Byte-deterministic.
std::string emit_smtlib(const Theory& t);

// Escapes a source-language name (which may contain spaces, parentheses,
// pipes, ...) into an SMT-LIB2 simple symbol. '!' is the escape character,
// so the encoding is reversible via unsanitize_symbol.
std::string sanitize_symbol(const std::string& raw);
std::string unsanitize_symbol(const std::string& sanitized);

}  // namespace oclsql::msfol
