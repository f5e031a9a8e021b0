#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "oclsql/datamodel.hpp"
#include "oclsql/relational.hpp"

namespace oclsql::sql {

// Static type of a SQL expression. `Id` marks integer columns that hold
// object identities (primary keys, foreign keys, association ends); they are
// Classifier-sorted on the logic side.
struct ExprType {
  enum class Kind { Bool, Int, Varchar, Id, Null };
  Kind kind = Kind::Null;
  std::string cls;  // Kind::Id: the class whose identities these are

  static ExprType boolean() { return {Kind::Bool, ""}; }
  static ExprType integer() { return {Kind::Int, ""}; }
  static ExprType varchar() { return {Kind::Varchar, ""}; }
  static ExprType id_of(std::string cls) { return {Kind::Id, std::move(cls)}; }
  static ExprType null() { return {Kind::Null, ""}; }

  std::string to_string() const;
};

struct Select;
using SelectPtr = std::shared_ptr<const Select>;

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class Kind {
    BoolLit,   // TRUE / FALSE
    NullLit,
    IntLit,
    Var,
    Column,    // qualifier.name, qualifier resolved at parse time
    Not,
    And,
    Or,
    Compare,
    Case,      // CASE WHEN args[0] THEN args[1] ELSE args[2] END
    IsNull,
    Exists,
    Scalar,    // single-row single-column subselect used as a value
  };
  enum class CmpKind { Eq, Ne, Lt, Le, Gt, Ge };

  Kind kind;
  ExprType type;
  bool bool_value = false;
  long long int_value = 0;
  std::string var;
  std::string qualifier;
  std::string column;
  CmpKind cmp = CmpKind::Eq;
  std::vector<ExprPtr> args;
  SelectPtr sub;
};

struct FromItem {
  enum class Kind { Table, Subselect };
  Kind kind = Kind::Table;
  std::string table;
  SelectPtr sub;
  std::string alias;                 // always set (defaults to the table name)
  std::vector<std::string> columns;  // output column names, in row order
};

struct SelectItem {
  ExprPtr expr;
  std::string name;  // output column name; empty when the item is unnamed
};

struct Select {
  std::vector<SelectItem> items;
  std::optional<FromItem> from;
  std::optional<FromItem> join;
  ExprPtr on;     // may be null
  ExprPtr where;  // may be null
};

std::string print(const SelectPtr& s);
std::string print(const ExprPtr& e);

// Variables occurring anywhere in the statement, in first-occurrence order.
std::vector<std::string> statement_vars(const SelectPtr& s);

// Parses one select-statement; trailing semicolon optional. Column
// references are resolved against the schema and must be unambiguous.
// Subselects see only their own tables (no correlated subqueries); free
// variables are taken from `vars`.
SelectPtr parse_select(const std::string& text, const rel::SqlSchema& schema,
                       const std::vector<TypedVar>& vars);

}  // namespace oclsql::sql
