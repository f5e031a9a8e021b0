#pragma once

#include <map>
#include <string>
#include <vector>

#include "oclsql/datamodel.hpp"
#include "oclsql/msfol.hpp"
#include "oclsql/ocl2msfol.hpp"
#include "oclsql/sql_ast.hpp"

// Translation of SQL select-statements into MSFOL. Every table and every
// (sub)select gets a unary index predicate over Int describing its row
// indices; every expression evaluated against a context gets a val function
// from row indices to the expression's sort. Boolean SQL expressions take
// values in the three-element SqlBool sort.

namespace oclsql::s2f {

// A single-row uniqueness goal that must be UNSAT before a scalar subselect
// translation is meaningful.
struct Obligation {
  std::string subselect;   // printed form, for reporting
  std::string index_pred;  // the subselect's index predicate
  msfol::TermPtr goal;     // negated single-row property
};

struct Output {
  msfol::Theory schema_axioms;  // index/val axioms of every table
  msfol::Theory select_axioms;  // index/val axioms of the statement
  std::string top_index;        // index predicate of the top-level select
  std::string top_item_val;     // val function of the top select-item
  msfol::Sort top_item_sort = msfol::Sort::SqlBool;
  std::vector<Obligation> obligations;
};

// Table-level axioms: row existence in both directions, index injectivity
// through id(), and the val functions of id, attribute and association-end
// columns.
msfol::Theory s2f_schema(const DataModel& dm);

// Full translation of a statement. Fresh names are assigned deterministically
// (subselects and joins numbered in generation order), so equal inputs yield
// byte-identical axioms. `frees` supplies the shared free-variable constants.
Output s2f_select(const sql::SelectPtr& statement, const DataModel& dm,
                  const rel::SqlSchema& schema, const o2f::FreeDecls& frees);

// The paper-shaped single-row formula for an index predicate.
msfol::TermPtr single_row_property(const std::string& index_pred);

}  // namespace oclsql::s2f
