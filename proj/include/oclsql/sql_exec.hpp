#pragma once

#include <string>
#include <vector>

#include "oclsql/relational.hpp"
#include "oclsql/sql_ast.hpp"

namespace oclsql::sql {

// Distinct error for scalar subselects that do not return exactly one row;
// the oracle records these separately from ordinary discrepancies.
class ScalarCardinalityError : public Error {
public:
  explicit ScalarCardinalityError(const std::string& message) : Error(message) {}
};

struct ResultTable {
  std::vector<std::string> columns;
  std::vector<rel::Row> rows;
};

// Executes the statement over the instance under SQL three-valued semantics.
// WHERE and ON keep rows whose condition is TRUE; joins enumerate the cross
// product left-major; a from-less select yields exactly one row.
ResultTable exec_sql(const rel::DatabaseInstance& db, const rel::SqlAssignment& assignment,
                     const SelectPtr& s);

// Three-valued logic over {TRUE, FALSE, NULL} as SqlValue helpers.
rel::SqlValue sql3_not(const rel::SqlValue& a);
rel::SqlValue sql3_and(const rel::SqlValue& a, const rel::SqlValue& b);
rel::SqlValue sql3_or(const rel::SqlValue& a, const rel::SqlValue& b);

}  // namespace oclsql::sql
