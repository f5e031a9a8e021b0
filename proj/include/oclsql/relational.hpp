#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "oclsql/datamodel.hpp"

// Object-relational bridge: class models map to SQL schemata (one table per
// class keyed by `<class>_id`, one two-column table per association) and
// object models map to database instances. The instances here are in-memory
// values executed by the SQL interpreter; the DDL/DML text is emitted for
// inspection only.

namespace oclsql::rel {

struct Column {
  std::string name;
  enum class Type { Int, Varchar } type = Type::Int;
  std::optional<std::string> references;  // FK target table, keyed by its id column
};

struct Table {
  std::string name;
  std::vector<Column> columns;
  std::optional<std::string> primary_key;
  bool is_association = false;

  const Column* find_column(const std::string& name) const;
};

struct SqlSchema {
  std::vector<Table> tables;

  const Table* find_table(const std::string& name) const;
};

// A cell is an integer, a string, or NULL.
struct SqlValue {
  enum class Kind { Null, Int, Varchar, Bool };
  Kind kind = Kind::Null;
  long long int_value = 0;
  std::string str_value;
  bool bool_value = false;

  static SqlValue null() { return {}; }
  static SqlValue of_int(long long v) {
    SqlValue s;
    s.kind = Kind::Int;
    s.int_value = v;
    return s;
  }
  static SqlValue of_varchar(std::string v) {
    SqlValue s;
    s.kind = Kind::Varchar;
    s.str_value = std::move(v);
    return s;
  }
  static SqlValue of_bool(bool v) {
    SqlValue s;
    s.kind = Kind::Bool;
    s.bool_value = v;
    return s;
  }

  bool is_null() const { return kind == Kind::Null; }
  bool operator==(const SqlValue&) const = default;
};

using Row = std::vector<SqlValue>;

struct DatabaseInstance {
  // Table name -> rows, columns in schema order.
  std::map<std::string, std::vector<Row>> rows;
};

struct SqlAssignment {
  std::map<std::string, SqlValue> bindings;
};

SqlSchema o2s(const DataModel& dm);
DatabaseInstance o2s_inst(const DataModel& dm, const SqlSchema& schema, const ObjectModel& om);
SqlAssignment o2s_inst_assignment(const Assignment& sigma);

// Statement ordering: class tables, attribute columns, association tables;
// then object inserts, attribute updates, link inserts.
std::string emit_ddl(const DataModel& dm);
std::string emit_dml(const DataModel& dm, const ObjectModel& om);

// Key and foreign-key invariants of an instance against its schema.
void validate_instance(const DataModel& dm, const SqlSchema& schema,
                       const DatabaseInstance& db);

}  // namespace oclsql::rel
