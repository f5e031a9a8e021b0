#include "oclsql/relational.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace oclsql::rel {

const Column* Table::find_column(const std::string& name) const {
  for (const auto& c : columns)
    if (c.name == name) return &c;
  return nullptr;
}

const Table* SqlSchema::find_table(const std::string& name) const {
  for (const auto& t : tables)
    if (t.name == name) return &t;
  return nullptr;
}

SqlSchema o2s(const DataModel& dm) {
  SqlSchema schema;
  for (const auto& cls : dm.classes) {
    Table t;
    t.name = cls;
    t.primary_key = cls + "_id";
    t.columns.push_back({cls + "_id", Column::Type::Int, std::nullopt});
    for (const Attribute* attr : dm.attributes_of(cls)) {
      Column col;
      col.name = attr->name;
      switch (attr->type.kind) {
        case AttrType::Kind::Integer: col.type = Column::Type::Int; break;
        case AttrType::Kind::String: col.type = Column::Type::Varchar; break;
        case AttrType::Kind::Class:
          col.type = Column::Type::Int;
          col.references = attr->type.class_name;
          break;
      }
      t.columns.push_back(col);
    }
    schema.tables.push_back(std::move(t));
  }
  for (const auto& as : dm.associations) {
    Table t;
    t.name = as.name;
    t.is_association = true;
    t.columns.push_back({as.left_end, Column::Type::Int, as.left_class});
    t.columns.push_back({as.right_end, Column::Type::Int, as.right_class});
    schema.tables.push_back(std::move(t));
  }
  return schema;
}

namespace {

SqlValue cell_of(const OclScalar& v) {
  switch (v.kind) {
    case OclScalar::Kind::Null: return SqlValue::null();
    case OclScalar::Kind::Int: return SqlValue::of_int(v.int_value);
    case OclScalar::Kind::String: return SqlValue::of_varchar(v.str_value);
    case OclScalar::Kind::Object: return SqlValue::of_int(v.object);
    case OclScalar::Kind::Bool: return SqlValue::of_bool(v.bool_value);
  }
  return SqlValue::null();
}

}  // namespace

DatabaseInstance o2s_inst(const DataModel& dm, const SqlSchema& schema, const ObjectModel& om) {
  DatabaseInstance db;
  for (const auto& table : schema.tables) db.rows[table.name] = {};
  for (const auto& cls : dm.classes) {
    const Table* table = schema.find_table(cls);
    for (ObjectId id : om.objects_of_class(cls)) {
      Row row;
      for (const auto& col : table->columns) {
        if (table->primary_key && col.name == *table->primary_key)
          row.push_back(SqlValue::of_int(id));
        else
          row.push_back(cell_of(om.attribute_value(col.name, id)));
      }
      db.rows[cls].push_back(std::move(row));
    }
  }
  for (const auto& as : dm.associations) {
    for (const auto& l : om.links) {
      if (l.assoc != as.name) continue;
      db.rows[as.name].push_back({SqlValue::of_int(l.left), SqlValue::of_int(l.right)});
    }
  }
  return db;
}

SqlAssignment o2s_inst_assignment(const Assignment& sigma) {
  SqlAssignment out;
  for (const auto& [name, value] : sigma.bindings) out.bindings[name] = cell_of(value);
  return out;
}

namespace {

std::string sql_literal(const SqlValue& v) {
  switch (v.kind) {
    case SqlValue::Kind::Null: return "NULL";
    case SqlValue::Kind::Int: return std::to_string(v.int_value);
    case SqlValue::Kind::Varchar: {
      std::string out = "'";
      for (char c : v.str_value) {
        out += c;
        if (c == '\'') out += '\'';
      }
      return out + "'";
    }
    case SqlValue::Kind::Bool: return v.bool_value ? "TRUE" : "FALSE";
  }
  return "NULL";
}

}  // namespace

std::string emit_ddl(const DataModel& dm) {
  std::ostringstream out;
  for (const auto& cls : dm.classes)
    out << "CREATE TABLE " << cls << " (" << cls << "_id int PRIMARY KEY);\n";
  for (const auto& attr : dm.attributes) {
    const char* sql_type = attr.type.kind == AttrType::Kind::String ? "varchar" : "int";
    out << "ALTER TABLE " << attr.owner << " ADD COLUMN " << attr.name << ' ' << sql_type
        << ";\n";
    if (attr.type.kind == AttrType::Kind::Class) {
      out << "ALTER TABLE " << attr.owner << " ADD FOREIGN KEY fk_" << attr.owner << '_'
          << attr.name << " (" << attr.name << ") REFERENCES " << attr.type.class_name << " ("
          << attr.type.class_name << "_id);\n";
    }
  }
  for (const auto& as : dm.associations) {
    out << "CREATE TABLE " << as.name << " (" << as.left_end << " int, " << as.right_end
        << " int, FOREIGN KEY fk_" << as.left_class << '_' << as.left_end << " (" << as.left_end
        << ") REFERENCES " << as.left_class << " (" << as.left_class << "_id), FOREIGN KEY fk_"
        << as.right_class << '_' << as.right_end << " (" << as.right_end << ") REFERENCES "
        << as.right_class << " (" << as.right_class << "_id));\n";
  }
  return out.str();
}

std::string emit_dml(const DataModel& dm, const ObjectModel& om) {
  std::ostringstream out;
  for (const auto& cls : dm.classes) {
    for (ObjectId id : om.objects_of_class(cls))
      out << "INSERT INTO " << cls << " (" << cls << "_id) VALUES (" << id << ");\n";
  }
  for (const auto& cls : dm.classes) {
    for (ObjectId id : om.objects_of_class(cls)) {
      for (const Attribute* attr : dm.attributes_of(cls)) {
        OclScalar v = om.attribute_value(attr->name, id);
        if (v.is_null()) continue;
        out << "UPDATE " << cls << " SET " << attr->name << " = " << sql_literal(cell_of(v))
            << " WHERE " << cls << "_id = " << id << ";\n";
      }
    }
  }
  for (const auto& as : dm.associations) {
    for (const auto& l : om.links) {
      if (l.assoc != as.name) continue;
      out << "INSERT INTO " << as.name << " (" << as.left_end << ", " << as.right_end
          << ") VALUES (" << l.left << ", " << l.right << ");\n";
    }
  }
  return out.str();
}

void validate_instance(const DataModel& dm, const SqlSchema& schema,
                       const DatabaseInstance& db) {
  for (const auto& table : schema.tables) {
    auto it = db.rows.find(table.name);
    if (it == db.rows.end()) fail("instance", "missing table '" + table.name + "'");
    const auto& rows = it->second;
    for (const auto& row : rows)
      if (row.size() != table.columns.size())
        fail("instance", "row width mismatch in '" + table.name + "'");
    if (table.primary_key) {
      std::set<long long> keys;
      for (const auto& row : rows) {
        const SqlValue& key = row[0];
        if (key.kind != SqlValue::Kind::Int)
          fail("instance", "non-integer key in '" + table.name + "'");
        if (!keys.insert(key.int_value).second)
          fail("instance", "duplicate key " + std::to_string(key.int_value) + " in '" +
                               table.name + "'");
      }
    }
    if (table.is_association) {
      std::set<std::pair<long long, long long>> pairs;
      for (const auto& row : rows) {
        if (!pairs.insert({row[0].int_value, row[1].int_value}).second)
          fail("instance", "duplicate link in '" + table.name + "'");
      }
    }
    for (size_t ci = 0; ci < table.columns.size(); ++ci) {
      const Column& col = table.columns[ci];
      if (!col.references) continue;
      const auto& target_rows = db.rows.at(*col.references);
      for (const auto& row : rows) {
        if (row[ci].is_null()) continue;
        bool found = false;
        for (const auto& target : target_rows)
          if (target[0].int_value == row[ci].int_value) found = true;
        if (!found)
          fail("instance", "foreign key violation in '" + table.name + "." + col.name + "'");
      }
    }
  }
  (void)dm;
}

}  // namespace oclsql::rel
