#include "oclsql/sql_exec.hpp"

#include <algorithm>

namespace oclsql::sql {

using rel::Row;
using rel::SqlValue;

/*
Three-valued tables:

  NOT:  TRUE->FALSE  FALSE->TRUE  NULL->NULL

  AND:  FALSE if either operand is FALSE, else NULL if either is NULL,
        else TRUE.

  OR:   TRUE if either operand is TRUE, else NULL if either is NULL,
        else FALSE.
*/
SqlValue sql3_not(const SqlValue& a) {
  if (a.is_null()) return SqlValue::null();
  return SqlValue::of_bool(!a.bool_value);
}

SqlValue sql3_and(const SqlValue& a, const SqlValue& b) {
  bool a_false = !a.is_null() && !a.bool_value;
  bool b_false = !b.is_null() && !b.bool_value;
  if (a_false || b_false) return SqlValue::of_bool(false);
  if (a.is_null() || b.is_null()) return SqlValue::null();
  return SqlValue::of_bool(true);
}

SqlValue sql3_or(const SqlValue& a, const SqlValue& b) {
  bool a_true = !a.is_null() && a.bool_value;
  bool b_true = !b.is_null() && b.bool_value;
  if (a_true || b_true) return SqlValue::of_bool(true);
  if (a.is_null() || b.is_null()) return SqlValue::null();
  return SqlValue::of_bool(false);
}

namespace {

bool is_true(const SqlValue& v) { return !v.is_null() && v.bool_value; }

// One candidate row of the current from/join context.
struct ContextRow {
  struct Part {
    const FromItem* item;
    const Row* row;
  };
  std::vector<Part> parts;

  const SqlValue& lookup(const std::string& alias, const std::string& column) const {
    for (const auto& part : parts) {
      if (part.item->alias != alias) continue;
      for (size_t i = 0; i < part.item->columns.size(); ++i)
        if (part.item->columns[i] == column) return (*part.row)[i];
    }
    fail("exec", "unresolved column " + alias + "." + column);
  }
};

struct Engine {
  const rel::DatabaseInstance& db;
  const rel::SqlAssignment& assignment;

  std::vector<Row> materialize(const FromItem& fi) {
    if (fi.kind == FromItem::Kind::Table) {
      auto it = db.rows.find(fi.table);
      if (it == db.rows.end()) fail("exec", "missing table '" + fi.table + "'");
      return it->second;
    }
    return exec(fi.sub).rows;
  }

  SqlValue eval(const ExprPtr& e, const ContextRow& ctx) {
    switch (e->kind) {
      case Expr::Kind::BoolLit: return SqlValue::of_bool(e->bool_value);
      case Expr::Kind::NullLit: return SqlValue::null();
      case Expr::Kind::IntLit: return SqlValue::of_int(e->int_value);
      case Expr::Kind::Var: {
        auto it = assignment.bindings.find(e->var);
        if (it == assignment.bindings.end()) fail("exec", "variable '" + e->var + "' not bound");
        return it->second;
      }
      case Expr::Kind::Column: return ctx.lookup(e->qualifier, e->column);
      case Expr::Kind::Not: return sql3_not(eval(e->args[0], ctx));
      case Expr::Kind::And: return sql3_and(eval(e->args[0], ctx), eval(e->args[1], ctx));
      case Expr::Kind::Or: return sql3_or(eval(e->args[0], ctx), eval(e->args[1], ctx));
      case Expr::Kind::Compare: {
        // Any NULL operand makes the comparison NULL.
        SqlValue a = eval(e->args[0], ctx);
        SqlValue b = eval(e->args[1], ctx);
        if (a.is_null() || b.is_null()) return SqlValue::null();
        bool result = false;
        switch (e->cmp) {
          case Expr::CmpKind::Eq: result = a == b; break;
          case Expr::CmpKind::Ne: result = !(a == b); break;
          case Expr::CmpKind::Lt: result = a.int_value < b.int_value; break;
          case Expr::CmpKind::Le: result = a.int_value <= b.int_value; break;
          case Expr::CmpKind::Gt: result = a.int_value > b.int_value; break;
          case Expr::CmpKind::Ge: result = a.int_value >= b.int_value; break;
        }
        return SqlValue::of_bool(result);
      }
      case Expr::Kind::Case: {
        // ELSE is taken when the condition is FALSE or NULL.
        SqlValue cond = eval(e->args[0], ctx);
        return eval(is_true(cond) ? e->args[1] : e->args[2], ctx);
      }
      case Expr::Kind::IsNull: return SqlValue::of_bool(eval(e->args[0], ctx).is_null());
      case Expr::Kind::Exists: return SqlValue::of_bool(!exec(e->sub).rows.empty());
      case Expr::Kind::Scalar: {
        ResultTable sub = exec(e->sub);
        if (sub.rows.size() != 1)
          throw ScalarCardinalityError("scalar subselect returned " +
                                       std::to_string(sub.rows.size()) +
                                       " rows: " + print(e->sub));
        if (sub.rows[0].size() != 1)
          throw ScalarCardinalityError("scalar subselect projects more than one column");
        return sub.rows[0][0];
      }
    }
    fail("exec", "unreachable expression kind");
  }

  ResultTable exec(const SelectPtr& s) {
    ResultTable out;
    for (size_t i = 0; i < s->items.size(); ++i) {
      const auto& item = s->items[i];
      out.columns.push_back(item.name.empty() ? print(item.expr) : item.name);
    }

    std::vector<ContextRow> contexts;
    std::vector<Row> left_rows, right_rows;  // must outlive `contexts`
    if (!s->from) {
      contexts.push_back(ContextRow{});
    } else {
      left_rows = materialize(*s->from);
      if (!s->join) {
        for (const Row& row : left_rows) {
          ContextRow ctx;
          ctx.parts.push_back({&*s->from, &row});
          contexts.push_back(ctx);
        }
      } else {
        // Cross product in left-major order, ON-filtered.
        right_rows = materialize(*s->join);
        for (const Row& lrow : left_rows) {
          for (const Row& rrow : right_rows) {
            ContextRow ctx;
            ctx.parts.push_back({&*s->from, &lrow});
            ctx.parts.push_back({&*s->join, &rrow});
            if (s->on && !is_true(eval(s->on, ctx))) continue;
            contexts.push_back(ctx);
          }
        }
      }
    }

    for (const ContextRow& ctx : contexts) {
      if (s->where && !is_true(eval(s->where, ctx))) continue;
      Row row;
      for (const auto& item : s->items) row.push_back(eval(item.expr, ctx));
      out.rows.push_back(std::move(row));
    }
    return out;
  }
};

}  // namespace

ResultTable exec_sql(const rel::DatabaseInstance& db, const rel::SqlAssignment& assignment,
                     const SelectPtr& s) {
  Engine engine{db, assignment};
  return engine.exec(s);
}

}  // namespace oclsql::sql
