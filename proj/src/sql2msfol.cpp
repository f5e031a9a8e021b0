#include "oclsql/sql2msfol.hpp"

#include <algorithm>
#include <functional>

namespace oclsql::s2f {

using msfol::Binder;
using msfol::Sort;
using msfol::TermPtr;
using msfol::Theory;
namespace mk = msfol::mk;
using sql::Expr;
using sql::ExprPtr;
using sql::FromItem;
using sql::SelectPtr;

namespace {

TermPtr ivar(const std::string& name) { return mk::bound(name, Sort::Int); }

TermPtr index_of(const std::string& pred, TermPtr x) {
  return mk::app(pred, {Sort::Int}, Sort::Bool, {std::move(x)});
}

TermPtr unary(const std::string& fn, Sort result, TermPtr x) {
  return mk::app(fn, {Sort::Int}, result, {std::move(x)});
}

TermPtr id_of(TermPtr x) { return unary("id", Sort::Classifier, std::move(x)); }

std::string table_index(const std::string& table) {
  return "index_" + msfol::sanitize_symbol(table);
}

std::string table_val(const std::string& table, const std::string& column) {
  return "val_" + msfol::sanitize_symbol(table) + "_" + msfol::sanitize_symbol(column);
}

TermPtr class_pred(const std::string& cls, TermPtr x) {
  return mk::app(msfol::sanitize_symbol(cls), {Sort::Classifier}, Sort::Bool, {std::move(x)});
}

TermPtr assoc_pred(const std::string& as, TermPtr l, TermPtr r) {
  return mk::app(msfol::sanitize_symbol(as), {Sort::Classifier, Sort::Classifier}, Sort::Bool,
                 {std::move(l), std::move(r)});
}

Sort column_sort(const DataModel& dm, const rel::Table& table, const rel::Column& col) {
  if (table.primary_key && col.name == *table.primary_key) return Sort::Classifier;
  if (table.is_association) return Sort::Classifier;
  const Attribute* attr = dm.find_attribute(table.name, col.name);
  if (!attr) fail("s2f", "column '" + col.name + "' has no attribute in '" + table.name + "'");
  return o2f::attr_sort(*attr);
}

}  // namespace

msfol::TermPtr single_row_property(const std::string& index_pred) {
  TermPtr x = ivar("x");
  TermPtr y = ivar("y");
  return mk::exists(
      {{"x", Sort::Int}},
      mk::and_({index_of(index_pred, x),
                mk::forall({{"y", Sort::Int}},
                           mk::implies(mk::ne(y, x), mk::not_(index_of(index_pred, y))))}));
}

Theory s2f_schema(const DataModel& dm) {
  Theory t;
  t.declare({"id", {Sort::Int}, Sort::Classifier});

  for (const auto& cls : dm.classes) {
    const std::string idx = table_index(cls);
    t.declare({idx, {Sort::Int}, Sort::Bool});
    TermPtr x = ivar("x");
    TermPtr y = ivar("y");
    TermPtr c = mk::bound("c", Sort::Classifier);

    t.add_axiom(mk::forall({{"x", Sort::Int}},
                           mk::implies(index_of(idx, x),
                                       mk::exists({{"c", Sort::Classifier}},
                                                  mk::and_({class_pred(cls, c),
                                                            mk::eq(c, id_of(x))})))),
                "rows of " + cls + " are objects");
    t.add_axiom(mk::forall({{"c", Sort::Classifier}},
                           mk::implies(class_pred(cls, c),
                                       mk::exists({{"x", Sort::Int}},
                                                  mk::and_({index_of(idx, x),
                                                            mk::eq(c, id_of(x))})))),
                "objects of " + cls + " have rows");
    t.add_axiom(
        mk::forall({{"x", Sort::Int}, {"y", Sort::Int}},
                   mk::implies(mk::and_({index_of(idx, x), index_of(idx, y), mk::ne(x, y)}),
                               mk::ne(id_of(x), id_of(y)))),
        "distinct rows of " + cls + " hold distinct objects");

    const std::string key_col = cls + "_id";
    const std::string key_val = table_val(cls, key_col);
    t.declare({key_val, {Sort::Int}, Sort::Classifier});
    t.add_axiom(mk::forall({{"x", Sort::Int}},
                           mk::implies(index_of(idx, x),
                                       mk::eq(unary(key_val, Sort::Classifier, x), id_of(x)))));

    for (const Attribute* attr : dm.attributes_of(cls)) {
      const Sort sort = o2f::attr_sort(*attr);
      const std::string val = table_val(cls, attr->name);
      t.declare({val, {Sort::Int}, sort});
      t.add_axiom(
          mk::forall({{"x", Sort::Int}},
                     mk::implies(index_of(idx, x),
                                 mk::eq(unary(val, sort, x),
                                        mk::app(o2f::attr_symbol(dm, *attr),
                                                {Sort::Classifier}, sort, {id_of(x)})))));
    }
  }

  for (const auto& as : dm.associations) {
    const std::string idx = table_index(as.name);
    const std::string left_fn = "left_" + msfol::sanitize_symbol(as.name);
    const std::string right_fn = "right_" + msfol::sanitize_symbol(as.name);
    t.declare({idx, {Sort::Int}, Sort::Bool});
    t.declare({left_fn, {Sort::Int}, Sort::Int});
    t.declare({right_fn, {Sort::Int}, Sort::Int});

    TermPtr x = ivar("x");
    TermPtr y = ivar("y");
    TermPtr c = mk::bound("c", Sort::Classifier);
    TermPtr d = mk::bound("d", Sort::Classifier);
    auto left_at = [&](TermPtr v) { return unary(left_fn, Sort::Int, std::move(v)); };
    auto right_at = [&](TermPtr v) { return unary(right_fn, Sort::Int, std::move(v)); };

    t.add_axiom(
        mk::forall(
            {{"x", Sort::Int}, {"y", Sort::Int}},
            mk::implies(mk::and_({index_of(idx, x), index_of(idx, y), mk::ne(x, y)}),
                        mk::not_(mk::and_({mk::eq(left_at(x), left_at(y)),
                                           mk::eq(right_at(x), right_at(y))})))),
        "rows of " + as.name + " are distinct pairs");
    t.add_axiom(
        mk::forall({{"c", Sort::Classifier}, {"d", Sort::Classifier}},
                   mk::implies(assoc_pred(as.name, c, d),
                               mk::exists({{"x", Sort::Int}},
                                          mk::and_({index_of(idx, x),
                                                    mk::eq(id_of(left_at(x)), c),
                                                    mk::eq(id_of(right_at(x)), d)})))),
        "links of " + as.name + " have rows");
    t.add_axiom(
        mk::forall({{"x", Sort::Int}},
                   mk::implies(index_of(idx, x),
                               mk::exists({{"c", Sort::Classifier}, {"d", Sort::Classifier}},
                                          mk::and_({assoc_pred(as.name, c, d),
                                                    mk::eq(id_of(left_at(x)), c),
                                                    mk::eq(id_of(right_at(x)), d)})))),
        "rows of " + as.name + " are links");

    const std::string lval = table_val(as.name, as.left_end);
    const std::string rval = table_val(as.name, as.right_end);
    t.declare({lval, {Sort::Int}, Sort::Classifier});
    t.declare({rval, {Sort::Int}, Sort::Classifier});
    t.add_axiom(mk::forall({{"x", Sort::Int}},
                           mk::implies(index_of(idx, x),
                                       mk::eq(unary(lval, Sort::Classifier, x),
                                              id_of(left_at(x))))));
    t.add_axiom(mk::forall({{"x", Sort::Int}},
                           mk::implies(index_of(idx, x),
                                       mk::eq(unary(rval, Sort::Classifier, x),
                                              id_of(right_at(x))))));
  }
  return t;
}

namespace {

// A value context against which expressions are evaluated: a base table, a
// (sub)select, or the intermediate table of a join.
struct Ctx {
  enum class Kind { Table, Select, Join };
  Kind kind = Kind::Table;
  std::string name;              // index predicate suffix ("Student", "sel", "join1")
  const sql::Select* node = nullptr;  // Select/Join: the owning select
  std::string left_fn, right_fn;      // Join: pairing functions

  std::string index_pred() const {
    return kind == Kind::Table ? table_index(name) : "index_" + name;
  }
};

struct ValRef {
  std::string fn;
  Sort sort = Sort::SqlBool;
};

// SqlBool exhaustiveness is a datatype property; val results of Boolean
// expressions live in {TRUE, FALSE, NULL} by construction.
TermPtr null_of_sort(Sort s) {
  switch (s) {
    case Sort::SqlBool: return mk::sql_null();
    case Sort::Int: return o2f::null_of(Sort::Int);
    case Sort::String: return o2f::null_of(Sort::String);
    case Sort::Classifier: return o2f::null_of(Sort::Classifier);
    default: fail("s2f", "no null for this sort");
  }
}

// val-function names embed a compact form of the expression: one layer of
// outer parentheses and all spaces dropped, the rest escaped reversibly.
std::string val_name(const std::string& ctx, const sql::ExprPtr& e) {
  std::string body = sql::print(e);
  if (body.size() >= 2 && body.front() == '(' && body.back() == ')') {
    int depth = 0;
    bool wraps = true;
    for (size_t i = 0; i + 1 < body.size(); ++i) {
      if (body[i] == '(') ++depth;
      if (body[i] == ')' && --depth == 0) {
        wraps = false;
        break;
      }
    }
    if (wraps) body = body.substr(1, body.size() - 2);
  }
  std::string compact;
  for (char c : body)
    if (c != ' ') compact += c;
  return msfol::sanitize_symbol("val_" + ctx + "_" + compact);
}

class Generator {
public:
  Generator(const DataModel& dm, const rel::SqlSchema& schema, const o2f::FreeDecls& frees)
      : dm_(dm), schema_(schema), frees_(frees) {}

  Output run(const SelectPtr& statement) {
    Ctx top = gen_select(statement, /*top=*/true);
    Output result;
    result.schema_axioms = s2f_schema(dm_);
    result.select_axioms = std::move(out_);
    result.top_index = top.index_pred();
    ValRef item = val_memo_.at(key_of(top, statement->items[0].expr));
    result.top_item_val = item.fn;
    result.top_item_sort = item.sort;
    result.obligations = std::move(obligations_);
    return result;
  }

private:
  std::string key_of(const Ctx& ctx, const ExprPtr& e) const {
    return ctx.name + "|" + sql::print(e);
  }

  Sort sort_of(const sql::ExprType& t, Sort fallback = Sort::Int) const {
    switch (t.kind) {
      case sql::ExprType::Kind::Bool: return Sort::SqlBool;
      case sql::ExprType::Kind::Int: return Sort::Int;
      case sql::ExprType::Kind::Varchar: return Sort::String;
      case sql::ExprType::Kind::Id: return Sort::Classifier;
      case sql::ExprType::Kind::Null: return fallback;
    }
    return fallback;
  }

  // Generates index and val axioms for one (sub)select; returns its context.
  Ctx gen_select(const SelectPtr& s, bool top) {
    Ctx ctx;
    ctx.kind = Ctx::Kind::Select;
    ctx.node = s.get();
    ctx.name = top ? "sel" : "sub" + std::to_string(++sub_counter_);
    out_.declare({ctx.index_pred(), {Sort::Int}, Sort::Bool});

    if (!s->from) {
      // A from-less select returns exactly one row.
      out_.add_axiom(single_row_property(ctx.index_pred()),
                     "single row of " + ctx.name);
      for (const auto& item : s->items) gen_expr(item.expr, ctx);
      return ctx;
    }

    Ctx from_ctx = from_item_ctx(*s->from);

    if (!s->join) {
      TermPtr x = ivar("x");
      TermPtr membership = index_of(from_ctx.index_pred(), x);
      if (s->where) {
        ValRef w = gen_expr(s->where, from_ctx);
        membership = mk::and_(
            {membership, mk::eq(unary(w.fn, w.sort, x), mk::sql_true())});
      }
      out_.add_axiom(mk::forall({{"x", Sort::Int}},
                                mk::iff(index_of(ctx.index_pred(), x), membership)),
                     "rows of " + ctx.name);
      for (const auto& item : s->items) gen_expr(item.expr, ctx);
      return ctx;
    }

    // Join: a fresh intermediate table with its own pairing functions.
    Ctx join_ctx;
    join_ctx.kind = Ctx::Kind::Join;
    join_ctx.node = s.get();
    join_ctx.name = "join" + std::to_string(++join_counter_);
    join_ctx.left_fn = "left_" + join_ctx.name;
    join_ctx.right_fn = "right_" + join_ctx.name;
    out_.declare({join_ctx.index_pred(), {Sort::Int}, Sort::Bool});
    out_.declare({join_ctx.left_fn, {Sort::Int}, Sort::Int});
    out_.declare({join_ctx.right_fn, {Sort::Int}, Sort::Int});
    join_of_[s.get()] = join_ctx;

    Ctx right_ctx = from_item_ctx(*s->join);

    TermPtr x = ivar("x");
    TermPtr y = ivar("y");
    TermPtr z = ivar("z");
    auto jleft = [&](TermPtr v) { return unary(join_ctx.left_fn, Sort::Int, std::move(v)); };
    auto jright = [&](TermPtr v) { return unary(join_ctx.right_fn, Sort::Int, std::move(v)); };

    out_.add_axiom(
        mk::forall({{"x", Sort::Int}, {"y", Sort::Int}},
                   mk::implies(mk::and_({index_of(join_ctx.index_pred(), x),
                                         index_of(join_ctx.index_pred(), y), mk::ne(x, y)}),
                               mk::not_(mk::and_({mk::eq(jleft(x), jleft(y)),
                                                  mk::eq(jright(x), jright(y))})))),
        "rows of " + join_ctx.name + " are distinct pairs");
    out_.add_axiom(
        mk::forall({{"x", Sort::Int}},
                   mk::implies(index_of(join_ctx.index_pred(), x),
                               mk::exists({{"y", Sort::Int}, {"z", Sort::Int}},
                                          mk::and_({index_of(from_ctx.index_pred(), y),
                                                    index_of(right_ctx.index_pred(), z),
                                                    mk::eq(y, jleft(x)),
                                                    mk::eq(z, jright(x))})))),
        "rows of " + join_ctx.name + " come from pairs");
    out_.add_axiom(
        mk::forall({{"y", Sort::Int}, {"z", Sort::Int}},
                   mk::implies(mk::and_({index_of(from_ctx.index_pred(), y),
                                         index_of(right_ctx.index_pred(), z)}),
                               mk::exists({{"x", Sort::Int}},
                                          mk::and_({index_of(join_ctx.index_pred(), x),
                                                    mk::eq(y, jleft(x)),
                                                    mk::eq(z, jright(x))})))),
        "pairs have rows in " + join_ctx.name);

    TermPtr membership = index_of(join_ctx.index_pred(), x);
    if (s->on) {
      ValRef on = gen_expr(s->on, join_ctx);
      membership =
          mk::and_({membership, mk::eq(unary(on.fn, on.sort, x), mk::sql_true())});
    }
    if (s->where) {
      ValRef w = gen_expr(s->where, join_ctx);
      membership =
          mk::and_({membership, mk::eq(unary(w.fn, w.sort, x), mk::sql_true())});
    }
    out_.add_axiom(mk::forall({{"x", Sort::Int}},
                              mk::iff(index_of(ctx.index_pred(), x), membership)),
                   "rows of " + ctx.name);
    for (const auto& item : s->items) gen_expr(item.expr, ctx);
    return ctx;
  }

  Ctx from_item_ctx(const FromItem& fi) {
    if (fi.kind == FromItem::Kind::Table) {
      Ctx ctx;
      ctx.kind = Ctx::Kind::Table;
      ctx.name = fi.table;
      return ctx;
    }
    auto it = subselect_ctx_.find(fi.sub.get());
    if (it != subselect_ctx_.end()) return it->second;
    Ctx ctx = gen_select(fi.sub, /*top=*/false);
    subselect_ctx_[fi.sub.get()] = ctx;
    return ctx;
  }

  // Resolves a column reference in `ctx` to the val function of the from-item
  // it comes from, plus the pairing function to go through (empty = same row).
  struct ColumnBase {
    ValRef base;
    std::string through;  // left/right pairing fn of the join, or empty
  };

  ColumnBase resolve_column(const ExprPtr& e, const Ctx& ctx) {
    if (ctx.kind == Ctx::Kind::Table) {
      const rel::Table* table = schema_.find_table(ctx.name);
      if (!table || !table->find_column(e->column))
        fail("s2f", "column " + e->qualifier + "." + e->column + " is not in table " + ctx.name);
      return {{table_val(ctx.name, e->column), column_sort(dm_, *table, *table->find_column(e->column))},
              ""};
    }
    const sql::Select* node = ctx.node;
    const FromItem* fi = nullptr;
    bool is_right = false;
    if (node->from && node->from->alias == e->qualifier) {
      fi = &*node->from;
    } else if (node->join && node->join->alias == e->qualifier) {
      fi = &*node->join;
      is_right = true;
    } else {
      fail("s2f", "unresolved alias '" + e->qualifier + "'");
    }

    ValRef base;
    if (fi->kind == FromItem::Kind::Table) {
      const rel::Table* table = schema_.find_table(fi->table);
      const rel::Column* col = table ? table->find_column(e->column) : nullptr;
      if (!col) fail("s2f", "unknown column '" + e->column + "'");
      base = {table_val(fi->table, e->column), column_sort(dm_, *table, *col)};
    } else {
      const Ctx& sub = subselect_ctx_.at(fi->sub.get());
      const sql::SelectItem* item = nullptr;
      for (const auto& si : fi->sub->items)
        if (si.name == e->column) item = &si;
      if (!item) fail("s2f", "subselect has no output column '" + e->column + "'");
      base = val_memo_.at(key_of(sub, item->expr));
    }

    std::string through;
    if (node->join) {
      const Ctx& join_ctx = join_of_.at(node);
      through = is_right ? join_ctx.right_fn : join_ctx.left_fn;
    }
    return {base, through};
  }

  // Emits the axioms defining val_<ctx>(<e>) and returns its reference.
  ValRef gen_expr(const ExprPtr& e, const Ctx& ctx) {
    const std::string key = key_of(ctx, e);
    if (auto it = val_memo_.find(key); it != val_memo_.end()) return it->second;

    // Columns at a table context are the schema val functions themselves.
    if (e->kind == Expr::Kind::Column && ctx.kind == Ctx::Kind::Table) {
      ColumnBase cb = resolve_column(e, ctx);
      val_memo_[key] = cb.base;
      return cb.base;
    }

    const std::string fn = val_name(ctx.name, e);
    ValRef ref{fn, Sort::SqlBool};

    auto guard = [&](TermPtr body) {
      return mk::forall({{"x", Sort::Int}},
                        mk::implies(index_of(ctx.index_pred(), ivar("x")), std::move(body)));
    };
    TermPtr x = ivar("x");
    auto self_at = [&](Sort s) { return unary(fn, s, x); };

    switch (e->kind) {
      case Expr::Kind::BoolLit: {
        ref.sort = Sort::SqlBool;
        out_.declare({fn, {Sort::Int}, ref.sort});
        out_.add_axiom(guard(mk::eq(self_at(ref.sort),
                                    e->bool_value ? mk::sql_true() : mk::sql_false())));
        break;
      }
      case Expr::Kind::NullLit: {
        ref.sort = Sort::SqlBool;  // callers re-type via gen_typed_null
        out_.declare({fn, {Sort::Int}, ref.sort});
        out_.add_axiom(guard(mk::eq(self_at(ref.sort), mk::sql_null())));
        break;
      }
      case Expr::Kind::IntLit: {
        ref.sort = Sort::Int;
        out_.declare({fn, {Sort::Int}, ref.sort});
        out_.add_axiom(guard(mk::eq(self_at(ref.sort), mk::int_lit(e->int_value))));
        // SQL literals are values, never NULL.
        literal_axiom(mk::int_lit(e->int_value), std::to_string(e->int_value));
        break;
      }
      case Expr::Kind::Var: {
        auto it = frees_.env.find(e->var);
        if (it == frees_.env.end()) fail("s2f", "undeclared variable '" + e->var + "'");
        if (it->second.kind != o2f::VarEntry::Kind::Scalar)
          fail("s2f", "Boolean variable '" + e->var + "' cannot appear in SQL");
        ref.sort = it->second.sort;
        out_.declare({fn, {Sort::Int}, ref.sort});
        out_.add_axiom(guard(mk::eq(self_at(ref.sort), it->second.term)));
        break;
      }
      case Expr::Kind::Column: {
        ColumnBase cb = resolve_column(e, ctx);
        ref.sort = cb.base.sort;
        out_.declare({fn, {Sort::Int}, ref.sort});
        TermPtr inner = cb.through.empty() ? x : unary(cb.through, Sort::Int, x);
        out_.add_axiom(
            guard(mk::eq(self_at(ref.sort), unary(cb.base.fn, ref.sort, inner))));
        break;
      }
      case Expr::Kind::Not: {
        ValRef a = gen_expr(e->args[0], ctx);
        ref.sort = Sort::SqlBool;
        out_.declare({fn, {Sort::Int}, ref.sort});
        auto av = unary(a.fn, a.sort, x);
        out_.add_axiom(guard(mk::iff(mk::eq(self_at(ref.sort), mk::sql_true()),
                                     mk::eq(av, mk::sql_false()))));
        out_.add_axiom(guard(mk::iff(mk::eq(self_at(ref.sort), mk::sql_false()),
                                     mk::eq(av, mk::sql_true()))));
        out_.add_axiom(guard(mk::iff(mk::eq(self_at(ref.sort), mk::sql_null()),
                                     mk::eq(av, mk::sql_null()))));
        break;
      }
      case Expr::Kind::And:
      case Expr::Kind::Or: {
        ValRef a = gen_expr(e->args[0], ctx);
        ValRef b = gen_expr(e->args[1], ctx);
        ref.sort = Sort::SqlBool;
        out_.declare({fn, {Sort::Int}, ref.sort});
        auto av = unary(a.fn, a.sort, x);
        auto bv = unary(b.fn, b.sort, x);
        const bool conj = e->kind == Expr::Kind::And;
        TermPtr dominant = conj ? mk::sql_false() : mk::sql_true();
        TermPtr neutral = conj ? mk::sql_true() : mk::sql_false();
        // dominant if either side is dominant; neutral if both are neutral;
        // NULL otherwise.
        out_.add_axiom(guard(mk::iff(
            mk::eq(self_at(ref.sort), neutral),
            mk::and_({mk::eq(av, neutral), mk::eq(bv, neutral)}))));
        out_.add_axiom(guard(mk::iff(
            mk::eq(self_at(ref.sort), dominant),
            mk::or_({mk::eq(av, dominant), mk::eq(bv, dominant)}))));
        out_.add_axiom(guard(mk::iff(
            mk::eq(self_at(ref.sort), mk::sql_null()),
            mk::or_({mk::and_({mk::eq(av, mk::sql_null()), mk::eq(bv, mk::sql_null())}),
                     mk::and_({mk::eq(av, mk::sql_null()), mk::eq(bv, neutral)}),
                     mk::and_({mk::eq(av, neutral), mk::eq(bv, mk::sql_null())})}))));
        break;
      }
      case Expr::Kind::Compare: {
        Sort operand = operand_sort(e->args[0], e->args[1]);
        ValRef a = gen_typed(e->args[0], ctx, operand);
        ValRef b = gen_typed(e->args[1], ctx, operand);
        ref.sort = Sort::SqlBool;
        out_.declare({fn, {Sort::Int}, ref.sort});
        auto av = unary(a.fn, a.sort, x);
        auto bv = unary(b.fn, b.sort, x);
        TermPtr nl = null_of_sort(operand);
        TermPtr relation;
        switch (e->cmp) {
          case Expr::CmpKind::Eq: relation = mk::eq(av, bv); break;
          case Expr::CmpKind::Ne: relation = mk::ne(av, bv); break;
          case Expr::CmpKind::Lt: relation = mk::lt(av, bv); break;
          case Expr::CmpKind::Le: relation = mk::le(av, bv); break;
          case Expr::CmpKind::Gt: relation = mk::gt(av, bv); break;
          case Expr::CmpKind::Ge: relation = mk::ge(av, bv); break;
        }
        TermPtr both_valued = mk::and_({mk::ne(av, nl), mk::ne(bv, nl)});
        out_.add_axiom(guard(mk::iff(mk::eq(self_at(ref.sort), mk::sql_true()),
                                     mk::and_({both_valued, relation}))));
        out_.add_axiom(guard(mk::iff(mk::eq(self_at(ref.sort), mk::sql_false()),
                                     mk::and_({both_valued, mk::not_(relation)}))));
        out_.add_axiom(guard(mk::iff(mk::eq(self_at(ref.sort), mk::sql_null()),
                                     mk::or_({mk::eq(av, nl), mk::eq(bv, nl)}))));
        break;
      }
      case Expr::Kind::Case: {
        ValRef cond = gen_expr(e->args[0], ctx);
        Sort branch = sort_of(e->type, Sort::SqlBool);
        ValRef then_ref = gen_typed(e->args[1], ctx, branch);
        ValRef else_ref = gen_typed(e->args[2], ctx, branch);
        ref.sort = branch;
        out_.declare({fn, {Sort::Int}, ref.sort});
        auto cv = unary(cond.fn, cond.sort, x);
        // The ELSE branch is taken on FALSE and on NULL.
        out_.add_axiom(guard(mk::implies(
            mk::eq(cv, mk::sql_true()),
            mk::eq(self_at(ref.sort), unary(then_ref.fn, branch, x)))));
        out_.add_axiom(guard(mk::implies(
            mk::or_({mk::eq(cv, mk::sql_false()), mk::eq(cv, mk::sql_null())}),
            mk::eq(self_at(ref.sort), unary(else_ref.fn, branch, x)))));
        break;
      }
      case Expr::Kind::IsNull: {
        ValRef a = gen_expr(e->args[0], ctx);
        ref.sort = Sort::SqlBool;
        out_.declare({fn, {Sort::Int}, ref.sort});
        auto av = unary(a.fn, a.sort, x);
        TermPtr nl = null_of_sort(a.sort);
        out_.add_axiom(guard(mk::iff(mk::eq(self_at(ref.sort), mk::sql_true()),
                                     mk::eq(av, nl))));
        out_.add_axiom(guard(mk::iff(mk::eq(self_at(ref.sort), mk::sql_false()),
                                     mk::ne(av, nl))));
        break;
      }
      case Expr::Kind::Exists: {
        Ctx sub = from_subselect(e->sub);
        ref.sort = Sort::SqlBool;
        out_.declare({fn, {Sort::Int}, ref.sort});
        TermPtr some = mk::exists({{"y", Sort::Int}}, index_of(sub.index_pred(), ivar("y")));
        out_.add_axiom(
            guard(mk::iff(mk::eq(self_at(ref.sort), mk::sql_true()), some)));
        out_.add_axiom(guard(
            mk::iff(mk::eq(self_at(ref.sort), mk::sql_false()), mk::not_(some))));
        break;
      }
      case Expr::Kind::Scalar: {
        Ctx sub = from_subselect(e->sub);
        const sql::SelectItem& item = e->sub->items[0];
        ValRef inner = val_memo_.at(key_of(sub, item.expr));
        ref.sort = inner.sort;
        out_.declare({fn, {Sort::Int}, ref.sort});
        const std::string w = "w_" + sub.name;
        out_.declare({w, {}, ref.sort});
        TermPtr wc = mk::sym(w, ref.sort);
        out_.add_axiom(guard(mk::eq(self_at(ref.sort), wc)));
        TermPtr yv = ivar("y");
        out_.add_axiom(
            mk::exists({{"y", Sort::Int}},
                       mk::and_({index_of(sub.index_pred(), yv),
                                 mk::eq(unary(inner.fn, inner.sort, yv), wc)})),
            "witness of scalar " + sub.name);
        Obligation ob;
        ob.subselect = sql::print(e->sub);
        ob.index_pred = sub.index_pred();
        ob.goal = mk::not_(single_row_property(sub.index_pred()));
        obligations_.push_back(std::move(ob));
        break;
      }
    }

    val_memo_[key] = ref;
    return ref;
  }

  // NULL literals adopt the sort of their context.
  ValRef gen_typed(const ExprPtr& e, const Ctx& ctx, Sort wanted) {
    if (e->kind != Expr::Kind::NullLit) {
      ValRef r = gen_expr(e, ctx);
      if (r.sort != wanted)
        fail("s2f", "operand " + sql::print(e) + " has sort " + msfol::sort_name(r.sort) +
                        ", expected " + msfol::sort_name(wanted));
      return r;
    }
    const std::string key = ctx.name + "|NULL:" + msfol::sort_name(wanted);
    if (auto it = val_memo_.find(key); it != val_memo_.end()) return it->second;
    const std::string fn =
        "val_" + ctx.name + "_NULL_as_" + std::string(msfol::sort_name(wanted));
    ValRef ref{fn, wanted};
    out_.declare({fn, {Sort::Int}, wanted});
    out_.add_axiom(mk::forall(
        {{"x", Sort::Int}},
        mk::implies(index_of(ctx.index_pred(), ivar("x")),
                    mk::eq(unary(fn, wanted, ivar("x")), null_of_sort(wanted)))));
    val_memo_[key] = ref;
    return ref;
  }

  Sort operand_sort(const ExprPtr& a, const ExprPtr& b) const {
    if (a->kind != Expr::Kind::NullLit && a->type.kind != sql::ExprType::Kind::Null)
      return sort_of(a->type);
    if (b->kind != Expr::Kind::NullLit && b->type.kind != sql::ExprType::Kind::Null)
      return sort_of(b->type);
    return Sort::Int;
  }

  Ctx from_subselect(const SelectPtr& sub) {
    auto it = subselect_ctx_.find(sub.get());
    if (it != subselect_ctx_.end()) return it->second;
    Ctx ctx = gen_select(sub, /*top=*/false);
    subselect_ctx_[sub.get()] = ctx;
    return ctx;
  }

  void literal_axiom(const TermPtr& lit, const std::string& text) {
    if (!int_literals_.insert(text).second) return;
    out_.add_axiom(mk::ne(lit, o2f::null_of(Sort::Int)), "literal " + text);
  }

  const DataModel& dm_;
  const rel::SqlSchema& schema_;
  const o2f::FreeDecls& frees_;
  Theory out_;
  int sub_counter_ = 0;
  int join_counter_ = 0;
  std::map<const sql::Select*, Ctx> subselect_ctx_;
  std::map<const sql::Select*, Ctx> join_of_;
  std::map<std::string, ValRef> val_memo_;
  std::set<std::string> int_literals_;
  std::vector<Obligation> obligations_;
};

}  // namespace

Output s2f_select(const sql::SelectPtr& statement, const DataModel& dm,
                  const rel::SqlSchema& schema, const o2f::FreeDecls& frees) {
  return Generator(dm, schema, frees).run(statement);
}

}  // namespace oclsql::s2f
