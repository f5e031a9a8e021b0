#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>

#include "oclsql/sql_ast.hpp"

namespace oclsql::sql {

std::string ExprType::to_string() const {
  switch (kind) {
    case Kind::Bool: return "boolean";
    case Kind::Int: return "int";
    case Kind::Varchar: return "varchar";
    case Kind::Id: return "id(" + cls + ")";
    case Kind::Null: return "null";
  }
  return "?";
}

namespace {

std::string upper(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return s;
}

struct Token {
  enum class Kind { Ident, Int, Sym, End };
  Kind kind = Kind::End;
  std::string text;
  long long int_value = 0;
  size_t pos = 0;
};

class Lexer {
public:
  explicit Lexer(const std::string& input) : input_(input) { advance(); }

  const Token& peek() const { return current_; }
  Token next() {
    Token t = current_;
    advance();
    return t;
  }

  bool at_keyword(const char* kw) const {
    return current_.kind == Token::Kind::Ident && upper(current_.text) == kw;
  }
  bool accept_keyword(const char* kw) {
    if (!at_keyword(kw)) return false;
    advance();
    return true;
  }
  void expect_keyword(const char* kw) {
    if (!accept_keyword(kw)) error(std::string("expected ") + kw);
  }
  bool at_sym(const char* s) const {
    return current_.kind == Token::Kind::Sym && current_.text == s;
  }
  bool accept_sym(const char* s) {
    if (!at_sym(s)) return false;
    advance();
    return true;
  }
  void expect_sym(const char* s) {
    if (!accept_sym(s)) error(std::string("expected '") + s + "'");
  }

  [[noreturn]] void error(const std::string& message) const {
    fail("SQL", message + " at offset " + std::to_string(current_.pos));
  }

private:
  void advance() {
    while (i_ < input_.size() && std::isspace(static_cast<unsigned char>(input_[i_]))) ++i_;
    current_ = Token{};
    current_.pos = i_;
    if (i_ >= input_.size()) return;
    char c = input_[i_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = i_;
      while (i_ < input_.size() &&
             (std::isalnum(static_cast<unsigned char>(input_[i_])) || input_[i_] == '_'))
        ++i_;
      current_.kind = Token::Kind::Ident;
      current_.text = input_.substr(start, i_ - start);
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t start = i_;
      while (i_ < input_.size() && std::isdigit(static_cast<unsigned char>(input_[i_]))) ++i_;
      current_.kind = Token::Kind::Int;
      current_.text = input_.substr(start, i_ - start);
      current_.int_value = std::stoll(current_.text);
      return;
    }
    for (const char* sym : {"<>", "<=", ">="}) {
      if (input_.compare(i_, 2, sym) == 0) {
        current_.kind = Token::Kind::Sym;
        current_.text = sym;
        i_ += 2;
        return;
      }
    }
    static const std::string singles = "().,=<>;*";
    if (singles.find(c) != std::string::npos) {
      current_.kind = Token::Kind::Sym;
      current_.text = std::string(1, c);
      ++i_;
      return;
    }
    fail("SQL", std::string("unexpected character '") + c + "'");
  }

  const std::string& input_;
  size_t i_ = 0;
  Token current_;
};

ExprPtr node(Expr::Kind kind, ExprType type) {
  auto e = std::make_shared<Expr>();
  e->kind = kind;
  e->type = std::move(type);
  return e;
}

Expr* mut(const ExprPtr& e) { return const_cast<Expr*>(e.get()); }

// From-items visible to the select currently being parsed. Each entry maps
// an alias to its output columns.
struct ScopeItem {
  std::string alias;
  std::vector<std::pair<std::string, ExprType>> columns;
};

bool types_compatible(const ExprType& a, const ExprType& b) {
  if (a.kind == ExprType::Kind::Null || b.kind == ExprType::Kind::Null) return true;
  if (a.kind != b.kind) return false;
  if (a.kind == ExprType::Kind::Id) return a.cls == b.cls;
  return true;
}

ExprType merge_types(const ExprType& a, const ExprType& b) {
  return a.kind == ExprType::Kind::Null ? b : a;
}

class Parser {
public:
  Parser(const std::string& text, const rel::SqlSchema& schema,
         const std::vector<TypedVar>& vars)
      : lexer_(text), schema_(schema) {
    for (const auto& v : vars) {
      ExprType t;
      if (v.type == "Integer")
        t = ExprType::integer();
      else if (v.type == "String")
        t = ExprType::varchar();
      else if (v.type == "Boolean")
        fail("SQL", "Boolean-typed variables are not supported in SQL statements");
      else
        t = ExprType::id_of(v.type);
      vars_.emplace(v.name, t);
    }
  }

  SelectPtr parse() {
    SelectPtr s = parse_select();
    lexer_.accept_sym(";");
    if (lexer_.peek().kind != Token::Kind::End) lexer_.error("trailing input");
    return s;
  }

private:
  SelectPtr parse_select() {
    lexer_.expect_keyword("SELECT");
    auto sel = std::make_shared<Select>();
    std::vector<ScopeItem> scope;

    // The from-clause must be parsed before select-items can be resolved, so
    // capture item token ranges... simpler: SQL's clause order is fixed, so
    // parse items as unresolved trees and resolve after FROM. Instead of a
    // second pass we parse the FROM clause first by scanning ahead is overkill
    // here; we parse items lazily by recording the token stream position.
    // The grammar is small enough to avoid that: select-items are parsed
    // after we have read the FROM clause, by splitting at the keyword.
    //
    // Practical approach: parse items into a deferred buffer of tokens is
    // unnecessary because our lexer cannot rewind; instead we parse the item
    // expressions immediately but resolve bare columns against the scope
    // lazily, patching them once the scope is known.
    std::vector<ExprPtr> deferred;
    do {
      deferred.push_back(parse_expr());
    } while (lexer_.accept_sym(","));

    if (lexer_.accept_keyword("FROM")) {
      sel->from = parse_from_item();
      scope.push_back(scope_of(*sel->from));
      for (const auto& [name, type] : scope.back().columns)
        sel->from->columns.push_back(name);
      if (lexer_.accept_keyword("JOIN")) {
        sel->join = parse_from_item();
        if (sel->join->alias == sel->from->alias)
          fail("SQL", "duplicate from-item alias '" + sel->join->alias + "'");
        scope.push_back(scope_of(*sel->join));
        for (const auto& [name, type] : scope.back().columns)
          sel->join->columns.push_back(name);
        if (lexer_.accept_keyword("ON")) {
          sel->on = parse_expr();
          resolve(sel->on, scope);
          require_boolean(sel->on, "ON");
        }
      }
      if (lexer_.accept_keyword("WHERE")) {
        sel->where = parse_expr();
        resolve(sel->where, scope);
        require_boolean(sel->where, "WHERE");
      }
    }

    for (auto& item : deferred) {
      resolve(item, scope);
      SelectItem si;
      si.expr = item;
      if (item->kind == Expr::Kind::Column) si.name = item->column;
      sel->items.push_back(std::move(si));
    }
    if (sel->items.empty()) fail("SQL", "empty select-item list");
    return sel;
  }

  FromItem parse_from_item() {
    FromItem item;
    if (lexer_.accept_sym("(")) {
      item.kind = FromItem::Kind::Subselect;
      item.sub = parse_select();
      lexer_.expect_sym(")");
      lexer_.accept_keyword("AS");
      if (lexer_.peek().kind != Token::Kind::Ident)
        lexer_.error("subselect from-item needs an alias");
      item.alias = lexer_.next().text;
      return item;
    }
    if (lexer_.peek().kind != Token::Kind::Ident) lexer_.error("expected a table name");
    item.kind = FromItem::Kind::Table;
    item.table = lexer_.next().text;
    if (!schema_.find_table(item.table)) fail("SQL", "unknown table '" + item.table + "'");
    item.alias = item.table;
    if (lexer_.accept_keyword("AS")) {
      if (lexer_.peek().kind != Token::Kind::Ident) lexer_.error("expected an alias");
      item.alias = lexer_.next().text;
    } else if (lexer_.peek().kind == Token::Kind::Ident && !at_clause_keyword()) {
      item.alias = lexer_.next().text;
    }
    return item;
  }

  bool at_clause_keyword() const {
    for (const char* kw : {"JOIN", "ON", "WHERE", "FROM", "SELECT", "AS"})
      if (lexer_.at_keyword(kw)) return true;
    return false;
  }

  ScopeItem scope_of(const FromItem& item) {
    ScopeItem s;
    s.alias = item.alias;
    if (item.kind == FromItem::Kind::Table) {
      const rel::Table* table = schema_.find_table(item.table);
      for (const auto& col : table->columns) s.columns.emplace_back(col.name, column_type(col));
    } else {
      for (const auto& si : item.sub->items) {
        if (si.name.empty())
          fail("SQL", "subselect output column used from '" + item.alias +
                          "' needs a name (select a column or alias it)");
        s.columns.emplace_back(si.name, si.expr->type);
      }
    }
    return s;
  }

  ExprType column_type(const rel::Column& col) const {
    if (col.references) return ExprType::id_of(*col.references);
    // Primary-key columns are ids of their own table.
    for (const auto& t : schema_.tables) {
      if (t.primary_key && *t.primary_key == col.name) return ExprType::id_of(t.name);
    }
    return col.type == rel::Column::Type::Varchar ? ExprType::varchar() : ExprType::integer();
  }

  void require_boolean(const ExprPtr& e, const char* ctx) {
    if (e->type.kind != ExprType::Kind::Bool && e->type.kind != ExprType::Kind::Null)
      fail("SQL", std::string(ctx) + " expects a boolean expression");
  }

  // --- expression grammar ---

  ExprPtr parse_expr() { return parse_or(); }

  ExprPtr parse_or() {
    ExprPtr lhs = parse_and();
    while (lexer_.accept_keyword("OR")) {
      ExprPtr rhs = parse_and();
      auto e = node(Expr::Kind::Or, ExprType::boolean());
      mut(e)->args = {lhs, rhs};
      lhs = e;
    }
    return lhs;
  }

  ExprPtr parse_and() {
    ExprPtr lhs = parse_not();
    while (lexer_.accept_keyword("AND")) {
      ExprPtr rhs = parse_not();
      auto e = node(Expr::Kind::And, ExprType::boolean());
      mut(e)->args = {lhs, rhs};
      lhs = e;
    }
    return lhs;
  }

  ExprPtr parse_not() {
    if (lexer_.accept_keyword("NOT")) {
      ExprPtr operand = parse_not();
      auto e = node(Expr::Kind::Not, ExprType::boolean());
      mut(e)->args = {operand};
      return e;
    }
    return parse_predicate();
  }

  ExprPtr parse_predicate() {
    ExprPtr lhs = parse_primary();
    if (lexer_.at_keyword("IS")) {
      lexer_.next();
      lexer_.expect_keyword("NULL");
      auto e = node(Expr::Kind::IsNull, ExprType::boolean());
      mut(e)->args = {lhs};
      return e;
    }
    static const std::map<std::string, Expr::CmpKind> ops = {
        {"=", Expr::CmpKind::Eq},  {"<>", Expr::CmpKind::Ne}, {"<", Expr::CmpKind::Lt},
        {"<=", Expr::CmpKind::Le}, {">", Expr::CmpKind::Gt},  {">=", Expr::CmpKind::Ge}};
    if (lexer_.peek().kind == Token::Kind::Sym) {
      auto it = ops.find(lexer_.peek().text);
      if (it != ops.end()) {
        lexer_.next();
        ExprPtr rhs = parse_primary();
        auto e = node(Expr::Kind::Compare, ExprType::boolean());
        mut(e)->cmp = it->second;
        mut(e)->args = {lhs, rhs};
        if (lexer_.at_keyword("IS")) {
          lexer_.next();
          lexer_.expect_keyword("NULL");
          auto isnull = node(Expr::Kind::IsNull, ExprType::boolean());
          mut(isnull)->args = {e};
          return isnull;
        }
        return e;
      }
    }
    return lhs;
  }

  ExprPtr parse_primary() {
    if (lexer_.accept_keyword("TRUE")) {
      auto e = node(Expr::Kind::BoolLit, ExprType::boolean());
      mut(e)->bool_value = true;
      return e;
    }
    if (lexer_.accept_keyword("FALSE")) {
      auto e = node(Expr::Kind::BoolLit, ExprType::boolean());
      mut(e)->bool_value = false;
      return e;
    }
    if (lexer_.accept_keyword("NULL")) return node(Expr::Kind::NullLit, ExprType::null());
    if (lexer_.accept_keyword("EXISTS")) {
      lexer_.expect_sym("(");
      SelectPtr sub = parse_select();
      lexer_.expect_sym(")");
      auto e = node(Expr::Kind::Exists, ExprType::boolean());
      mut(e)->sub = sub;
      return e;
    }
    if (lexer_.accept_keyword("CASE")) {
      lexer_.expect_keyword("WHEN");
      ExprPtr cond = parse_expr();
      lexer_.expect_keyword("THEN");
      ExprPtr then_branch = parse_expr();
      lexer_.expect_keyword("ELSE");
      ExprPtr else_branch = parse_expr();
      lexer_.expect_keyword("END");
      auto e = node(Expr::Kind::Case, ExprType::null());
      mut(e)->args = {cond, then_branch, else_branch};
      return e;
    }
    if (lexer_.peek().kind == Token::Kind::Int) {
      auto e = node(Expr::Kind::IntLit, ExprType::integer());
      mut(e)->int_value = lexer_.next().int_value;
      return e;
    }
    if (lexer_.at_sym("(")) {
      lexer_.next();
      if (lexer_.at_keyword("SELECT")) {
        SelectPtr sub = parse_select();
        lexer_.expect_sym(")");
        auto e = node(Expr::Kind::Scalar, ExprType::null());
        mut(e)->sub = sub;
        return e;
      }
      ExprPtr e = parse_expr();
      lexer_.expect_sym(")");
      return e;
    }
    if (lexer_.peek().kind == Token::Kind::Ident) {
      std::string first = lexer_.next().text;
      if (lexer_.accept_sym(".")) {
        if (lexer_.peek().kind != Token::Kind::Ident) lexer_.error("expected a column name");
        auto e = node(Expr::Kind::Column, ExprType::null());
        mut(e)->qualifier = first;
        mut(e)->column = lexer_.next().text;
        return e;
      }
      // Bare identifier: column when resolvable, else variable. Resolution is
      // deferred until the scope is known.
      auto e = node(Expr::Kind::Column, ExprType::null());
      mut(e)->column = first;
      return e;
    }
    lexer_.error("expected an expression");
  }

  // --- resolution & typing (bottom-up once the scope is known) ---

  void resolve(const ExprPtr& e, const std::vector<ScopeItem>& scope) {
    Expr* m = mut(e);
    for (const auto& a : e->args) resolve(a, scope);
    switch (e->kind) {
      case Expr::Kind::Column: {
        if (!m->qualifier.empty()) {
          const ScopeItem* item = nullptr;
          for (const auto& s : scope)
            if (s.alias == m->qualifier) item = &s;
          if (!item) fail("SQL", "unknown or out-of-scope alias '" + m->qualifier +
                                     "' (correlated subqueries are not supported)");
          for (const auto& [name, type] : item->columns) {
            if (name == m->column) {
              m->type = type;
              return;
            }
          }
          fail("SQL", "'" + m->qualifier + "' has no column '" + m->column + "'");
        }
        // Bare: search all scope items, require uniqueness.
        const ScopeItem* found = nullptr;
        const ExprType* found_type = nullptr;
        for (const auto& s : scope) {
          for (const auto& [name, type] : s.columns) {
            if (name != m->column) continue;
            if (found) fail("SQL", "ambiguous column '" + m->column + "'");
            found = &s;
            found_type = &type;
          }
        }
        if (found) {
          m->qualifier = found->alias;
          m->type = *found_type;
          return;
        }
        if (auto it = vars_.find(m->column); it != vars_.end()) {
          m->kind = Expr::Kind::Var;
          m->var = m->column;
          m->column.clear();
          m->type = it->second;
          return;
        }
        fail("SQL", "unknown column or variable '" + m->column + "'");
      }
      case Expr::Kind::Not:
      case Expr::Kind::And:
      case Expr::Kind::Or:
        for (const auto& a : e->args) require_boolean(a, "boolean operator");
        m->type = ExprType::boolean();
        return;
      case Expr::Kind::Compare: {
        const ExprPtr& a = e->args[0];
        const ExprPtr& b = e->args[1];
        if (!types_compatible(a->type, b->type))
          fail("SQL", "cannot compare " + a->type.to_string() + " with " + b->type.to_string());
        if (e->cmp != Expr::CmpKind::Eq && e->cmp != Expr::CmpKind::Ne) {
          auto intish = [](const ExprType& t) {
            return t.kind == ExprType::Kind::Int || t.kind == ExprType::Kind::Null;
          };
          if (!intish(a->type) || !intish(b->type))
            fail("SQL", "ordering comparison expects int operands");
        } else {
          auto comparable = [](const ExprType& t) {
            return t.kind != ExprType::Kind::Bool;
          };
          if (!comparable(a->type) || !comparable(b->type))
            fail("SQL", "equality on boolean expressions is not supported");
        }
        m->type = ExprType::boolean();
        return;
      }
      case Expr::Kind::Case: {
        require_boolean(e->args[0], "CASE condition");
        if (!types_compatible(e->args[1]->type, e->args[2]->type))
          fail("SQL", "CASE branches have incompatible types " +
                          e->args[1]->type.to_string() + " and " + e->args[2]->type.to_string());
        m->type = merge_types(e->args[1]->type, e->args[2]->type);
        if (m->type.kind == ExprType::Kind::Null) m->type = ExprType::boolean();
        return;
      }
      case Expr::Kind::IsNull: return;  // already boolean
      case Expr::Kind::Exists: return;
      case Expr::Kind::Scalar: {
        if (e->sub->items.size() != 1)
          fail("SQL", "scalar subselect must project exactly one item");
        m->type = e->sub->items[0].expr->type;
        return;
      }
      default: return;
    }
  }

  Lexer lexer_;
  const rel::SqlSchema& schema_;
  std::map<std::string, ExprType> vars_;
};

void collect_vars(const ExprPtr& e, std::vector<std::string>& out, std::set<std::string>& seen);

void collect_vars(const SelectPtr& s, std::vector<std::string>& out,
                  std::set<std::string>& seen) {
  for (const auto& item : s->items) collect_vars(item.expr, out, seen);
  for (const auto& fi : {s->from, s->join}) {
    if (fi && fi->kind == FromItem::Kind::Subselect) collect_vars(fi->sub, out, seen);
  }
  if (s->on) collect_vars(s->on, out, seen);
  if (s->where) collect_vars(s->where, out, seen);
}

void collect_vars(const ExprPtr& e, std::vector<std::string>& out, std::set<std::string>& seen) {
  if (!e) return;
  if (e->kind == Expr::Kind::Var && seen.insert(e->var).second) out.push_back(e->var);
  for (const auto& a : e->args) collect_vars(a, out, seen);
  if (e->sub) collect_vars(e->sub, out, seen);
}

}  // namespace

std::vector<std::string> statement_vars(const SelectPtr& s) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  collect_vars(s, out, seen);
  return out;
}

std::string print(const ExprPtr& e) {
  switch (e->kind) {
    case Expr::Kind::BoolLit: return e->bool_value ? "TRUE" : "FALSE";
    case Expr::Kind::NullLit: return "NULL";
    case Expr::Kind::IntLit: return std::to_string(e->int_value);
    case Expr::Kind::Var: return e->var;
    case Expr::Kind::Column: return e->qualifier + "." + e->column;
    case Expr::Kind::Not: return "NOT (" + print(e->args[0]) + ")";
    case Expr::Kind::And: return "(" + print(e->args[0]) + " AND " + print(e->args[1]) + ")";
    case Expr::Kind::Or: return "(" + print(e->args[0]) + " OR " + print(e->args[1]) + ")";
    case Expr::Kind::Compare: {
      const char* op = nullptr;
      switch (e->cmp) {
        case Expr::CmpKind::Eq: op = "="; break;
        case Expr::CmpKind::Ne: op = "<>"; break;
        case Expr::CmpKind::Lt: op = "<"; break;
        case Expr::CmpKind::Le: op = "<="; break;
        case Expr::CmpKind::Gt: op = ">"; break;
        case Expr::CmpKind::Ge: op = ">="; break;
      }
      return "(" + print(e->args[0]) + " " + op + " " + print(e->args[1]) + ")";
    }
    case Expr::Kind::Case:
      return "CASE WHEN " + print(e->args[0]) + " THEN " + print(e->args[1]) + " ELSE " +
             print(e->args[2]) + " END";
    case Expr::Kind::IsNull: return "(" + print(e->args[0]) + ") IS NULL";
    case Expr::Kind::Exists: return "EXISTS (" + print(e->sub) + ")";
    case Expr::Kind::Scalar: return "(" + print(e->sub) + ")";
  }
  return "?";
}

namespace {

std::string print_from_item(const FromItem& fi) {
  if (fi.kind == FromItem::Kind::Table) {
    if (fi.alias == fi.table) return fi.table;
    return fi.table + " " + fi.alias;
  }
  return "(" + print(fi.sub) + ") AS " + fi.alias;
}

}  // namespace

std::string print(const SelectPtr& s) {
  std::ostringstream out;
  out << "SELECT ";
  for (size_t i = 0; i < s->items.size(); ++i) {
    if (i) out << ", ";
    out << print(s->items[i].expr);
  }
  if (s->from) {
    out << " FROM " << print_from_item(*s->from);
    if (s->join) {
      out << " JOIN " << print_from_item(*s->join);
      if (s->on) out << " ON " << print(s->on);
    }
    if (s->where) out << " WHERE " << print(s->where);
  }
  return out.str();
}

SelectPtr parse_select(const std::string& text, const rel::SqlSchema& schema,
                       const std::vector<TypedVar>& vars) {
  return Parser(text, schema, vars).parse();
}

}  // namespace oclsql::sql
