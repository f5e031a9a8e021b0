#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>

#include "oclsql/ocl_ast.hpp"

namespace oclsql::ocl {

std::string Type::to_string() const {
  switch (kind) {
    case Kind::Bool: return "Boolean";
    case Kind::Int: return "Integer";
    case Kind::String: return "String";
    case Kind::Class: return cls;
    case Kind::Set: return "Set(" + elem->to_string() + ")";
    case Kind::Null: return "OclVoid";
  }
  return "?";
}

bool compatible(const Type& a, const Type& b) {
  if (a.kind == Type::Kind::Null || b.kind == Type::Kind::Null) return true;
  if (a.kind != b.kind) return false;
  if (a.kind == Type::Kind::Class) return a.cls == b.cls;
  if (a.kind == Type::Kind::Set) return compatible(*a.elem, *b.elem);
  return true;
}

namespace {

struct Token {
  enum class Kind { Ident, Int, Str, Sym, End };
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

  [[noreturn]] void error(const std::string& message) const {
    fail("OCL", message + " at offset " + std::to_string(current_.pos));
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
    if (c == '\'') {
      ++i_;
      size_t start = i_;
      while (i_ < input_.size() && input_[i_] != '\'') ++i_;
      if (i_ >= input_.size()) fail("OCL", "unterminated string literal");
      current_.kind = Token::Kind::Str;
      current_.text = input_.substr(start, i_ - start);
      ++i_;
      return;
    }
    // Multi-char symbols first.
    for (const char* sym : {"->", "<>", "<=", ">="}) {
      if (input_.compare(i_, 2, sym) == 0) {
        current_.kind = Token::Kind::Sym;
        current_.text = sym;
        i_ += 2;
        return;
      }
    }
    static const std::string singles = ".()|=<>,";
    if (singles.find(c) != std::string::npos) {
      current_.kind = Token::Kind::Sym;
      current_.text = std::string(1, c);
      ++i_;
      return;
    }
    fail("OCL", std::string("unexpected character '") + c + "' at offset " + std::to_string(i_));
  }

  const std::string& input_;
  size_t i_ = 0;
  Token current_;
};

ExprPtr node(Expr::Kind kind, Type type) {
  auto e = std::make_shared<Expr>();
  e->kind = kind;
  e->type = std::move(type);
  return e;
}

Expr* mut(const ExprPtr& e) { return const_cast<Expr*>(e.get()); }

class Parser {
public:
  Parser(const std::string& text, const DataModel& dm, const std::vector<TypedVar>& vars)
      : lexer_(text), dm_(dm) {
    for (const auto& v : vars) {
      Type t = named_type(v.type);
      if (!scope_.emplace(v.name, t).second) fail("OCL", "duplicate variable '" + v.name + "'");
    }
  }

  ExprPtr parse() {
    ExprPtr e = parse_implies();
    if (lexer_.peek().kind != Token::Kind::End) lexer_.error("trailing input");
    return e;
  }

private:
  Type named_type(const std::string& name) const {
    if (name == "Integer") return Type::integer();
    if (name == "String") return Type::string();
    if (name == "Boolean") return Type::boolean();
    if (dm_.has_class(name)) return Type::of_class(name);
    fail("OCL", "unknown type '" + name + "'");
  }

  bool at_sym(const char* s) const {
    return lexer_.peek().kind == Token::Kind::Sym && lexer_.peek().text == s;
  }
  bool at_ident(const char* s) const {
    return lexer_.peek().kind == Token::Kind::Ident && lexer_.peek().text == s;
  }
  void expect_sym(const char* s) {
    if (!at_sym(s)) lexer_.error(std::string("expected '") + s + "'");
    lexer_.next();
  }

  void require_boolean(const ExprPtr& e, const char* ctx) {
    if (!e->type.is_boolean()) fail("OCL", std::string(ctx) + " expects a Boolean operand");
  }

  ExprPtr parse_implies() {
    ExprPtr lhs = parse_or();
    if (at_ident("implies")) {
      lexer_.next();
      ExprPtr rhs = parse_implies();  // right-associative
      require_boolean(lhs, "implies");
      require_boolean(rhs, "implies");
      auto e = node(Expr::Kind::BoolBinary, Type::boolean());
      mut(e)->bool_bin = Expr::BoolBinKind::Implies;
      mut(e)->src = lhs;
      mut(e)->arg = rhs;
      return e;
    }
    return lhs;
  }

  ExprPtr parse_or() {
    ExprPtr lhs = parse_and();
    while (at_ident("or")) {
      lexer_.next();
      ExprPtr rhs = parse_and();
      require_boolean(lhs, "or");
      require_boolean(rhs, "or");
      auto e = node(Expr::Kind::BoolBinary, Type::boolean());
      mut(e)->bool_bin = Expr::BoolBinKind::Or;
      mut(e)->src = lhs;
      mut(e)->arg = rhs;
      lhs = e;
    }
    return lhs;
  }

  ExprPtr parse_and() {
    ExprPtr lhs = parse_not();
    while (at_ident("and")) {
      lexer_.next();
      ExprPtr rhs = parse_not();
      require_boolean(lhs, "and");
      require_boolean(rhs, "and");
      auto e = node(Expr::Kind::BoolBinary, Type::boolean());
      mut(e)->bool_bin = Expr::BoolBinKind::And;
      mut(e)->src = lhs;
      mut(e)->arg = rhs;
      lhs = e;
    }
    return lhs;
  }

  ExprPtr parse_not() {
    if (at_ident("not")) {
      lexer_.next();
      ExprPtr operand = parse_not();
      require_boolean(operand, "not");
      auto e = node(Expr::Kind::BoolNot, Type::boolean());
      mut(e)->src = operand;
      return e;
    }
    return parse_comparison();
  }

  ExprPtr parse_comparison() {
    ExprPtr lhs = parse_postfix();
    static const std::map<std::string, Expr::CmpKind> ops = {
        {"=", Expr::CmpKind::Eq},  {"<>", Expr::CmpKind::Ne}, {"<", Expr::CmpKind::Lt},
        {"<=", Expr::CmpKind::Le}, {">", Expr::CmpKind::Gt},  {">=", Expr::CmpKind::Ge}};
    if (lexer_.peek().kind == Token::Kind::Sym) {
      auto it = ops.find(lexer_.peek().text);
      if (it != ops.end()) {
        lexer_.next();
        ExprPtr rhs = parse_postfix();
        bool ordering = it->second != Expr::CmpKind::Eq && it->second != Expr::CmpKind::Ne;
        if (ordering) {
          auto is_intish = [](const Type& t) {
            return t.kind == Type::Kind::Int || t.kind == Type::Kind::Null;
          };
          if (!is_intish(lhs->type) || !is_intish(rhs->type))
            fail("OCL", "ordering comparison expects Integer operands");
        } else {
          if (lhs->type.is_set() || rhs->type.is_set())
            fail("OCL", "equality on collections is not supported");
          if (!compatible(lhs->type, rhs->type))
            fail("OCL", "cannot compare " + lhs->type.to_string() + " with " +
                            rhs->type.to_string());
        }
        auto e = node(Expr::Kind::Compare, Type::boolean());
        mut(e)->cmp = it->second;
        mut(e)->src = lhs;
        mut(e)->arg = rhs;
        return e;
      }
    }
    return lhs;
  }

  ExprPtr parse_postfix() {
    ExprPtr e = parse_primary();
    while (true) {
      if (at_sym(".")) {
        lexer_.next();
        e = parse_dot(e);
      } else if (at_sym("->")) {
        lexer_.next();
        e = parse_arrow(e);
      } else {
        break;
      }
    }
    if (!pending_class_.empty())
      fail("OCL", "class name '" + pending_class_ + "' can only be used with allInstances()");
    return e;
  }

  // `pending_class_` carries a bare class name until `.allInstances()` claims it.
  ExprPtr parse_dot(ExprPtr src) {
    if (lexer_.peek().kind != Token::Kind::Ident) lexer_.error("expected a member name after '.'");
    std::string member = lexer_.next().text;

    if (member == "allInstances") {
      expect_sym("(");
      expect_sym(")");
      if (pending_class_.empty())
        fail("OCL", "allInstances() must be applied to a class name");
      auto e = node(Expr::Kind::AllInstances, Type::set_of(Type::of_class(pending_class_)));
      mut(e)->text = pending_class_;
      pending_class_.clear();
      return e;
    }
    if (!pending_class_.empty())
      fail("OCL", "class name '" + pending_class_ + "' can only be used with allInstances()");

    if (member == "oclIsUndefined") {
      expect_sym("(");
      expect_sym(")");
      if (src->type.is_set()) fail("OCL", "oclIsUndefined() applies to scalar expressions");
      auto e = node(Expr::Kind::IsUndefined, Type::boolean());
      mut(e)->src = src;
      return e;
    }

    if (src->type.kind != Type::Kind::Class)
      fail("OCL", "'." + member + "' needs an object-typed source, got " + src->type.to_string());
    const std::string& cls = src->type.cls;

    if (const Attribute* attr = dm_.find_attribute(cls, member)) {
      Type t;
      switch (attr->type.kind) {
        case AttrType::Kind::Integer: t = Type::integer(); break;
        case AttrType::Kind::String: t = Type::string(); break;
        case AttrType::Kind::Class: t = Type::of_class(attr->type.class_name); break;
      }
      auto e = node(Expr::Kind::AttrAccess, t);
      mut(e)->text = member;
      mut(e)->src = src;
      return e;
    }

    for (const auto& as : dm_.associations) {
      if (as.right_class == cls && as.left_end == member) {
        auto e = node(Expr::Kind::Navigation, Type::set_of(Type::of_class(as.left_class)));
        mut(e)->text = member;
        mut(e)->assoc = as.name;
        mut(e)->nav_to_left = true;
        mut(e)->src = src;
        return e;
      }
      if (as.left_class == cls && as.right_end == member) {
        auto e = node(Expr::Kind::Navigation, Type::set_of(Type::of_class(as.right_class)));
        mut(e)->text = member;
        mut(e)->assoc = as.name;
        mut(e)->nav_to_left = false;
        mut(e)->src = src;
        return e;
      }
    }
    fail("OCL", "class '" + cls + "' has no attribute or association-end '" + member + "'");
  }

  ExprPtr parse_arrow(ExprPtr src) {
    if (!pending_class_.empty())
      fail("OCL", "class name '" + pending_class_ + "' can only be used with allInstances()");
    if (lexer_.peek().kind != Token::Kind::Ident)
      lexer_.error("expected a collection operation after '->'");
    std::string op = lexer_.next().text;
    if (!src->type.is_set()) fail("OCL", "'->" + op + "' needs a collection source");
    const Type elem = *src->type.elem;

    static const std::map<std::string, Expr::IterKind> iterators = {
        {"forAll", Expr::IterKind::ForAll},
        {"exists", Expr::IterKind::Exists},
        {"select", Expr::IterKind::Select},
        {"reject", Expr::IterKind::Reject},
        {"collect", Expr::IterKind::Collect}};
    if (auto it = iterators.find(op); it != iterators.end()) {
      expect_sym("(");
      if (lexer_.peek().kind != Token::Kind::Ident) lexer_.error("expected an iterator variable");
      std::string var = lexer_.next().text;
      expect_sym("|");
      if (scope_.count(var)) fail("OCL", "iterator variable '" + var + "' shadows a declaration");
      scope_.emplace(var, elem);
      ExprPtr body = parse_implies();
      scope_.erase(var);
      expect_sym(")");

      Type result;
      if (it->second == Expr::IterKind::ForAll || it->second == Expr::IterKind::Exists) {
        require_boolean(body, op.c_str());
        result = Type::boolean();
      } else if (it->second == Expr::IterKind::Collect) {
        if (body->type.is_set()) fail("OCL", "collect body must be scalar-valued");
        if (body->type.kind == Type::Kind::Null)
          fail("OCL", "collect body type cannot be deduced from 'null'");
        result = Type::set_of(body->type);
      } else {
        require_boolean(body, op.c_str());
        result = src->type;
      }
      auto e = node(Expr::Kind::Iterate, result);
      mut(e)->iter_kind = it->second;
      mut(e)->iter_var = var;
      mut(e)->src = src;
      mut(e)->arg = body;
      return e;
    }

    if (op == "isEmpty" || op == "notEmpty") {
      expect_sym("(");
      expect_sym(")");
      auto e = node(Expr::Kind::CollTest, Type::boolean());
      mut(e)->coll_test =
          op == "isEmpty" ? Expr::CollTestKind::IsEmpty : Expr::CollTestKind::NotEmpty;
      mut(e)->src = src;
      return e;
    }

    static const std::map<std::string, Expr::CollBinKind> binaries = {
        {"including", Expr::CollBinKind::Including},
        {"excluding", Expr::CollBinKind::Excluding},
        {"union", Expr::CollBinKind::Union},
        {"intersection", Expr::CollBinKind::Intersection}};
    if (auto it = binaries.find(op); it != binaries.end()) {
      expect_sym("(");
      ExprPtr arg = parse_implies();
      expect_sym(")");
      bool set_arg =
          it->second == Expr::CollBinKind::Union || it->second == Expr::CollBinKind::Intersection;
      if (set_arg) {
        if (!arg->type.is_set() || !compatible(*arg->type.elem, elem))
          fail("OCL", op + " expects a collection of " + elem.to_string());
      } else {
        if (!compatible(arg->type, elem))
          fail("OCL", op + " expects a value of type " + elem.to_string());
      }
      auto e = node(Expr::Kind::CollBinary, src->type);
      mut(e)->coll_bin = it->second;
      mut(e)->src = src;
      mut(e)->arg = arg;
      return e;
    }

    fail("OCL", "unsupported collection operation '" + op + "'");
  }

  ExprPtr parse_primary() {
    const Token& t = lexer_.peek();
    switch (t.kind) {
      case Token::Kind::Int: {
        auto e = node(Expr::Kind::IntLit, Type::integer());
        mut(e)->int_value = lexer_.next().int_value;
        return e;
      }
      case Token::Kind::Str: {
        auto e = node(Expr::Kind::StrLit, Type::string());
        mut(e)->text = lexer_.next().text;
        return e;
      }
      case Token::Kind::Ident: {
        std::string name = lexer_.next().text;
        if (name == "true" || name == "false") {
          auto e = node(Expr::Kind::BoolLit, Type::boolean());
          mut(e)->bool_value = name == "true";
          return e;
        }
        if (name == "null") return node(Expr::Kind::NullLit, Type::null());
        if (auto it = scope_.find(name); it != scope_.end()) {
          auto e = node(Expr::Kind::Var, it->second);
          mut(e)->text = name;
          return e;
        }
        if (dm_.has_class(name)) {
          // Only legal as `Class.allInstances()`; parse_dot consumes it.
          pending_class_ = name;
          auto e = node(Expr::Kind::Var, Type::of_class(name));
          mut(e)->text = name;
          return e;
        }
        fail("OCL", "undeclared variable '" + name + "'");
      }
      case Token::Kind::Sym:
        if (t.text == "(") {
          lexer_.next();
          ExprPtr e = parse_implies();
          expect_sym(")");
          return e;
        }
        [[fallthrough]];
      default: lexer_.error("expected an expression");
    }
  }

  Lexer lexer_;
  const DataModel& dm_;
  std::map<std::string, Type> scope_;
  std::string pending_class_;
};

void collect_free_vars(const ExprPtr& e, std::set<std::string>& bound,
                       std::vector<std::string>& out, std::set<std::string>& seen) {
  if (!e) return;
  if (e->kind == Expr::Kind::Var) {
    if (!bound.count(e->text) && seen.insert(e->text).second) out.push_back(e->text);
    return;
  }
  if (e->kind == Expr::Kind::Iterate) {
    collect_free_vars(e->src, bound, out, seen);
    bool inserted = bound.insert(e->iter_var).second;
    collect_free_vars(e->arg, bound, out, seen);
    if (inserted) bound.erase(e->iter_var);
    return;
  }
  collect_free_vars(e->src, bound, out, seen);
  collect_free_vars(e->arg, bound, out, seen);
}

}  // namespace

std::vector<std::string> free_vars(const ExprPtr& e) {
  std::set<std::string> bound, seen;
  std::vector<std::string> out;
  collect_free_vars(e, bound, out, seen);
  return out;
}

std::string print(const ExprPtr& e) {
  switch (e->kind) {
    case Expr::Kind::BoolLit: return e->bool_value ? "true" : "false";
    case Expr::Kind::IntLit: return std::to_string(e->int_value);
    case Expr::Kind::StrLit: return "'" + e->text + "'";
    case Expr::Kind::NullLit: return "null";
    case Expr::Kind::Var: return e->text;
    case Expr::Kind::AttrAccess: return print(e->src) + "." + e->text;
    case Expr::Kind::Navigation: return print(e->src) + "." + e->text;
    case Expr::Kind::AllInstances: return e->text + ".allInstances()";
    case Expr::Kind::IsUndefined: return print(e->src) + ".oclIsUndefined()";
    case Expr::Kind::Iterate: {
      const char* op = nullptr;
      switch (e->iter_kind) {
        case Expr::IterKind::ForAll: op = "forAll"; break;
        case Expr::IterKind::Exists: op = "exists"; break;
        case Expr::IterKind::Select: op = "select"; break;
        case Expr::IterKind::Reject: op = "reject"; break;
        case Expr::IterKind::Collect: op = "collect"; break;
      }
      return print(e->src) + "->" + op + "(" + e->iter_var + " | " + print(e->arg) + ")";
    }
    case Expr::Kind::CollTest:
      return print(e->src) + "->" +
             (e->coll_test == Expr::CollTestKind::IsEmpty ? "isEmpty()" : "notEmpty()");
    case Expr::Kind::CollBinary: {
      const char* op = nullptr;
      switch (e->coll_bin) {
        case Expr::CollBinKind::Including: op = "including"; break;
        case Expr::CollBinKind::Excluding: op = "excluding"; break;
        case Expr::CollBinKind::Union: op = "union"; break;
        case Expr::CollBinKind::Intersection: op = "intersection"; break;
      }
      return print(e->src) + "->" + op + "(" + print(e->arg) + ")";
    }
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
      return "(" + print(e->src) + " " + op + " " + print(e->arg) + ")";
    }
    case Expr::Kind::BoolBinary: {
      const char* op = nullptr;
      switch (e->bool_bin) {
        case Expr::BoolBinKind::And: op = "and"; break;
        case Expr::BoolBinKind::Or: op = "or"; break;
        case Expr::BoolBinKind::Implies: op = "implies"; break;
      }
      return "(" + print(e->src) + " " + op + " " + print(e->arg) + ")";
    }
    case Expr::Kind::BoolNot: return "(not " + print(e->src) + ")";
  }
  return "?";
}

ExprPtr parse_ocl(const std::string& text, const DataModel& dm,
                  const std::vector<TypedVar>& vars) {
  return Parser(text, dm, vars).parse();
}

}  // namespace oclsql::ocl
