#include "oclsql/msfol.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace oclsql::msfol {

const char* sort_name(Sort s) {
  switch (s) {
    case Sort::Bool: return "Bool";
    case Sort::Int: return "Int";
    case Sort::String: return "String";
    case Sort::Classifier: return "Classifier";
    case Sort::SqlBool: return "SqlBool";
  }
  return "?";
}

namespace {

TermPtr make(Term::Kind kind, Sort sort) {
  auto t = std::make_shared<Term>();
  t->kind = kind;
  t->sort = sort;
  return t;
}

void require_bool(const TermPtr& t, const char* ctx) {
  if (t->sort != Sort::Bool) fail(ctx, "expected a Bool-sorted operand");
}

}  // namespace

namespace mk {

TermPtr tru() { return make(Term::Kind::True, Sort::Bool); }
TermPtr fls() { return make(Term::Kind::False, Sort::Bool); }

TermPtr int_lit(long long v) {
  auto t = std::const_pointer_cast<Term>(make(Term::Kind::IntLit, Sort::Int));
  t->int_value = v;
  return t;
}

TermPtr str_lit(const std::string& s) {
  auto t = std::const_pointer_cast<Term>(make(Term::Kind::StrLit, Sort::String));
  t->name = s;
  return t;
}

TermPtr sym(const std::string& name, Sort sort) {
  auto t = std::const_pointer_cast<Term>(make(Term::Kind::Sym, sort));
  t->name = name;
  return t;
}

TermPtr app(const std::string& name, const std::vector<Sort>& params, Sort result,
            const std::vector<TermPtr>& args) {
  if (params.size() != args.size())
    fail(name, "arity mismatch: expected " + std::to_string(params.size()) + " arguments, got " +
                   std::to_string(args.size()));
  for (size_t i = 0; i < args.size(); ++i) {
    if (args[i]->sort != params[i])
      fail(name, "argument " + std::to_string(i + 1) + " has sort " +
                     sort_name(args[i]->sort) + ", expected " + sort_name(params[i]));
  }
  auto t = std::const_pointer_cast<Term>(make(Term::Kind::Sym, result));
  t->name = name;
  t->args = args;
  return t;
}

TermPtr bound(const std::string& name, Sort sort) {
  auto t = std::const_pointer_cast<Term>(make(Term::Kind::BoundVar, sort));
  t->name = name;
  return t;
}

TermPtr sql_true() { return sym("TRUE", Sort::SqlBool); }
TermPtr sql_false() { return sym("FALSE", Sort::SqlBool); }
TermPtr sql_null() { return sym("NULL", Sort::SqlBool); }

TermPtr eq(TermPtr a, TermPtr b) {
  if (a->sort != b->sort)
    fail("=", std::string("operand sorts differ: ") + sort_name(a->sort) + " vs " +
                  sort_name(b->sort));
  auto t = std::const_pointer_cast<Term>(make(Term::Kind::Eq, Sort::Bool));
  t->args = {std::move(a), std::move(b)};
  return t;
}

TermPtr ne(TermPtr a, TermPtr b) { return not_(eq(std::move(a), std::move(b))); }

TermPtr distinct(std::vector<TermPtr> xs) {
  if (xs.size() < 2) fail("distinct", "needs at least two operands");
  for (const auto& x : xs)
    if (x->sort != xs.front()->sort) fail("distinct", "operand sorts differ");
  auto t = std::const_pointer_cast<Term>(make(Term::Kind::Distinct, Sort::Bool));
  t->args = std::move(xs);
  return t;
}

TermPtr not_(TermPtr a) {
  require_bool(a, "not");
  if (a->kind == Term::Kind::True) return fls();
  if (a->kind == Term::Kind::False) return tru();
  if (a->kind == Term::Kind::Not) return a->args.front();
  auto t = std::const_pointer_cast<Term>(make(Term::Kind::Not, Sort::Bool));
  t->args = {std::move(a)};
  return t;
}

namespace {

// Flattens nested conjunctions/disjunctions and folds constants.
TermPtr nary(Term::Kind kind, std::vector<TermPtr> xs) {
  const bool is_and = kind == Term::Kind::And;
  std::vector<TermPtr> flat;
  for (auto& x : xs) {
    require_bool(x, is_and ? "and" : "or");
    if (x->kind == kind) {
      flat.insert(flat.end(), x->args.begin(), x->args.end());
    } else if (x->kind == Term::Kind::True) {
      if (!is_and) return mk::tru();
    } else if (x->kind == Term::Kind::False) {
      if (is_and) return mk::fls();
    } else {
      flat.push_back(std::move(x));
    }
  }
  if (flat.empty()) return is_and ? mk::tru() : mk::fls();
  if (flat.size() == 1) return flat.front();
  auto t = std::const_pointer_cast<Term>(make(kind, Sort::Bool));
  t->args = std::move(flat);
  return t;
}

}  // namespace

TermPtr and_(std::vector<TermPtr> xs) { return nary(Term::Kind::And, std::move(xs)); }
TermPtr or_(std::vector<TermPtr> xs) { return nary(Term::Kind::Or, std::move(xs)); }

TermPtr implies(TermPtr a, TermPtr b) {
  require_bool(a, "=>");
  require_bool(b, "=>");
  if (a->kind == Term::Kind::True) return b;
  if (a->kind == Term::Kind::False) return tru();
  if (b->kind == Term::Kind::True) return tru();
  auto t = std::const_pointer_cast<Term>(make(Term::Kind::Implies, Sort::Bool));
  t->args = {std::move(a), std::move(b)};
  return t;
}

TermPtr iff(TermPtr a, TermPtr b) {
  require_bool(a, "iff");
  require_bool(b, "iff");
  auto t = std::const_pointer_cast<Term>(make(Term::Kind::Iff, Sort::Bool));
  t->args = {std::move(a), std::move(b)};
  return t;
}

namespace {

TermPtr int_cmp(Term::Kind kind, TermPtr a, TermPtr b, const char* ctx) {
  if (a->sort != Sort::Int || b->sort != Sort::Int) fail(ctx, "integer comparison needs Int operands");
  auto t = std::const_pointer_cast<Term>(make(kind, Sort::Bool));
  t->args = {std::move(a), std::move(b)};
  return t;
}

}  // namespace

TermPtr lt(TermPtr a, TermPtr b) { return int_cmp(Term::Kind::Lt, std::move(a), std::move(b), "<"); }
TermPtr le(TermPtr a, TermPtr b) { return int_cmp(Term::Kind::Le, std::move(a), std::move(b), "<="); }
TermPtr gt(TermPtr a, TermPtr b) { return int_cmp(Term::Kind::Gt, std::move(a), std::move(b), ">"); }
TermPtr ge(TermPtr a, TermPtr b) { return int_cmp(Term::Kind::Ge, std::move(a), std::move(b), ">="); }

namespace {

TermPtr quantifier(Term::Kind kind, std::vector<Binder> binders, TermPtr body) {
  require_bool(body, kind == Term::Kind::Forall ? "forall" : "exists");
  if (binders.empty()) return body;
  // Constant bodies make the quantifier irrelevant.
  if (body->kind == Term::Kind::True || body->kind == Term::Kind::False) return body;
  auto t = std::const_pointer_cast<Term>(make(kind, Sort::Bool));
  t->binders = std::move(binders);
  t->args = {std::move(body)};
  return t;
}

}  // namespace

TermPtr forall(std::vector<Binder> binders, TermPtr body) {
  return quantifier(Term::Kind::Forall, std::move(binders), std::move(body));
}

TermPtr exists(std::vector<Binder> binders, TermPtr body) {
  return quantifier(Term::Kind::Exists, std::move(binders), std::move(body));
}

}  // namespace mk

namespace {

void print_term(std::ostringstream& out, const TermPtr& t);

void print_application(std::ostringstream& out, const char* op, const std::vector<TermPtr>& args) {
  out << '(' << op;
  for (const auto& a : args) {
    out << ' ';
    print_term(out, a);
  }
  out << ')';
}

void print_term(std::ostringstream& out, const TermPtr& t) {
  switch (t->kind) {
    case Term::Kind::True: out << "true"; return;
    case Term::Kind::False: out << "false"; return;
    case Term::Kind::IntLit:
      if (t->int_value < 0)
        out << "(- " << -t->int_value << ')';
      else
        out << t->int_value;
      return;
    case Term::Kind::StrLit: {
      out << '"';
      for (char c : t->name) {
        out << c;
        if (c == '"') out << '"';  // SMT-LIB doubles embedded quotes
      }
      out << '"';
      return;
    }
    case Term::Kind::Sym:
      if (t->args.empty()) {
        out << t->name;
      } else {
        out << '(' << t->name;
        for (const auto& a : t->args) {
          out << ' ';
          print_term(out, a);
        }
        out << ')';
      }
      return;
    case Term::Kind::BoundVar: out << t->name; return;
    case Term::Kind::Eq: print_application(out, "=", t->args); return;
    case Term::Kind::Distinct: print_application(out, "distinct", t->args); return;
    case Term::Kind::Not: print_application(out, "not", t->args); return;
    case Term::Kind::And: print_application(out, "and", t->args); return;
    case Term::Kind::Or: print_application(out, "or", t->args); return;
    case Term::Kind::Implies: print_application(out, "=>", t->args); return;
    case Term::Kind::Iff: print_application(out, "=", t->args); return;
    case Term::Kind::Lt: print_application(out, "<", t->args); return;
    case Term::Kind::Le: print_application(out, "<=", t->args); return;
    case Term::Kind::Gt: print_application(out, ">", t->args); return;
    case Term::Kind::Ge: print_application(out, ">=", t->args); return;
    case Term::Kind::Forall:
    case Term::Kind::Exists: {
      out << '(' << (t->kind == Term::Kind::Forall ? "forall" : "exists") << " (";
      for (size_t i = 0; i < t->binders.size(); ++i) {
        if (i) out << ' ';
        out << '(' << t->binders[i].name << ' ' << sort_name(t->binders[i].sort) << ')';
      }
      out << ") ";
      print_term(out, t->args.front());
      out << ')';
      return;
    }
  }
}

}  // namespace

std::string to_smt(const TermPtr& t) {
  std::ostringstream out;
  print_term(out, t);
  return out.str();
}

void Theory::declare(const Declaration& d) {
  if (const Declaration* existing = find_declaration(d.name)) {
    if (*existing == d) return;
    fail(d.name, "redeclared with a different signature");
  }
  decls_.push_back(d);
}

void Theory::add_axiom(TermPtr axiom, const std::string& comment) {
  require_bool(axiom, "axiom");
  axioms_.push_back(std::move(axiom));
  axiom_comments_.push_back(comment);
}

void Theory::add_goal(TermPtr goal, const std::string& comment) {
  require_bool(goal, "goal");
  goals_.push_back(std::move(goal));
  goal_comments_.push_back(comment);
}

bool Theory::has_declaration(const std::string& name) const {
  return find_declaration(name) != nullptr;
}

const Declaration* Theory::find_declaration(const std::string& name) const {
  for (const auto& d : decls_)
    if (d.name == name) return &d;
  return nullptr;
}

Theory theory_union(const Theory& a, const Theory& b) {
  Theory out = a;
  for (const auto& d : b.decls_) out.declare(d);
  std::set<std::string> seen;
  for (const auto& ax : out.axioms_) seen.insert(to_smt(ax));
  for (size_t i = 0; i < b.axioms_.size(); ++i) {
    if (seen.insert(to_smt(b.axioms_[i])).second) {
      out.axioms_.push_back(b.axioms_[i]);
      out.axiom_comments_.push_back(b.axiom_comments_[i]);
    }
  }
  for (size_t i = 0; i < b.goals_.size(); ++i) {
    out.goals_.push_back(b.goals_[i]);
    out.goal_comments_.push_back(b.goal_comments_[i]);
  }
  return out;
}

std::string emit_smtlib(const Theory& t) {
  std::ostringstream out;
  out << "(set-logic ALL)\n";
  out << "(declare-sort Classifier 0)\n";
  out << "(declare-datatypes ((SqlBool 0)) (((TRUE) (FALSE) (NULL))))\n";
  for (const auto& d : t.declarations()) {
    out << "(declare-fun " << d.name << " (";
    for (size_t i = 0; i < d.params.size(); ++i) {
      if (i) out << ' ';
      out << sort_name(d.params[i]);
    }
    out << ") " << sort_name(d.result) << ")\n";
  }
  const auto& axioms = t.axioms();
  const auto& axiom_comments = t.axiom_comments();
  for (size_t i = 0; i < axioms.size(); ++i) {
    if (!axiom_comments[i].empty()) out << "; " << axiom_comments[i] << '\n';
    out << "(assert " << to_smt(axioms[i]) << ")\n";
  }
  const auto& goals = t.goals();
  const auto& goal_comments = t.goal_comments();
  for (size_t i = 0; i < goals.size(); ++i) {
    if (!goal_comments[i].empty()) out << "; " << goal_comments[i] << '\n';
    out << "(assert " << to_smt(goals[i]) << ")\n";
  }
  out << "(check-sat)\n";
  return out.str();
}

namespace {

// Characters legal in SMT-LIB2 simple symbols besides letters and digits.
bool simple_symbol_char(char c) {
  if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9')) return true;
  static const std::string extra = "~@$%^&*_-+=<>.?/";
  return extra.find(c) != std::string::npos;
}

const std::map<char, char>& escape_map() {
  static const std::map<char, char> m = {
      {'(', 'l'}, {')', 'r'}, {'|', 'b'}, {' ', 's'}, {',', 'c'}, {':', 'k'},
      {'\'', 'q'}, {'"', 'd'}, {'[', 'L'}, {']', 'R'}, {'{', 'B'}, {'}', 'E'},
  };
  return m;
}

}  // namespace

std::string sanitize_symbol(const std::string& raw) {
  std::string out;
  out.reserve(raw.size());
  for (char c : raw) {
    if (c == '!') {
      out += "!!";
    } else if (simple_symbol_char(c)) {
      out += c;
    } else {
      auto it = escape_map().find(c);
      if (it != escape_map().end()) {
        out += '!';
        out += it->second;
      } else {
        char buf[8];
        std::snprintf(buf, sizeof buf, "!x%02x", static_cast<unsigned char>(c));
        out += buf;
      }
    }
  }
  if (!out.empty() && out[0] >= '0' && out[0] <= '9') out.insert(out.begin(), '!');
  return out;
}

std::string unsanitize_symbol(const std::string& sanitized) {
  std::string out;
  size_t i = 0;
  if (!sanitized.empty() && sanitized[0] == '!' && sanitized.size() > 1 &&
      sanitized[1] >= '0' && sanitized[1] <= '9')
    i = 1;  // leading-digit marker
  for (; i < sanitized.size(); ++i) {
    char c = sanitized[i];
    if (c != '!') {
      out += c;
      continue;
    }
    if (i + 1 >= sanitized.size()) fail("unsanitize", "dangling escape in " + sanitized);
    char e = sanitized[++i];
    if (e == '!') {
      out += '!';
    } else if (e == 'x') {
      if (i + 2 >= sanitized.size()) fail("unsanitize", "truncated hex escape in " + sanitized);
      out += static_cast<char>(std::stoi(sanitized.substr(i + 1, 2), nullptr, 16));
      i += 2;
    } else {
      bool found = false;
      for (auto [from, to] : escape_map()) {
        if (to == e) {
          out += from;
          found = true;
          break;
        }
      }
      if (!found) fail("unsanitize", "unknown escape in " + sanitized);
    }
  }
  return out;
}

}  // namespace oclsql::msfol
