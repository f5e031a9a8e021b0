#include "terms.hpp"

#include <algorithm>
#include <sstream>

namespace smtlite {

TermStore::TermStore() {
  declare_sort("Bool", SortKind::Bool);
  declare_sort("Int", SortKind::Int);
  declare_sort("String", SortKind::String);
}

SortId TermStore::declare_sort(const std::string& name, SortKind kind) {
  if (auto it = sort_names_.find(name); it != sort_names_.end()) return it->second;
  SortInfo info;
  info.kind = kind;
  info.name = name;
  sorts_.push_back(info);
  SortId id = static_cast<SortId>(sorts_.size() - 1);
  sort_names_[name] = id;
  return id;
}

SortId TermStore::add_datatype(const std::string& name,
                               const std::vector<std::string>& constructors) {
  SortId id = declare_sort(name, SortKind::Datatype);
  sorts_[id].kind = SortKind::Datatype;
  sorts_[id].constructors = constructors;
  for (const auto& c : constructors) declare_fun(c, {}, id, /*is_constructor=*/true);
  return id;
}

std::optional<SortId> TermStore::find_sort(const std::string& name) const {
  auto it = sort_names_.find(name);
  if (it == sort_names_.end()) return std::nullopt;
  return it->second;
}

int TermStore::declare_fun(const std::string& name, std::vector<SortId> params, SortId result,
                           bool is_constructor) {
  if (auto it = fun_names_.find(name); it != fun_names_.end()) {
    const FunInfo& existing = funs_[it->second];
    if (existing.params != params || existing.result != result)
      die("function '" + name + "' redeclared with a different signature");
    return it->second;
  }
  FunInfo info;
  info.name = name;
  info.params = std::move(params);
  info.result = result;
  info.is_constructor = is_constructor;
  funs_.push_back(std::move(info));
  int id = static_cast<int>(funs_.size() - 1);
  fun_names_[name] = id;
  return id;
}

std::optional<int> TermStore::find_fun(const std::string& name) const {
  auto it = fun_names_.find(name);
  if (it == fun_names_.end()) return std::nullopt;
  return it->second;
}

TermId TermStore::intern(Term t) {
  std::ostringstream key;
  key << static_cast<int>(t.kind) << '|' << t.sort << '|' << t.int_value << '|' << t.sym << '|'
      << t.fun << '|';
  for (TermId a : t.args) key << a << ',';
  key << '|';
  for (const auto& [name, sort] : t.binders) key << name << ':' << sort << ',';
  auto it = memo_.find(key.str());
  if (it != memo_.end()) return it->second;
  terms_.push_back(std::move(t));
  TermId id = static_cast<TermId>(terms_.size() - 1);
  memo_[key.str()] = id;
  return id;
}

TermId TermStore::mk_true() {
  Term t;
  t.kind = Term::Kind::True;
  t.sort = bool_sort();
  return intern(std::move(t));
}

TermId TermStore::mk_false() {
  Term t;
  t.kind = Term::Kind::False;
  t.sort = bool_sort();
  return intern(std::move(t));
}

TermId TermStore::mk_int(long long v) {
  Term t;
  t.kind = Term::Kind::IntLit;
  t.sort = int_sort();
  t.int_value = v;
  return intern(std::move(t));
}

TermId TermStore::mk_str(const std::string& s) {
  Term t;
  t.kind = Term::Kind::StrLit;
  t.sort = string_sort();
  t.sym = s;
  return intern(std::move(t));
}

TermId TermStore::mk_var(const std::string& name, SortId sort) {
  Term t;
  t.kind = Term::Kind::Var;
  t.sort = sort;
  t.sym = name;
  return intern(std::move(t));
}

TermId TermStore::mk_app(int fun, std::vector<TermId> args) {
  const FunInfo& info = funs_[fun];
  if (info.params.size() != args.size())
    die("arity mismatch applying '" + info.name + "'");
  for (size_t i = 0; i < args.size(); ++i)
    if (terms_[args[i]].sort != info.params[i])
      die("sort mismatch in argument " + std::to_string(i + 1) + " of '" + info.name + "'");
  Term t;
  t.kind = Term::Kind::App;
  t.sort = info.result;
  t.fun = fun;
  t.sym = info.name;
  t.args = std::move(args);
  return intern(std::move(t));
}

TermId TermStore::mk_eq(TermId a, TermId b) {
  if (terms_[a].sort != terms_[b].sort) die("equality over different sorts");
  Term t;
  t.kind = Term::Kind::Eq;
  t.sort = bool_sort();
  t.args = {std::min(a, b), std::max(a, b)};
  return intern(std::move(t));
}

TermId TermStore::mk_not(TermId a) {
  if (terms_[a].kind == Term::Kind::Not) return terms_[a].args[0];
  if (terms_[a].kind == Term::Kind::True) return mk_false();
  if (terms_[a].kind == Term::Kind::False) return mk_true();
  Term t;
  t.kind = Term::Kind::Not;
  t.sort = bool_sort();
  t.args = {a};
  return intern(std::move(t));
}

TermId TermStore::mk_and(std::vector<TermId> xs) {
  if (xs.empty()) return mk_true();
  if (xs.size() == 1) return xs[0];
  Term t;
  t.kind = Term::Kind::And;
  t.sort = bool_sort();
  t.args = std::move(xs);
  return intern(std::move(t));
}

TermId TermStore::mk_or(std::vector<TermId> xs) {
  if (xs.empty()) return mk_false();
  if (xs.size() == 1) return xs[0];
  Term t;
  t.kind = Term::Kind::Or;
  t.sort = bool_sort();
  t.args = std::move(xs);
  return intern(std::move(t));
}

TermId TermStore::mk_implies(TermId a, TermId b) {
  Term t;
  t.kind = Term::Kind::Implies;
  t.sort = bool_sort();
  t.args = {a, b};
  return intern(std::move(t));
}

TermId TermStore::mk_distinct(std::vector<TermId> xs) {
  Term t;
  t.kind = Term::Kind::Distinct;
  t.sort = bool_sort();
  t.args = std::move(xs);
  return intern(std::move(t));
}

TermId TermStore::mk_cmp(Term::Kind kind, TermId a, TermId b) {
  Term t;
  t.kind = kind;
  t.sort = bool_sort();
  t.args = {a, b};
  return intern(std::move(t));
}

TermId TermStore::mk_quant(Term::Kind kind, std::vector<std::pair<std::string, SortId>> binders,
                           TermId body) {
  if (binders.empty()) return body;
  Term t;
  t.kind = kind;
  t.sort = bool_sort();
  t.binders = std::move(binders);
  t.args = {body};
  return intern(std::move(t));
}

std::string TermStore::to_string(TermId id) const {
  const Term& t = terms_[id];
  auto nary = [&](const char* op) {
    std::string out = std::string("(") + op;
    for (TermId a : t.args) out += " " + to_string(a);
    return out + ")";
  };
  switch (t.kind) {
    case Term::Kind::True: return "true";
    case Term::Kind::False: return "false";
    case Term::Kind::IntLit: return std::to_string(t.int_value);
    case Term::Kind::StrLit: return "\"" + t.sym + "\"";
    case Term::Kind::Var: return t.sym;
    case Term::Kind::App: {
      if (t.args.empty()) return t.sym;
      std::string out = "(" + t.sym;
      for (TermId a : t.args) out += " " + to_string(a);
      return out + ")";
    }
    case Term::Kind::Eq: return nary("=");
    case Term::Kind::Not: return nary("not");
    case Term::Kind::And: return nary("and");
    case Term::Kind::Or: return nary("or");
    case Term::Kind::Implies: return nary("=>");
    case Term::Kind::Distinct: return nary("distinct");
    case Term::Kind::Lt: return nary("<");
    case Term::Kind::Le: return nary("<=");
    case Term::Kind::Gt: return nary(">");
    case Term::Kind::Ge: return nary(">=");
    case Term::Kind::Forall:
    case Term::Kind::Exists: {
      std::string out = t.kind == Term::Kind::Forall ? "(forall (" : "(exists (";
      for (size_t i = 0; i < t.binders.size(); ++i) {
        if (i) out += " ";
        out += "(" + t.binders[i].first + " " + sorts_[t.binders[i].second].name + ")";
      }
      return out + ") " + to_string(t.args[0]) + ")";
    }
  }
  return "?";
}

}  // namespace smtlite
