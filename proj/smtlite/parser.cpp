#include <cctype>
#include <variant>

#include "terms.hpp"

namespace smtlite {

namespace {

struct Sexpr {
  // Leaf symbol/number/string, or a list.
  std::string atom;
  bool is_string = false;
  std::vector<Sexpr> list;
  bool is_list = false;
};

class Reader {
public:
  explicit Reader(const std::string& text) : text_(text) {}

  bool at_end() {
    skip_ws();
    return i_ >= text_.size();
  }

  Sexpr read() {
    skip_ws();
    if (i_ >= text_.size()) die("unexpected end of input");
    char c = text_[i_];
    if (c == '(') {
      ++i_;
      Sexpr out;
      out.is_list = true;
      while (true) {
        skip_ws();
        if (i_ >= text_.size()) die("unbalanced parenthesis");
        if (text_[i_] == ')') {
          ++i_;
          return out;
        }
        out.list.push_back(read());
      }
    }
    if (c == '"') {
      ++i_;
      Sexpr out;
      out.is_string = true;
      while (i_ < text_.size()) {
        if (text_[i_] == '"') {
          if (i_ + 1 < text_.size() && text_[i_ + 1] == '"') {
            out.atom += '"';
            i_ += 2;
            continue;
          }
          ++i_;
          return out;
        }
        out.atom += text_[i_++];
      }
      die("unterminated string literal");
    }
    if (c == '|') {
      ++i_;
      Sexpr out;
      while (i_ < text_.size() && text_[i_] != '|') out.atom += text_[i_++];
      if (i_ >= text_.size()) die("unterminated quoted symbol");
      ++i_;
      return out;
    }
    Sexpr out;
    while (i_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[i_])) &&
           text_[i_] != '(' && text_[i_] != ')' && text_[i_] != ';')
      out.atom += text_[i_++];
    if (out.atom.empty()) die(std::string("unexpected character '") + c + "'");
    return out;
  }

private:
  void skip_ws() {
    while (i_ < text_.size()) {
      char c = text_[i_];
      if (c == ';') {
        while (i_ < text_.size() && text_[i_] != '\n') ++i_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++i_;
      } else {
        break;
      }
    }
  }

  const std::string& text_;
  size_t i_ = 0;
};

bool is_number(const std::string& s) {
  if (s.empty()) return false;
  size_t i = 0;
  if (s[0] == '-') i = 1;
  if (i >= s.size()) return false;
  for (; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

class ScriptParser {
public:
  explicit ScriptParser(Problem& problem) : p_(problem) {}

  void command(const Sexpr& s) {
    if (!s.is_list || s.list.empty() || s.list[0].is_list) die("malformed command");
    const std::string& head = s.list[0].atom;
    if (head == "set-logic" || head == "set-info" || head == "set-option" || head == "exit" ||
        head == "get-model" || head == "get-info" || head == "push" || head == "pop")
      return;
    if (head == "check-sat") {
      p_.has_check_sat = true;
      return;
    }
    if (head == "declare-sort") {
      if (s.list.size() != 3 || s.list[2].atom != "0")
        die("only nullary sorts are supported");
      p_.store.declare_sort(s.list[1].atom, SortKind::Uninterpreted);
      return;
    }
    if (head == "declare-datatypes") {
      parse_datatypes(s);
      return;
    }
    if (head == "declare-fun") {
      if (s.list.size() != 4) die("malformed declare-fun");
      std::vector<SortId> params;
      for (const auto& a : s.list[2].list) params.push_back(sort_of(a));
      p_.store.declare_fun(s.list[1].atom, std::move(params), sort_of(s.list[3]));
      return;
    }
    if (head == "declare-const") {
      if (s.list.size() != 3) die("malformed declare-const");
      p_.store.declare_fun(s.list[1].atom, {}, sort_of(s.list[2]));
      return;
    }
    if (head == "assert") {
      if (s.list.size() != 2) die("malformed assert");
      std::map<std::string, TermId> scope;
      TermId t = term_of(s.list[1], scope);
      if (p_.store.term(t).sort != p_.store.bool_sort()) die("assert expects a Bool term");
      p_.assertions.push_back(t);
      return;
    }
    die("unsupported command '" + head + "'");
  }

private:
  void parse_datatypes(const Sexpr& s) {
    // (declare-datatypes ((Name 0)) (((c1) (c2) ...)))
    if (s.list.size() != 3) die("malformed declare-datatypes");
    const Sexpr& names = s.list[1];
    const Sexpr& defs = s.list[2];
    if (names.list.size() != defs.list.size()) die("malformed declare-datatypes");
    for (size_t i = 0; i < names.list.size(); ++i) {
      const Sexpr& name = names.list[i];
      if (!name.is_list || name.list.size() != 2 || name.list[1].atom != "0")
        die("only simple datatypes are supported");
      std::vector<std::string> constructors;
      for (const auto& ctor : defs.list[i].list) {
        if (!ctor.is_list || ctor.list.size() != 1)
          die("only nullary constructors are supported");
        constructors.push_back(ctor.list[0].atom);
      }
      p_.store.add_datatype(name.list[0].atom, constructors);
    }
  }

  SortId sort_of(const Sexpr& s) {
    if (s.is_list) die("parametric sorts are not supported");
    auto id = p_.store.find_sort(s.atom);
    if (!id) die("unknown sort '" + s.atom + "'");
    return *id;
  }

  TermId term_of(const Sexpr& s, std::map<std::string, TermId>& scope) {
    TermStore& st = p_.store;
    if (s.is_string) return st.mk_str(s.atom);
    if (!s.is_list) {
      const std::string& a = s.atom;
      if (a == "true") return st.mk_true();
      if (a == "false") return st.mk_false();
      if (is_number(a)) return st.mk_int(std::stoll(a));
      if (auto it = scope.find(a); it != scope.end()) return it->second;
      if (auto f = st.find_fun(a)) return st.mk_app(*f, {});
      die("unknown symbol '" + a + "'");
    }
    if (s.list.empty()) die("empty application");
    if (s.list[0].is_list) die("higher-order application");
    const std::string& head = s.list[0].atom;

    if (head == "forall" || head == "exists") {
      if (s.list.size() != 3) die("malformed quantifier");
      std::vector<std::pair<std::string, SortId>> binders;
      std::map<std::string, TermId> inner = scope;
      for (const auto& b : s.list[1].list) {
        if (!b.is_list || b.list.size() != 2) die("malformed binder");
        SortId sort = sort_of(b.list[1]);
        binders.emplace_back(b.list[0].atom, sort);
        inner[b.list[0].atom] = st.mk_var(b.list[0].atom, sort);
      }
      TermId body = term_of(s.list[2], inner);
      return st.mk_quant(head == "forall" ? Term::Kind::Forall : Term::Kind::Exists,
                         std::move(binders), body);
    }

    std::vector<TermId> args;
    for (size_t i = 1; i < s.list.size(); ++i) args.push_back(term_of(s.list[i], scope));

    if (head == "-" && args.size() == 1) {
      const Term& a = st.term(args[0]);
      if (a.kind != Term::Kind::IntLit) die("general arithmetic is not supported");
      return st.mk_int(-a.int_value);
    }
    if (head == "not") {
      if (args.size() != 1) die("not takes one argument");
      return st.mk_not(args[0]);
    }
    if (head == "and") return st.mk_and(std::move(args));
    if (head == "or") return st.mk_or(std::move(args));
    if (head == "=>") {
      if (args.size() < 2) die("=> takes at least two arguments");
      TermId acc = args.back();
      for (size_t i = args.size() - 1; i-- > 0;) acc = st.mk_implies(args[i], acc);
      return acc;
    }
    if (head == "=") {
      if (args.size() < 2) die("= takes at least two arguments");
      std::vector<TermId> parts;
      for (size_t i = 0; i + 1 < args.size(); ++i) parts.push_back(st.mk_eq(args[i], args[i + 1]));
      return st.mk_and(std::move(parts));
    }
    if (head == "distinct") return st.mk_distinct(std::move(args));
    if (head == "<" || head == "<=" || head == ">" || head == ">=") {
      if (args.size() != 2) die("comparison takes two arguments");
      for (TermId a : args)
        if (st.term(a).sort != st.int_sort()) die("comparison over non-Int terms");
      Term::Kind k = head == "<"    ? Term::Kind::Lt
                     : head == "<=" ? Term::Kind::Le
                     : head == ">"  ? Term::Kind::Gt
                                    : Term::Kind::Ge;
      return st.mk_cmp(k, args[0], args[1]);
    }
    if (auto f = st.find_fun(head)) return st.mk_app(*f, std::move(args));
    die("unknown function '" + head + "'");
  }

  Problem& p_;
};

}  // namespace

Problem parse_script(const std::string& text) {
  Problem problem;
  Reader reader(text);
  ScriptParser parser(problem);
  while (!reader.at_end()) parser.command(reader.read());
  return problem;
}

}  // namespace smtlite
