#include "fmf.hpp"

#include <algorithm>
#include <optional>
#include <sstream>

namespace smtlite {

namespace {

// A domain element. For Int it carries the concrete integer; for String the
// literal index (pinned) or a fresh element; Uninterpreted and Datatype
// elements are anonymous indices.
struct Domain {
  std::vector<long long> int_values;      // Int only
  std::vector<std::string> str_literals;  // String: first elements are pinned
  int size = 0;
};

struct Tables {
  // fun -> flattened cell table: cell index -> value (element index).
  std::vector<std::vector<int>> fun_cells;
  std::vector<std::vector<bool>> pred_cells;
};

constexpr int kOut = -7;      // integer point outside the finite domain
constexpr int kUnknown = -8;  // unknown evaluation caused by an outside point

class Encoder {
public:
  Encoder(TermStore& st, const ClauseSet& clauses, int size,
          std::chrono::steady_clock::time_point deadline)
      : st_(st), clauses_(clauses), size_(size), deadline_(deadline) {}

  FiniteModelFinder::Outcome run();

private:
  // --- domain construction ---
  void build_domains();
  int domain_size(SortId s) const { return domains_[s].size; }

  // --- encoding ---
  bool encode();  // false when a clause is already unsatisfiable
  struct Handle {
    bool concrete = false;
    int value = 0;                 // element index when concrete
    std::vector<int> onehot;       // SAT var per element otherwise
  };
  Handle eval_term(TermId t, const std::map<std::string, int>& env);
  // Literal as a SAT literal or a constant.
  std::optional<SatLit> eval_literal(const Lit& l, const std::map<std::string, int>& env,
                                     bool& constant_value, bool& is_constant);
  int cell_var(int fun, const std::vector<int>& args, int value);
  int pred_var(int fun, const std::vector<int>& args);
  int aux_bool();
  int element_of_int(long long v) const;
  int element_of_string(const std::string& s);
  int element_of_constructor(int fun) const;

  bool add_clause_instances(const Clause& clause);
  bool timed_out() const { return std::chrono::steady_clock::now() >= deadline_; }

  // --- decoding & verification ---
  void decode();
  bool verify();
  int eval_concrete(TermId t, const std::map<std::string, int>& env) const;
  bool literal_definitely_true(const Lit& l, const std::map<std::string, int>& env) const;
  bool clause_holds(const Clause& c, bool with_out_points) const;

  TermStore& st_;
  const ClauseSet& clauses_;
  int size_;
  std::chrono::steady_clock::time_point deadline_;

  std::vector<Domain> domains_;  // by sort id
  SatSolver sat_;
  // fun -> base var index and strides for cells.
  struct FunEnc {
    long long cells = 0;
    std::vector<int> first_var;  // per cell: first selector var (functions)
    std::vector<int> bool_var;   // per cell: var (predicates)
  };
  std::vector<FunEnc> funs_;
  Tables model_;
  bool encode_failed_ = false;
};

void Encoder::build_domains() {
  domains_.assign(st_.sort_count(), {});
  // Integer candidates: every literal in the clause set plus padding.
  std::set<long long> ints;
  std::set<std::string> strings;
  std::vector<TermId> stack;
  auto scan = [&](TermId t) {
    stack.push_back(t);
    while (!stack.empty()) {
      const Term& term = st_.term(stack.back());
      stack.pop_back();
      if (term.kind == Term::Kind::IntLit) ints.insert(term.int_value);
      if (term.kind == Term::Kind::StrLit) strings.insert(term.sym);
      for (TermId a : term.args) stack.push_back(a);
    }
  };
  for (const auto& c : clauses_.ground)
    for (const auto& l : c.lits) scan(l.atom);
  for (const auto& c : clauses_.quantified)
    for (const auto& l : c.lits) scan(l.atom);

  for (int s = 0; s < st_.sort_count(); ++s) {
    const SortInfo& info = st_.sort(s);
    Domain d;
    switch (info.kind) {
      case SortKind::Bool: d.size = 2; break;
      case SortKind::Int: {
        for (long long v : ints) d.int_values.push_back(v);
        long long pad = ints.empty() ? 0 : *ints.rbegin();
        long long low = ints.empty() ? 0 : *ints.begin();
        d.int_values.push_back(low - 1);
        for (int k = 1; k <= size_ + 1; ++k) d.int_values.push_back(pad + k);
        std::sort(d.int_values.begin(), d.int_values.end());
        d.size = static_cast<int>(d.int_values.size());
        break;
      }
      case SortKind::String: {
        for (const auto& lit : strings) d.str_literals.push_back(lit);
        d.size = static_cast<int>(d.str_literals.size()) + size_ + 1;
        break;
      }
      case SortKind::Uninterpreted: d.size = size_ + 1; break;
      case SortKind::Datatype: d.size = static_cast<int>(info.constructors.size()); break;
    }
    domains_[s] = std::move(d);
  }
}

int Encoder::element_of_int(long long v) const {
  const auto& vals = domains_[st_.int_sort()].int_values;
  auto it = std::lower_bound(vals.begin(), vals.end(), v);
  if (it == vals.end() || *it != v) die("integer literal missing from the domain");
  return static_cast<int>(it - vals.begin());
}

int Encoder::element_of_string(const std::string& s) {
  const auto& lits = domains_[st_.string_sort()].str_literals;
  for (size_t i = 0; i < lits.size(); ++i)
    if (lits[i] == s) return static_cast<int>(i);
  die("string literal missing from the domain");
}

int Encoder::element_of_constructor(int fun) const {
  const FunInfo& info = st_.fun(fun);
  const SortInfo& sort = st_.sort(info.result);
  for (size_t i = 0; i < sort.constructors.size(); ++i)
    if (sort.constructors[i] == info.name) return static_cast<int>(i);
  die("constructor not found");
}

int Encoder::cell_var(int fun, const std::vector<int>& args, int value) {
  FunEnc& enc = funs_[fun];
  const FunInfo& info = st_.fun(fun);
  long long cell = 0;
  for (size_t i = 0; i < args.size(); ++i) cell = cell * domain_size(info.params[i]) + args[i];
  if (enc.first_var[cell] == -1) {
    int n = domain_size(info.result);
    int first = -1;
    std::vector<SatLit> at_least;
    for (int v = 0; v < n; ++v) {
      int var = sat_.new_var();
      if (v == 0) first = var;
      at_least.push_back(pos_lit(var));
    }
    enc.first_var[cell] = first;
    sat_.add_clause(at_least);
    for (int v1 = 0; v1 < n; ++v1)
      for (int v2 = v1 + 1; v2 < n; ++v2)
        sat_.add_clause({neg_lit(first + v1), neg_lit(first + v2)});
  }
  return enc.first_var[cell] + value;
}

int Encoder::pred_var(int fun, const std::vector<int>& args) {
  FunEnc& enc = funs_[fun];
  const FunInfo& info = st_.fun(fun);
  long long cell = 0;
  for (size_t i = 0; i < args.size(); ++i) cell = cell * domain_size(info.params[i]) + args[i];
  if (enc.bool_var[cell] == -1) enc.bool_var[cell] = sat_.new_var();
  return enc.bool_var[cell];
}

int Encoder::aux_bool() { return sat_.new_var(); }

Encoder::Handle Encoder::eval_term(TermId t, const std::map<std::string, int>& env) {
  const Term& term = st_.term(t);
  Handle h;
  switch (term.kind) {
    case Term::Kind::Var: {
      h.concrete = true;
      h.value = env.at(term.sym);
      return h;
    }
    case Term::Kind::IntLit: {
      h.concrete = true;
      h.value = element_of_int(term.int_value);
      return h;
    }
    case Term::Kind::StrLit: {
      h.concrete = true;
      h.value = element_of_string(term.sym);
      return h;
    }
    case Term::Kind::App: {
      if (st_.fun(term.fun).is_constructor) {
        h.concrete = true;
        h.value = element_of_constructor(term.fun);
        return h;
      }
      std::vector<Handle> args;
      for (TermId a : term.args) args.push_back(eval_term(a, env));
      bool all_concrete = true;
      for (const auto& a : args) all_concrete &= a.concrete;
      const int result_size = domain_size(term.sort);
      if (all_concrete) {
        std::vector<int> vals;
        for (const auto& a : args) vals.push_back(a.value);
        h.onehot.resize(result_size);
        for (int v = 0; v < result_size; ++v) h.onehot[v] = cell_var(term.fun, vals, v);
        return h;
      }
      // Some argument is symbolic: build the composed selector.
      std::vector<std::vector<int>> arg_values(args.size());
      for (size_t i = 0; i < args.size(); ++i) {
        if (args[i].concrete)
          arg_values[i] = {args[i].value};
        else {
          int n = domain_size(st_.term(term.args[i]).sort);
          for (int v = 0; v < n; ++v) arg_values[i].push_back(v);
        }
      }
      h.onehot.resize(result_size);
      for (int v = 0; v < result_size; ++v) h.onehot[v] = aux_bool();
      // exactly-one over the composed result
      std::vector<SatLit> at_least;
      for (int v = 0; v < result_size; ++v) at_least.push_back(pos_lit(h.onehot[v]));
      sat_.add_clause(at_least);
      for (int v1 = 0; v1 < result_size; ++v1)
        for (int v2 = v1 + 1; v2 < result_size; ++v2)
          sat_.add_clause({neg_lit(h.onehot[v1]), neg_lit(h.onehot[v2])});
      // (args = d⃗) => (aux_v <=> cell_v)
      std::vector<int> tuple(args.size(), 0);
      while (true) {
        std::vector<SatLit> guard;
        std::vector<int> vals(args.size());
        for (size_t i = 0; i < args.size(); ++i) {
          vals[i] = arg_values[i][tuple[i]];
          if (!args[i].concrete) guard.push_back(neg_lit(args[i].onehot[vals[i]]));
        }
        for (int v = 0; v < result_size; ++v) {
          int cv = cell_var(term.fun, vals, v);
          std::vector<SatLit> c1 = guard;
          c1.push_back(neg_lit(cv));
          c1.push_back(pos_lit(h.onehot[v]));
          sat_.add_clause(c1);
        }
        size_t i = 0;
        while (i < tuple.size()) {
          if (static_cast<size_t>(++tuple[i]) < arg_values[i].size()) break;
          tuple[i] = 0;
          ++i;
        }
        if (i == tuple.size()) break;
      }
      return h;
    }
    default: die("unexpected term in finite-model evaluation");
  }
}

std::optional<SatLit> Encoder::eval_literal(const Lit& l, const std::map<std::string, int>& env,
                                            bool& constant_value, bool& is_constant) {
  const Term& atom = st_.term(l.atom);
  is_constant = false;
  switch (atom.kind) {
    case Term::Kind::App: {
      // Boolean predicate application.
      std::vector<Handle> args;
      for (TermId a : atom.args) args.push_back(eval_term(a, env));
      bool all_concrete = true;
      for (const auto& a : args) all_concrete &= a.concrete;
      if (all_concrete) {
        std::vector<int> vals;
        for (const auto& a : args) vals.push_back(a.value);
        int v = pred_var(atom.fun, vals);
        return l.neg ? neg_lit(v) : pos_lit(v);
      }
      int aux = aux_bool();
      // (args = d⃗) => (aux <=> pred_cell)
      std::vector<std::vector<int>> arg_values(args.size());
      for (size_t i = 0; i < args.size(); ++i) {
        if (args[i].concrete)
          arg_values[i] = {args[i].value};
        else {
          int n = domain_size(st_.term(atom.args[i]).sort);
          for (int v = 0; v < n; ++v) arg_values[i].push_back(v);
        }
      }
      std::vector<int> tuple(args.size(), 0);
      while (true) {
        std::vector<SatLit> guard;
        std::vector<int> vals(args.size());
        for (size_t i = 0; i < args.size(); ++i) {
          vals[i] = arg_values[i][tuple[i]];
          if (!args[i].concrete) guard.push_back(neg_lit(args[i].onehot[vals[i]]));
        }
        int pv = pred_var(atom.fun, vals);
        std::vector<SatLit> c1 = guard;
        c1.push_back(neg_lit(pv));
        c1.push_back(pos_lit(aux));
        sat_.add_clause(c1);
        std::vector<SatLit> c2 = guard;
        c2.push_back(pos_lit(pv));
        c2.push_back(neg_lit(aux));
        sat_.add_clause(c2);
        size_t i = 0;
        while (i < tuple.size()) {
          if (static_cast<size_t>(++tuple[i]) < arg_values[i].size()) break;
          tuple[i] = 0;
          ++i;
        }
        if (i == tuple.size()) break;
      }
      return l.neg ? neg_lit(aux) : pos_lit(aux);
    }
    case Term::Kind::Eq: {
      Handle a = eval_term(atom.args[0], env);
      Handle b = eval_term(atom.args[1], env);
      if (a.concrete && b.concrete) {
        is_constant = true;
        constant_value = (a.value == b.value) != l.neg;
        return std::nullopt;
      }
      if (a.concrete || b.concrete) {
        const Handle& sym = a.concrete ? b : a;
        int v = a.concrete ? a.value : b.value;
        return l.neg ? neg_lit(sym.onehot[v]) : pos_lit(sym.onehot[v]);
      }
      int aux = aux_bool();
      int n = static_cast<int>(a.onehot.size());
      // aux <=> OR_v (a_v & b_v)
      for (int v = 0; v < n; ++v) {
        sat_.add_clause({neg_lit(a.onehot[v]), neg_lit(b.onehot[v]), pos_lit(aux)});
        sat_.add_clause({neg_lit(a.onehot[v]), pos_lit(b.onehot[v]), neg_lit(aux)});
      }
      return l.neg ? neg_lit(aux) : pos_lit(aux);
    }
    case Term::Kind::Lt:
    case Term::Kind::Le:
    case Term::Kind::Gt:
    case Term::Kind::Ge: {
      Handle a = eval_term(atom.args[0], env);
      Handle b = eval_term(atom.args[1], env);
      const auto& ints = domains_[st_.int_sort()].int_values;
      auto holds = [&](int va, int vb) {
        long long x = ints[va], y = ints[vb];
        switch (atom.kind) {
          case Term::Kind::Lt: return x < y;
          case Term::Kind::Le: return x <= y;
          case Term::Kind::Gt: return x > y;
          case Term::Kind::Ge: return x >= y;
          default: return false;
        }
      };
      if (a.concrete && b.concrete) {
        is_constant = true;
        constant_value = holds(a.value, b.value) != l.neg;
        return std::nullopt;
      }
      int aux = aux_bool();
      std::vector<int> avals = a.concrete ? std::vector<int>{a.value} : std::vector<int>{};
      std::vector<int> bvals = b.concrete ? std::vector<int>{b.value} : std::vector<int>{};
      if (!a.concrete)
        for (int v = 0; v < static_cast<int>(a.onehot.size()); ++v) avals.push_back(v);
      if (!b.concrete)
        for (int v = 0; v < static_cast<int>(b.onehot.size()); ++v) bvals.push_back(v);
      for (int va : avals) {
        for (int vb : bvals) {
          std::vector<SatLit> guard;
          if (!a.concrete) guard.push_back(neg_lit(a.onehot[va]));
          if (!b.concrete) guard.push_back(neg_lit(b.onehot[vb]));
          std::vector<SatLit> c = guard;
          c.push_back(holds(va, vb) ? pos_lit(aux) : neg_lit(aux));
          sat_.add_clause(c);
        }
      }
      return l.neg ? neg_lit(aux) : pos_lit(aux);
    }
    default: die("unexpected literal in finite-model evaluation");
  }
}

bool Encoder::add_clause_instances(const Clause& clause) {
  // Enumerate assignments of the clause variables over their domains.
  std::vector<int> sizes;
  for (const auto& [name, sort] : clause.vars) sizes.push_back(domain_size(sort));
  std::vector<int> tuple(clause.vars.size(), 0);
  while (true) {
    if (timed_out()) return false;
    std::map<std::string, int> env;
    for (size_t i = 0; i < clause.vars.size(); ++i) env[clause.vars[i].first] = tuple[i];

    std::vector<SatLit> lits;
    bool satisfied = false;
    for (const Lit& l : clause.lits) {
      bool constant_value = false, is_constant = false;
      auto sl = eval_literal(l, env, constant_value, is_constant);
      if (is_constant) {
        if (constant_value) {
          satisfied = true;
          break;
        }
        continue;
      }
      lits.push_back(*sl);
    }
    if (!satisfied) {
      if (lits.empty()) {
        encode_failed_ = true;
        return true;
      }
      sat_.add_clause(lits);
    }

    if (clause.vars.empty()) break;
    size_t i = 0;
    while (i < tuple.size()) {
      if (++tuple[i] < sizes[i]) break;
      tuple[i] = 0;
      ++i;
    }
    if (i == tuple.size()) break;
  }
  return true;
}

bool Encoder::encode() {
  funs_.assign(st_.fun_count(), {});
  for (int f = 0; f < st_.fun_count(); ++f) {
    const FunInfo& info = st_.fun(f);
    if (info.is_constructor) continue;
    long long cells = 1;
    for (SortId p : info.params) cells *= domain_size(p);
    if (cells > 2'000'000) die("function table too large");
    funs_[f].cells = cells;
    if (info.result == st_.bool_sort())
      funs_[f].bool_var.assign(cells, -1);
    else
      funs_[f].first_var.assign(cells, -1);
  }
  for (const auto& c : clauses_.ground)
    if (!add_clause_instances(c)) return false;
  for (const auto& c : clauses_.quantified)
    if (!add_clause_instances(c)) return false;
  return true;
}

void Encoder::decode() {
  model_.fun_cells.assign(st_.fun_count(), {});
  model_.pred_cells.assign(st_.fun_count(), {});
  for (int f = 0; f < st_.fun_count(); ++f) {
    const FunInfo& info = st_.fun(f);
    if (info.is_constructor) continue;
    const FunEnc& enc = funs_[f];
    if (info.result == st_.bool_sort()) {
      model_.pred_cells[f].assign(enc.cells, false);
      for (long long cell = 0; cell < enc.cells; ++cell)
        if (enc.bool_var[cell] != -1)
          model_.pred_cells[f][cell] = sat_.value(enc.bool_var[cell]);
    } else {
      model_.fun_cells[f].assign(enc.cells, 0);
      for (long long cell = 0; cell < enc.cells; ++cell) {
        if (enc.first_var[cell] == -1) continue;  // unconstrained: default 0
        for (int v = 0; v < domain_size(info.result); ++v)
          if (sat_.value(enc.first_var[cell] + v)) model_.fun_cells[f][cell] = v;
      }
    }
  }
}

int Encoder::eval_concrete(TermId t, const std::map<std::string, int>& env) const {
  const Term& term = st_.term(t);
  switch (term.kind) {
    case Term::Kind::Var: return env.at(term.sym);
    case Term::Kind::IntLit: return element_of_int(term.int_value);
    case Term::Kind::StrLit: {
      const auto& lits = domains_[st_.string_sort()].str_literals;
      for (size_t i = 0; i < lits.size(); ++i)
        if (lits[i] == term.sym) return static_cast<int>(i);
      die("unknown string literal");
    }
    case Term::Kind::App: {
      if (st_.fun(term.fun).is_constructor) return element_of_constructor(term.fun);
      std::vector<int> args;
      for (TermId a : term.args) {
        int v = eval_concrete(a, env);
        if (v == kOut || v == kUnknown) return kUnknown;
        args.push_back(v);
      }
      const FunInfo& info = st_.fun(term.fun);
      long long cell = 0;
      for (size_t i = 0; i < args.size(); ++i)
        cell = cell * domain_size(info.params[i]) + args[i];
      return model_.fun_cells[term.fun][cell];
    }
    default: die("unexpected term in verification");
  }
}

// Three-valued literal evaluation: definite truth only. Outside integer
// points make predicates false and function values unknown.
bool Encoder::literal_definitely_true(const Lit& l, const std::map<std::string, int>& env) const {
  const Term& atom = st_.term(l.atom);
  switch (atom.kind) {
    case Term::Kind::App: {
      std::vector<int> args;
      for (TermId a : atom.args) {
        int v = eval_concrete(a, env);
        if (v == kOut) return l.neg;  // predicates are false outside the domain
        if (v == kUnknown) return false;
        args.push_back(v);
      }
      const FunInfo& info = st_.fun(atom.fun);
      long long cell = 0;
      for (size_t i = 0; i < args.size(); ++i)
        cell = cell * domain_size(info.params[i]) + args[i];
      bool value = model_.pred_cells[atom.fun][cell];
      return value != l.neg;
    }
    case Term::Kind::Eq: {
      int a = eval_concrete(atom.args[0], env);
      int b = eval_concrete(atom.args[1], env);
      if (a == kUnknown || b == kUnknown) return false;
      if (a == kOut && b == kOut) return false;  // two outside points may differ
      if (a == kOut || b == kOut) return l.neg;  // outside never equals inside
      return (a == b) != l.neg;
    }
    case Term::Kind::Lt:
    case Term::Kind::Le:
    case Term::Kind::Gt:
    case Term::Kind::Ge: {
      int a = eval_concrete(atom.args[0], env);
      int b = eval_concrete(atom.args[1], env);
      if (a == kOut || b == kOut || a == kUnknown || b == kUnknown) return false;
      const auto& ints = domains_[st_.int_sort()].int_values;
      long long x = ints[a], y = ints[b];
      bool holds = false;
      switch (atom.kind) {
        case Term::Kind::Lt: holds = x < y; break;
        case Term::Kind::Le: holds = x <= y; break;
        case Term::Kind::Gt: holds = x > y; break;
        case Term::Kind::Ge: holds = x >= y; break;
        default: break;
      }
      return holds != l.neg;
    }
    default: die("unexpected literal in verification");
  }
}

bool Encoder::clause_holds(const Clause& c, bool with_out_points) const {
  std::vector<int> sizes;
  std::vector<bool> is_int;
  for (const auto& [name, sort] : c.vars) {
    // Outside points apply to Int variables only.
    bool int_var = sort == st_.int_sort();
    is_int.push_back(int_var);
    sizes.push_back(domain_size(sort) + (with_out_points && int_var ? 1 : 0));
  }
  std::vector<int> tuple(c.vars.size(), 0);
  while (true) {
    bool has_out = false;
    std::map<std::string, int> env;
    for (size_t i = 0; i < c.vars.size(); ++i) {
      bool out = with_out_points && is_int[i] && tuple[i] == domain_size(c.vars[i].second);
      has_out |= out;
      env[c.vars[i].first] = out ? kOut : tuple[i];
    }
    // In the closure pass only the combinations touching an outside point
    // matter; the plain pass checks every combination.
    if (!with_out_points || has_out) {
      bool ok = false;
      for (const Lit& l : c.lits) {
        if (literal_definitely_true(l, env)) {
          ok = true;
          break;
        }
      }
      if (!ok) return false;
    }
    if (c.vars.empty()) break;
    size_t i = 0;
    while (i < tuple.size()) {
      if (++tuple[i] < sizes[i]) break;
      tuple[i] = 0;
      ++i;
    }
    if (i == tuple.size()) break;
  }
  return true;
}

bool Encoder::verify() {
  for (const auto& c : clauses_.ground)
    if (!clause_holds(c, false)) return false;
  for (const auto& c : clauses_.quantified) {
    if (!clause_holds(c, false)) return false;
    if (!clause_holds(c, true)) return false;  // integer closure
  }
  return true;
}

FiniteModelFinder::Outcome Encoder::run() {
  build_domains();
  if (!encode()) return FiniteModelFinder::Outcome::GaveUp;
  if (encode_failed_) return FiniteModelFinder::Outcome::NoModelAtSize;
  while (true) {
    if (timed_out()) return FiniteModelFinder::Outcome::GaveUp;
    SatStatus status = sat_.solve(2'000'000);
    if (status == SatStatus::Unsat) return FiniteModelFinder::Outcome::NoModelAtSize;
    if (status == SatStatus::Budget) return FiniteModelFinder::Outcome::GaveUp;
    decode();
    if (verify()) return FiniteModelFinder::Outcome::Model;
    // The encoding admitted a spurious assignment (should not happen); block
    // nothing and give up rather than loop.
    return FiniteModelFinder::Outcome::GaveUp;
  }
}

}  // namespace

FiniteModelFinder::Outcome FiniteModelFinder::try_size(int size) {
  Encoder enc(st_, clauses_, size, deadline_);
  return enc.run();
}

}  // namespace smtlite
