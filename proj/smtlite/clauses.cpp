#include "clauses.hpp"

#include <algorithm>

namespace smtlite {

namespace {

struct Clausifier {
  TermStore& st;
  int skolem_counter = 0;
  int rename_counter = 0;

  // Negation normal form with polarity; eliminates Implies, Bool-equality
  // (iff) and Distinct. The result uses only And/Or/Forall/Exists over
  // literals.
  TermId nnf(TermId t, bool positive) {
    const Term& term = st.term(t);
    switch (term.kind) {
      case Term::Kind::True: return positive ? st.mk_true() : st.mk_false();
      case Term::Kind::False: return positive ? st.mk_false() : st.mk_true();
      case Term::Kind::Not: return nnf(term.args[0], !positive);
      case Term::Kind::And:
      case Term::Kind::Or: {
        bool is_and = (term.kind == Term::Kind::And) == positive;
        std::vector<TermId> parts;
        for (TermId a : term.args) parts.push_back(nnf(a, positive));
        return is_and ? st.mk_and(std::move(parts)) : st.mk_or(std::move(parts));
      }
      case Term::Kind::Implies: {
        TermId a = term.args[0], b = term.args[1];
        if (positive) return st.mk_or({nnf(a, false), nnf(b, true)});
        return st.mk_and({nnf(a, true), nnf(b, false)});
      }
      case Term::Kind::Eq: {
        if (st.term(term.args[0]).sort == st.bool_sort()) {
          TermId a = term.args[0], b = term.args[1];
          if (positive)
            return st.mk_and({st.mk_or({nnf(a, false), nnf(b, true)}),
                              st.mk_or({nnf(a, true), nnf(b, false)})});
          return st.mk_or({st.mk_and({nnf(a, true), nnf(b, false)}),
                           st.mk_and({nnf(a, false), nnf(b, true)})});
        }
        return positive ? t : st.mk_not(t);
      }
      case Term::Kind::Distinct: {
        std::vector<TermId> pairs;
        for (size_t i = 0; i < term.args.size(); ++i)
          for (size_t j = i + 1; j < term.args.size(); ++j)
            pairs.push_back(st.mk_eq(term.args[i], term.args[j]));
        // distinct == none of the pairwise equalities
        if (positive) {
          std::vector<TermId> negs;
          for (TermId p : pairs) negs.push_back(st.mk_not(p));
          return st.mk_and(std::move(negs));
        }
        return st.mk_or(std::move(pairs));
      }
      case Term::Kind::Forall:
      case Term::Kind::Exists: {
        bool is_forall = (term.kind == Term::Kind::Forall) == positive;
        TermId body = nnf(term.args[0], positive);
        return st.mk_quant(is_forall ? Term::Kind::Forall : Term::Kind::Exists, term.binders,
                           body);
      }
      default: return positive ? t : st.mk_not(t);
    }
  }

  // Replaces existentials by skolem functions of the enclosing universals and
  // renames every universal binder to a globally unique name.
  TermId skolemize(TermId t, std::map<std::string, TermId>& subst,
                   std::vector<std::pair<std::string, SortId>>& universals) {
    const Term& term = st.term(t);
    switch (term.kind) {
      case Term::Kind::And:
      case Term::Kind::Or: {
        std::vector<TermId> parts;
        for (TermId a : term.args) parts.push_back(skolemize(a, subst, universals));
        return term.kind == Term::Kind::And ? st.mk_and(std::move(parts))
                                            : st.mk_or(std::move(parts));
      }
      case Term::Kind::Forall: {
        std::vector<std::pair<std::string, TermId>> saved;
        std::vector<std::pair<std::string, SortId>> fresh;
        const size_t outer_universals = universals.size();
        for (const auto& [name, sort] : term.binders) {
          std::string unique = name + "!" + std::to_string(rename_counter++);
          saved.emplace_back(name, subst.count(name) ? subst[name] : -1);
          subst[name] = st.mk_var(unique, sort);
          fresh.emplace_back(unique, sort);
          universals.emplace_back(unique, sort);
        }
        TermId body = skolemize(term.args[0], subst, universals);
        universals.resize(outer_universals);  // out of scope for later siblings
        for (auto& [name, old] : saved) {
          if (old == -1)
            subst.erase(name);
          else
            subst[name] = old;
        }
        return st.mk_quant(Term::Kind::Forall, fresh, body);
      }
      case Term::Kind::Exists: {
        std::vector<std::pair<std::string, TermId>> saved;
        for (const auto& [name, sort] : term.binders) {
          std::vector<SortId> params;
          std::vector<TermId> args;
          for (const auto& [uname, usort] : universals) {
            params.push_back(usort);
            args.push_back(st.mk_var(uname, usort));
          }
          int sk = st.declare_fun("sk!" + std::to_string(skolem_counter++), params, sort);
          saved.emplace_back(name, subst.count(name) ? subst[name] : -1);
          subst[name] = st.mk_app(sk, args);
        }
        TermId body = skolemize(term.args[0], subst, universals);
        for (auto& [name, old] : saved) {
          if (old == -1)
            subst.erase(name);
          else
            subst[name] = old;
        }
        return body;
      }
      case Term::Kind::Not:
        return st.mk_not(skolemize(term.args[0], subst, universals));
      default: return substitute(st, t, subst);
    }
  }

  // Pulls the (uniquely named) universal binders to the front.
  TermId strip_foralls(TermId t, std::vector<std::pair<std::string, SortId>>& binders) {
    const Term& term = st.term(t);
    if (term.kind == Term::Kind::Forall) {
      for (const auto& b : term.binders) binders.push_back(b);
      return strip_foralls(term.args[0], binders);
    }
    if (term.kind == Term::Kind::And || term.kind == Term::Kind::Or) {
      std::vector<TermId> parts;
      for (TermId a : term.args) parts.push_back(strip_foralls(a, binders));
      return term.kind == Term::Kind::And ? st.mk_and(std::move(parts))
                                          : st.mk_or(std::move(parts));
    }
    return t;
  }

  // CNF by distribution, capped.
  static constexpr size_t kMaxClauses = 20000;

  void cnf(TermId t, std::vector<std::vector<Lit>>& out) {
    const Term& term = st.term(t);
    if (term.kind == Term::Kind::And) {
      for (TermId a : term.args) cnf(a, out);
      return;
    }
    std::vector<std::vector<Lit>> disjuncts{{}};
    build_or(t, disjuncts);
    for (auto& clause : disjuncts) {
      if (!clause.empty() || true) out.push_back(std::move(clause));
    }
    if (out.size() > kMaxClauses) die("clause explosion during CNF conversion");
  }

  // Expands t (an Or/literal/And tree) into the cartesian set of clauses.
  void build_or(TermId t, std::vector<std::vector<Lit>>& acc) {
    const Term& term = st.term(t);
    if (term.kind == Term::Kind::Or) {
      for (TermId a : term.args) build_or(a, acc);
      return;
    }
    if (term.kind == Term::Kind::And) {
      // (A ∧ B) inside a disjunction: duplicate the accumulated prefixes.
      std::vector<std::vector<std::vector<Lit>>> parts;
      std::vector<std::vector<Lit>> result;
      for (TermId a : term.args) {
        std::vector<std::vector<Lit>> sub = acc;
        build_or(a, sub);
        for (auto& clause : sub) result.push_back(std::move(clause));
        if (result.size() > kMaxClauses) die("clause explosion during CNF conversion");
      }
      acc = std::move(result);
      return;
    }
    // Literal: append to every accumulated clause.
    Lit lit;
    if (term.kind == Term::Kind::Not) {
      lit.neg = true;
      lit.atom = term.args[0];
    } else {
      lit.atom = t;
    }
    for (auto& clause : acc) clause.push_back(lit);
  }
};

void collect_vars(const TermStore& st, TermId t,
                  std::vector<std::pair<std::string, SortId>>& out,
                  std::set<std::string>& seen) {
  const Term& term = st.term(t);
  if (term.kind == Term::Kind::Var) {
    if (seen.insert(term.sym).second) out.emplace_back(term.sym, term.sort);
    return;
  }
  for (TermId a : term.args) collect_vars(st, a, out, seen);
}

}  // namespace

TermId substitute(TermStore& store, TermId t, const std::map<std::string, TermId>& binding) {
  const Term term = store.term(t);
  switch (term.kind) {
    case Term::Kind::Var: {
      auto it = binding.find(term.sym);
      return it == binding.end() ? t : it->second;
    }
    case Term::Kind::App: {
      std::vector<TermId> args;
      bool changed = false;
      for (TermId a : term.args) {
        TermId s = substitute(store, a, binding);
        changed |= s != a;
        args.push_back(s);
      }
      return changed ? store.mk_app(term.fun, std::move(args)) : t;
    }
    case Term::Kind::Eq: {
      TermId a = substitute(store, term.args[0], binding);
      TermId b = substitute(store, term.args[1], binding);
      return store.mk_eq(a, b);
    }
    case Term::Kind::Lt:
    case Term::Kind::Le:
    case Term::Kind::Gt:
    case Term::Kind::Ge: {
      TermId a = substitute(store, term.args[0], binding);
      TermId b = substitute(store, term.args[1], binding);
      return store.mk_cmp(term.kind, a, b);
    }
    case Term::Kind::Not: return store.mk_not(substitute(store, term.args[0], binding));
    case Term::Kind::And:
    case Term::Kind::Or: {
      std::vector<TermId> parts;
      for (TermId a : term.args) parts.push_back(substitute(store, a, binding));
      return term.kind == Term::Kind::And ? store.mk_and(std::move(parts))
                                          : store.mk_or(std::move(parts));
    }
    case Term::Kind::Implies:
      return store.mk_implies(substitute(store, term.args[0], binding),
                              substitute(store, term.args[1], binding));
    case Term::Kind::Forall:
    case Term::Kind::Exists: {
      // Binders shadow; all generated names are unique, so no capture.
      std::map<std::string, TermId> inner = binding;
      for (const auto& [name, sort] : term.binders) inner.erase(name);
      return store.mk_quant(term.kind, term.binders,
                            substitute(store, term.args[0], inner));
    }
    default: return t;
  }
}

ClauseSet clausify(Problem& p) {
  ClauseSet out;
  Clausifier cl{p.store};
  for (TermId assertion : p.assertions) {
    TermId n = cl.nnf(assertion, true);
    std::map<std::string, TermId> subst;
    std::vector<std::pair<std::string, SortId>> universals;
    TermId sk = cl.skolemize(n, subst, universals);
    std::vector<std::pair<std::string, SortId>> binders;
    TermId matrix = cl.strip_foralls(sk, binders);

    std::vector<std::vector<Lit>> clauses;
    cl.cnf(matrix, clauses);
    for (auto& lits : clauses) {
      // The matrix may contain constant literals after simplification.
      bool satisfied = false;
      std::vector<Lit> kept;
      for (const Lit& l : lits) {
        const Term& a = p.store.term(l.atom);
        if (a.kind == Term::Kind::True) {
          if (!l.neg) satisfied = true;
          continue;
        }
        if (a.kind == Term::Kind::False) {
          if (l.neg) satisfied = true;
          continue;
        }
        kept.push_back(l);
      }
      if (satisfied) continue;
      Clause clause;
      clause.lits = std::move(kept);
      std::set<std::string> seen;
      for (const Lit& l : clause.lits) collect_vars(p.store, l.atom, clause.vars, seen);
      if (clause.vars.empty())
        out.ground.push_back(std::move(clause));
      else
        out.quantified.push_back(std::move(clause));
    }
  }
  return out;
}

}  // namespace smtlite
