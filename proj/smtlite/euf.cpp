#include "euf.hpp"

#include <algorithm>
#include <sstream>

namespace smtlite {

namespace {

// Special pseudo-terms for the Boolean constants inside the closure.
constexpr TermId kTrueTerm = -1;
constexpr TermId kFalseTerm = -2;

}  // namespace

int GroundChecker::node_of(TermId t) {
  if (auto it = term_node_.find(t); it != term_node_.end()) return it->second;
  int n = static_cast<int>(node_term_.size());
  node_term_.push_back(t);
  term_node_[t] = n;
  uf_.push_back(n);
  pf_parent_.push_back(-1);
  pf_reason_.push_back({});
  uses_.emplace_back();
  // Value witnesses: literals and nullary datatype constructors.
  bool is_carrier = false;
  if (t >= 0) {
    const Term& term = st_.term(t);
    is_carrier = term.kind == Term::Kind::IntLit || term.kind == Term::Kind::StrLit ||
                 (term.kind == Term::Kind::App && term.fun >= 0 &&
                  st_.fun(term.fun).is_constructor);
    // Register subterms and use-lists.
    if (term.kind == Term::Kind::App) {
      for (TermId a : term.args) {
        int an = node_of(a);
        uses_[find(an)].push_back(n);
      }
    }
  } else {
    is_carrier = true;
  }
  carrier_.push_back(is_carrier ? n : -1);
  return n;
}

int GroundChecker::find(int n) {
  while (uf_[n] != n) {
    uf_[n] = uf_[uf_[n]];
    n = uf_[n];
  }
  return n;
}

bool GroundChecker::carriers_clash(int a, int b) const {
  TermId ta = node_term_[a], tb = node_term_[b];
  if (ta < 0 || tb < 0) return ta != tb;  // true vs false
  const Term& x = st_.term(ta);
  const Term& y = st_.term(tb);
  if (x.kind == Term::Kind::IntLit && y.kind == Term::Kind::IntLit)
    return x.int_value != y.int_value;
  if (x.kind == Term::Kind::StrLit && y.kind == Term::Kind::StrLit) return x.sym != y.sym;
  if (x.kind == Term::Kind::App && y.kind == Term::Kind::App) return x.fun != y.fun;
  return true;  // an int literal can never equal a string literal etc.
}

bool GroundChecker::merge(int a, int b, const Reason& why) {
  int ra = find(a), rb = find(b);
  if (ra == rb) return true;

  // Proof forest: make `a` the root of its tree, then hang it under `b`.
  {
    int prev = -1;
    Reason prev_reason{};
    int cur = a;
    while (cur != -1) {
      int next = pf_parent_[cur];
      Reason next_reason = pf_reason_[cur];
      pf_parent_[cur] = prev;
      pf_reason_[cur] = prev_reason;
      prev = cur;
      prev_reason = next_reason;
      cur = next;
    }
    pf_parent_[a] = b;
    pf_reason_[a] = why;
  }

  // Carrier conflict?
  if (carrier_[ra] != -1 && carrier_[rb] != -1 && carriers_clash(carrier_[ra], carrier_[rb])) {
    conflict_nodes_ = {carrier_[ra], carrier_[rb]};
    // Union anyway so explain() can walk the combined class.
    uf_[ra] = rb;
    return false;
  }

  int winner_carrier = carrier_[ra] != -1 ? carrier_[ra] : carrier_[rb];
  // Congruence: any application whose argument class changed may now collide.
  std::vector<int> moved_uses = uses_[ra];
  uf_[ra] = rb;
  carrier_[rb] = winner_carrier;
  for (int app_node : moved_uses) {
    uses_[rb].push_back(app_node);
    const Term& app = st_.term(node_term_[app_node]);
    std::ostringstream sig;
    sig << app.fun;
    for (TermId arg : app.args) sig << ',' << find(node_of(arg));
    auto [it, inserted] = signatures_.try_emplace(sig.str(), app_node);
    if (!inserted && find(it->second) != find(app_node))
      pending_.emplace_back(it->second, app_node);
  }
  return true;
}

void GroundChecker::explain_terms(TermId a, TermId b, std::set<int>& tags,
                                  std::set<long long>& visited) {
  explain(term_node_.at(a), term_node_.at(b), tags, visited);
}

void GroundChecker::explain(int a, int b, std::set<int>& tags, std::set<long long>& visited) {
  if (a == b) return;
  long long key = (static_cast<long long>(std::min(a, b)) << 24) | std::max(a, b);
  if (!visited.insert(key).second) return;

  // Common-ancestor walk in the proof forest.
  std::map<int, int> a_path;  // node -> distance
  for (int cur = a, d = 0; cur != -1; cur = pf_parent_[cur]) a_path[cur] = d++;
  int lca = -1;
  for (int cur = b; cur != -1; cur = pf_parent_[cur]) {
    if (a_path.count(cur)) {
      lca = cur;
      break;
    }
  }
  if (lca == -1) return;  // different trees: nothing to explain (merged via union only)

  auto walk = [&](int from) {
    for (int cur = from; cur != lca; cur = pf_parent_[cur]) {
      const Reason& r = pf_reason_[cur];
      if (r.congruence) {
        const Term& x = st_.term(r.a);
        const Term& y = st_.term(r.b);
        for (size_t i = 0; i < x.args.size(); ++i)
          explain_terms(x.args[i], y.args[i], tags, visited);
      } else {
        tags.insert(r.tag);
      }
    }
  };
  walk(a);
  walk(b);
}

std::optional<std::vector<int>> GroundChecker::check(const std::vector<Asserted>& lits) {
  node_term_.clear();
  term_node_.clear();
  uf_.clear();
  pf_parent_.clear();
  pf_reason_.clear();
  carrier_.clear();
  uses_.clear();
  signatures_.clear();
  pending_.clear();
  conflict_nodes_.clear();

  true_node_ = node_of(kTrueTerm);
  false_node_ = node_of(kFalseTerm);

  struct Diseq {
    int tag;
    TermId a, b;
  };
  struct Cmp {
    int tag;
    Term::Kind kind;
    bool value;
    TermId a, b;
  };
  std::vector<Diseq> diseqs;
  std::vector<Cmp> cmps;

  auto conflict_from = [&](std::set<int> tags) {
    return std::optional<std::vector<int>>(std::vector<int>(tags.begin(), tags.end()));
  };

  auto run_congruence = [&](const Reason& last_reason) -> std::optional<std::vector<int>> {
    while (!pending_.empty()) {
      auto [x, y] = pending_.back();
      pending_.pop_back();
      Reason r;
      r.congruence = true;
      r.a = node_term_[x];
      r.b = node_term_[y];
      if (!merge(x, y, r)) {
        std::set<int> tags;
        std::set<long long> visited;
        explain(conflict_nodes_[0], conflict_nodes_[1], tags, visited);
        return conflict_from(std::move(tags));
      }
    }
    (void)last_reason;
    return std::nullopt;
  };

  // Seed signatures so congruent applications in the input collide.
  auto register_sig = [&](TermId t) {
    std::vector<TermId> stack{t};
    while (!stack.empty()) {
      TermId cur = stack.back();
      stack.pop_back();
      const Term& term = st_.term(cur);
      int n = node_of(cur);
      if (term.kind == Term::Kind::App && !term.args.empty()) {
        std::ostringstream sig;
        sig << term.fun;
        for (TermId arg : term.args) {
          sig << ',' << find(node_of(arg));
          stack.push_back(arg);
        }
        auto [it, inserted] = signatures_.try_emplace(sig.str(), n);
        if (!inserted && find(it->second) != find(n)) pending_.emplace_back(it->second, n);
      }
    }
  };

  for (const auto& l : lits) {
    const Term& atom = st_.term(l.atom);
    switch (atom.kind) {
      case Term::Kind::App: {
        register_sig(l.atom);
        Reason r;
        r.tag = l.tag;
        if (!merge(node_of(l.atom), l.value ? true_node_ : false_node_, r)) {
          std::set<int> tags{l.tag};
          std::set<long long> visited;
          explain(conflict_nodes_[0], conflict_nodes_[1], tags, visited);
          return conflict_from(std::move(tags));
        }
        if (auto c = run_congruence(r)) return c;
        break;
      }
      case Term::Kind::Eq: {
        register_sig(atom.args[0]);
        register_sig(atom.args[1]);
        if (l.value) {
          Reason r;
          r.tag = l.tag;
          if (!merge(node_of(atom.args[0]), node_of(atom.args[1]), r)) {
            std::set<int> tags{l.tag};
            std::set<long long> visited;
            explain(conflict_nodes_[0], conflict_nodes_[1], tags, visited);
            return conflict_from(std::move(tags));
          }
          if (auto c = run_congruence(r)) return c;
        } else {
          diseqs.push_back({l.tag, atom.args[0], atom.args[1]});
        }
        break;
      }
      case Term::Kind::Lt:
      case Term::Kind::Le:
      case Term::Kind::Gt:
      case Term::Kind::Ge:
        register_sig(atom.args[0]);
        register_sig(atom.args[1]);
        cmps.push_back({l.tag, atom.kind, l.value, atom.args[0], atom.args[1]});
        break;
      default: die("unsupported ground atom");
    }
  }

  // Applications registered while collecting disequalities and comparisons
  // may have created congruent pairs of their own.
  if (auto c = run_congruence(Reason{})) return c;

  // Disequalities.
  for (const auto& d : diseqs) {
    if (find(node_of(d.a)) == find(node_of(d.b))) {
      std::set<int> tags{d.tag};
      std::set<long long> visited;
      explain(node_of(d.a), node_of(d.b), tags, visited);
      return conflict_from(std::move(tags));
    }
  }

  // Integer comparisons: evaluate when both sides have known values, bound
  // against literals otherwise.
  auto value_of = [&](TermId t) -> std::optional<std::pair<long long, int>> {
    int root = find(node_of(t));
    int c = carrier_[root];
    if (c == -1) return std::nullopt;
    TermId ct = node_term_[c];
    if (ct < 0) return std::nullopt;
    const Term& term = st_.term(ct);
    if (term.kind != Term::Kind::IntLit) return std::nullopt;
    return std::make_pair(term.int_value, c);
  };

  struct Bound {
    bool has = false;
    long long val = 0;
    bool strict = false;
    int tag = 0;
    TermId subject = 0;  // the non-constant side
    TermId lit_side = 0; // the constant side
  };
  std::map<int, Bound> lower, upper;

  for (const auto& c : cmps) {
    // Normalize to a <= / < relation under the asserted polarity.
    Term::Kind k = c.kind;
    TermId a = c.a, b = c.b;
    bool value = c.value;
    if (k == Term::Kind::Gt) {
      std::swap(a, b);
      k = Term::Kind::Lt;
    } else if (k == Term::Kind::Ge) {
      std::swap(a, b);
      k = Term::Kind::Le;
    }
    if (!value) {
      // not(a < b)  ==  b <= a ; not(a <= b)  ==  b < a
      std::swap(a, b);
      k = k == Term::Kind::Lt ? Term::Kind::Le : Term::Kind::Lt;
    }
    const bool strict = k == Term::Kind::Lt;

    auto va = value_of(a);
    auto vb = value_of(b);
    if (va && vb) {
      bool holds = strict ? va->first < vb->first : va->first <= vb->first;
      if (!holds) {
        std::set<int> tags{c.tag};
        std::set<long long> visited;
        explain(node_of(a), va->second, tags, visited);
        explain(node_of(b), vb->second, tags, visited);
        return conflict_from(std::move(tags));
      }
      continue;
    }
    if (vb) {  // a <(=) const: upper bound on a's class
      int root = find(node_of(a));
      long long bound = vb->first;
      Bound candidate{true, bound, strict, c.tag, a, b};
      Bound& existing = upper[root];
      if (!existing.has || candidate.val < existing.val ||
          (candidate.val == existing.val && candidate.strict && !existing.strict))
        existing = candidate;
    } else if (va) {  // const <(=) b: lower bound on b's class
      int root = find(node_of(b));
      Bound candidate{true, va->first, strict, c.tag, b, a};
      Bound& existing = lower[root];
      if (!existing.has || candidate.val > existing.val ||
          (candidate.val == existing.val && candidate.strict && !existing.strict))
        existing = candidate;
    }
    // Comparisons between two unknown classes are left to the model search.
  }

  for (const auto& [root, lo] : lower) {
    auto it = upper.find(root);
    if (it == upper.end()) continue;
    const Bound& hi = it->second;
    bool conflict = lo.val > hi.val || (lo.val == hi.val && (lo.strict || hi.strict));
    if (conflict) {
      std::set<int> tags{lo.tag, hi.tag};
      std::set<long long> visited;
      explain(node_of(lo.subject), node_of(hi.subject), tags, visited);
      auto vlo = value_of(lo.lit_side);
      auto vhi = value_of(hi.lit_side);
      if (vlo) explain(node_of(lo.lit_side), vlo->second, tags, visited);
      if (vhi) explain(node_of(hi.lit_side), vhi->second, tags, visited);
      return conflict_from(std::move(tags));
    }
  }
  // A known value outside the bounds is also inconsistent.
  auto check_value_bounds = [&](const std::map<int, Bound>& bounds,
                                bool is_lower) -> std::optional<std::vector<int>> {
    for (const auto& [root, bound] : bounds) {
      int c = carrier_[find(root)];
      if (c == -1 || node_term_[c] < 0) continue;
      const Term& term = st_.term(node_term_[c]);
      if (term.kind != Term::Kind::IntLit) continue;
      long long v = term.int_value;
      bool bad = is_lower ? (bound.val > v || (bound.val == v && bound.strict))
                          : (bound.val < v || (bound.val == v && bound.strict));
      if (bad) {
        std::set<int> tags{bound.tag};
        std::set<long long> visited;
        explain(node_of(bound.subject), c, tags, visited);
        auto vl = value_of(bound.lit_side);
        if (vl) explain(node_of(bound.lit_side), vl->second, tags, visited);
        return conflict_from(std::move(tags));
      }
    }
    return std::nullopt;
  };
  if (auto c = check_value_bounds(lower, true)) return c;
  if (auto c = check_value_bounds(upper, false)) return c;

  return std::nullopt;
}

}  // namespace smtlite
