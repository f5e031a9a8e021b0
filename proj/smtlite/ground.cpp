#include "ground.hpp"

#include <cstdio>
#include <cstdlib>
#include <sstream>

namespace smtlite {

namespace {
bool verbose_ground() {
  static bool v = std::getenv("SMTLITE_VERBOSE") != nullptr;
  return v;
}
}  // namespace

int GroundSolver::var_of(TermId atom) {
  if (auto it = atom_var_.find(atom); it != atom_var_.end()) return it->second;
  int v = sat_.new_var();
  atom_var_[atom] = v;
  var_atom_.push_back(atom);
  return v;
}

// Tracks the ground term universe and, for enumerated sorts, forces every
// term to equal one of the constructors.
void GroundSolver::register_term(TermId t) {
  if (!registered_.insert(t).second) return;
  const Term& term = st_.term(t);
  if (term.kind == Term::Kind::App || term.kind == Term::Kind::IntLit ||
      term.kind == Term::Kind::StrLit) {
    if (term.sort != st_.bool_sort() && universe_seen_.insert(t).second)
      universe_[term.sort].push_back(t);
    if (term.kind == Term::Kind::App) {
      for (size_t i = 0; i < term.args.size(); ++i) {
        std::ostringstream key;
        key << term.fun << '@' << i << ':' << term.args[i];
        if (filler_seen_.insert(key.str()).second)
          fillers_[{term.fun, static_cast<int>(i)}].push_back(term.args[i]);
        register_term(term.args[i]);
      }
      const SortInfo& sort = st_.sort(term.sort);
      if (sort.kind == SortKind::Datatype && !st_.fun(term.fun).is_constructor) {
        std::vector<Lit> domain;
        for (const auto& ctor : sort.constructors) {
          TermId c = st_.mk_app(*st_.find_fun(ctor), {});
          domain.push_back({false, st_.mk_eq(t, c)});
        }
        add_clause(domain);
      }
    }
  } else {
    for (TermId a : term.args) register_term(a);
  }
}

std::string GroundSolver::clause_key(const std::vector<Lit>& lits) const {
  std::vector<std::string> parts;
  for (const Lit& l : lits) parts.push_back((l.neg ? "-" : "+") + std::to_string(l.atom));
  std::sort(parts.begin(), parts.end());
  std::ostringstream out;
  for (const auto& p : parts) out << p << ' ';
  return out.str();
}

bool GroundSolver::knows_clause(const std::vector<Lit>& lits) const {
  return clause_keys_.count(clause_key(lits)) > 0;
}

void GroundSolver::add_clause(const std::vector<Lit>& lits) {
  if (!clause_keys_.insert(clause_key(lits)).second) return;
  std::vector<SatLit> sat_lits;
  for (const Lit& l : lits) {
    register_term(l.atom);
    int v = var_of(l.atom);
    sat_lits.push_back(l.neg ? neg_lit(v) : pos_lit(v));
  }
  sat_.add_clause(std::move(sat_lits));
}

GroundStatus GroundSolver::solve(long long conflict_budget, SolverClock::time_point deadline) {
  long long lemmas = 0;
  while (true) {
    if (SolverClock::now() >= deadline) return GroundStatus::Budget;
    SatStatus status = sat_.solve(conflict_budget);
    if (status == SatStatus::Unsat) return GroundStatus::Unsat;
    if (status == SatStatus::Budget) return GroundStatus::Budget;

    std::vector<GroundChecker::Asserted> assignment;
    assignment.reserve(var_atom_.size());
    for (int v = 0; v < static_cast<int>(var_atom_.size()); ++v)
      assignment.push_back({var_atom_[v], sat_.value(v), v});
    auto conflict = checker_.check(assignment);
    if (!conflict) return GroundStatus::Consistent;

    // Learn the negation of the conflicting literal set.
    std::vector<SatLit> lemma;
    for (int tag : *conflict)
      lemma.push_back(sat_.value(tag) ? neg_lit(tag) : pos_lit(tag));
    if (lemma.empty()) return GroundStatus::Unsat;  // theory-inconsistent facts
    ++lemmas;
    if (verbose_ground() && lemmas % 500 == 0)
      std::fprintf(stderr, "[smtlite] %lld theory lemmas (last size %zu over %zu atoms)\n",
                   lemmas, lemma.size(), var_atom_.size());
    sat_.add_clause(std::move(lemma));
  }
}

}  // namespace smtlite
