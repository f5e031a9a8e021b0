#pragma once

#include <chrono>

#include "clauses.hpp"
#include "euf.hpp"
#include "sat.hpp"

namespace smtlite {

enum class GroundStatus { Unsat, Consistent, Budget };

using SolverClock = std::chrono::steady_clock;

// Lazy SMT over ground clauses: a propositional core plus congruence/integer
// checks that refute spurious models with learned lemmas. Never claims
// satisfiability of the underlying theory; `Consistent` only means no ground
// refutation was found.
class GroundSolver {
public:
  explicit GroundSolver(TermStore& store) : st_(store), checker_(store) {}

  void add_clause(const std::vector<Lit>& lits);
  bool knows_clause(const std::vector<Lit>& lits) const;

  GroundStatus solve(long long conflict_budget, SolverClock::time_point deadline);

  // Ground terms seen so far, per sort, in first-appearance order.
  const std::map<SortId, std::vector<TermId>>& universe() const { return universe_; }
  // Ground argument fillers seen at (function, position).
  const std::map<std::pair<int, int>, std::vector<TermId>>& fillers() const {
    return fillers_;
  }

private:
  int var_of(TermId atom);
  void register_term(TermId t);
  std::string clause_key(const std::vector<Lit>& lits) const;

  TermStore& st_;
  SatSolver sat_;
  GroundChecker checker_;
  std::map<TermId, int> atom_var_;
  std::vector<TermId> var_atom_;
  std::set<std::string> clause_keys_;
  std::set<TermId> registered_;
  std::map<SortId, std::vector<TermId>> universe_;
  std::set<TermId> universe_seen_;
  std::map<std::pair<int, int>, std::vector<TermId>> fillers_;
  std::set<std::string> filler_seen_;
};

}  // namespace smtlite
