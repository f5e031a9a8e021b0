#pragma once

#include <chrono>
#include <cstdint>
#include <vector>

// Conflict-driven clause learning SAT core with two-watched literals,
// first-UIP learning, activity-based decisions and geometric restarts.

namespace smtlite {

// Literals are 2*var (positive) or 2*var+1 (negative).
using SatLit = int;
inline SatLit pos_lit(int var) { return 2 * var; }
inline SatLit neg_lit(int var) { return 2 * var + 1; }
inline int lit_var(SatLit l) { return l >> 1; }
inline bool lit_sign(SatLit l) { return l & 1; }  // true = negated
inline SatLit lit_negate(SatLit l) { return l ^ 1; }

enum class SatStatus { Sat, Unsat, Budget };

class SatSolver {
public:
  int new_var();
  int var_count() const { return static_cast<int>(assign_.size()); }

  // Returns false if the clause is immediately contradictory at level 0.
  bool add_clause(std::vector<SatLit> lits);

  SatStatus solve(long long conflict_budget = -1);

  // Valid after Sat: value of each variable.
  bool value(int var) const { return assign_[var] == 1; }

private:
  struct Clause {
    std::vector<SatLit> lits;
    double activity = 0;
    bool learnt = false;
  };

  bool enqueue(SatLit l, int reason);
  int propagate();  // returns conflicting clause index or -1
  void analyze(int conflict, std::vector<SatLit>& learnt, int& backtrack_level);
  void backtrack(int level);
  SatLit pick_branch();
  void bump_var(int var);
  void decay();

  int level_of(int var) const { return level_[var]; }
  int8_t lit_value(SatLit l) const {
    int8_t v = assign_[lit_var(l)];
    if (v == -1) return -1;
    return lit_sign(l) ? static_cast<int8_t>(1 - v) : v;
  }

  std::vector<Clause> clauses_;
  std::vector<std::vector<int>> watches_;  // per literal: clause indices
  std::vector<int8_t> assign_;             // -1 unknown, 0 false, 1 true
  std::vector<int> level_;
  std::vector<int> reason_;  // clause index or -1
  std::vector<SatLit> trail_;
  std::vector<int> trail_lim_;
  size_t qhead_ = 0;
  std::vector<double> activity_;
  double var_inc_ = 1.0;
  std::vector<int8_t> seen_;
  bool unsat_ = false;
};

}  // namespace smtlite
