#include "sat.hpp"

#include <algorithm>
#include <cmath>

namespace smtlite {

int SatSolver::new_var() {
  assign_.push_back(-1);
  level_.push_back(0);
  reason_.push_back(-1);
  activity_.push_back(0);
  seen_.push_back(0);
  watches_.emplace_back();
  watches_.emplace_back();
  return var_count() - 1;
}

bool SatSolver::add_clause(std::vector<SatLit> lits) {
  if (unsat_) return false;
  // Clauses may arrive mid-search (theory lemmas); watch invariants and the
  // simplification below assume level 0.
  backtrack(0);
  // Level-0 simplification: drop false literals, detect satisfied clauses,
  // remove duplicates and tautologies.
  std::sort(lits.begin(), lits.end());
  lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
  std::vector<SatLit> kept;
  for (SatLit l : lits) {
    if (std::binary_search(lits.begin(), lits.end(), lit_negate(l)) && lit_negate(l) > l)
      return true;  // tautology
    int8_t v = lit_value(l);
    if (v == 1 && level_of(lit_var(l)) == 0) return true;
    if (v == 0 && level_of(lit_var(l)) == 0) continue;
    kept.push_back(l);
  }
  if (kept.empty()) {
    unsat_ = true;
    return false;
  }
  if (kept.size() == 1) {
    if (lit_value(kept[0]) == 0) {
      unsat_ = true;
      return false;
    }
    if (lit_value(kept[0]) == -1) {
      enqueue(kept[0], -1);
      if (propagate() != -1) {
        unsat_ = true;
        return false;
      }
    }
    return true;
  }
  clauses_.push_back({std::move(kept), 0, false});
  int ci = static_cast<int>(clauses_.size() - 1);
  watches_[clauses_[ci].lits[0]].push_back(ci);
  watches_[clauses_[ci].lits[1]].push_back(ci);
  return true;
}

bool SatSolver::enqueue(SatLit l, int reason) {
  int v = lit_var(l);
  if (assign_[v] != -1) return lit_value(l) == 1;
  assign_[v] = lit_sign(l) ? 0 : 1;
  level_[v] = trail_lim_.empty() ? 0 : static_cast<int>(trail_lim_.size());
  reason_[v] = reason;
  trail_.push_back(l);
  return true;
}

int SatSolver::propagate() {
  while (qhead_ < trail_.size()) {
    SatLit l = trail_[qhead_++];
    SatLit falsified = lit_negate(l);
    std::vector<int>& watch_list = watches_[falsified];
    std::vector<int> keep;
    keep.reserve(watch_list.size());
    for (size_t wi = 0; wi < watch_list.size(); ++wi) {
      int ci = watch_list[wi];
      Clause& c = clauses_[ci];
      // Normalize: watched literals are lits[0], lits[1].
      if (c.lits[0] == falsified) std::swap(c.lits[0], c.lits[1]);
      if (lit_value(c.lits[0]) == 1) {
        keep.push_back(ci);
        continue;
      }
      bool moved = false;
      for (size_t k = 2; k < c.lits.size(); ++k) {
        if (lit_value(c.lits[k]) != 0) {
          std::swap(c.lits[1], c.lits[k]);
          watches_[c.lits[1]].push_back(ci);
          moved = true;
          break;
        }
      }
      if (moved) continue;
      keep.push_back(ci);
      if (lit_value(c.lits[0]) == 0) {
        // Conflict: restore remaining watches.
        for (size_t rest = wi + 1; rest < watch_list.size(); ++rest)
          keep.push_back(watch_list[rest]);
        watch_list = std::move(keep);
        qhead_ = trail_.size();
        return ci;
      }
      enqueue(c.lits[0], ci);
    }
    watch_list = std::move(keep);
  }
  return -1;
}

void SatSolver::analyze(int conflict, std::vector<SatLit>& learnt, int& backtrack_level) {
  learnt.clear();
  learnt.push_back(0);  // slot for the asserting literal
  int counter = 0;
  SatLit p = -1;
  int index = static_cast<int>(trail_.size()) - 1;
  int current_level = static_cast<int>(trail_lim_.size());
  int ci = conflict;

  do {
    Clause& c = clauses_[ci];
    c.activity += 1.0;
    for (SatLit q : c.lits) {
      if (q == p) continue;
      int v = lit_var(q);
      if (!seen_[v] && level_[v] > 0) {
        seen_[v] = 1;
        bump_var(v);
        if (level_[v] >= current_level)
          ++counter;
        else
          learnt.push_back(q);
      }
    }
    while (!seen_[lit_var(trail_[index])]) --index;
    p = trail_[index];
    ci = reason_[lit_var(p)];
    seen_[lit_var(p)] = 0;
    --counter;
  } while (counter > 0);
  learnt[0] = lit_negate(p);

  backtrack_level = 0;
  if (learnt.size() > 1) {
    size_t max_i = 1;
    for (size_t i = 2; i < learnt.size(); ++i)
      if (level_[lit_var(learnt[i])] > level_[lit_var(learnt[max_i])]) max_i = i;
    std::swap(learnt[1], learnt[max_i]);
    backtrack_level = level_[lit_var(learnt[1])];
  }
  for (SatLit l : learnt) seen_[lit_var(l)] = 0;
}

void SatSolver::backtrack(int target) {
  while (static_cast<int>(trail_lim_.size()) > target) {
    size_t lim = trail_lim_.back();
    trail_lim_.pop_back();
    while (trail_.size() > lim) {
      int v = lit_var(trail_.back());
      assign_[v] = -1;
      reason_[v] = -1;
      trail_.pop_back();
    }
  }
  qhead_ = std::min(qhead_, trail_.size());
}

SatLit SatSolver::pick_branch() {
  int best = -1;
  double best_act = -1;
  for (int v = 0; v < var_count(); ++v) {
    if (assign_[v] == -1 && activity_[v] > best_act) {
      best = v;
      best_act = activity_[v];
    }
  }
  if (best == -1) return -1;
  return neg_lit(best);  // negative phase first: sparse models
}

void SatSolver::bump_var(int var) {
  activity_[var] += var_inc_;
  if (activity_[var] > 1e100) {
    for (double& a : activity_) a *= 1e-100;
    var_inc_ *= 1e-100;
  }
}

void SatSolver::decay() { var_inc_ *= 1.0 / 0.95; }

SatStatus SatSolver::solve(long long conflict_budget) {
  if (unsat_) return SatStatus::Unsat;
  backtrack(0);
  if (propagate() != -1) {
    unsat_ = true;
    return SatStatus::Unsat;
  }
  long long conflicts = 0;
  long long restart_limit = 100;
  long long restart_conflicts = 0;

  while (true) {
    int conflict = propagate();
    if (conflict != -1) {
      ++conflicts;
      ++restart_conflicts;
      if (trail_lim_.empty()) {
        unsat_ = true;
        return SatStatus::Unsat;
      }
      if (conflict_budget >= 0 && conflicts > conflict_budget) return SatStatus::Budget;
      std::vector<SatLit> learnt;
      int bt = 0;
      analyze(conflict, learnt, bt);
      backtrack(bt);
      if (learnt.size() == 1) {
        if (!enqueue(learnt[0], -1)) {
          unsat_ = true;
          return SatStatus::Unsat;
        }
      } else {
        clauses_.push_back({learnt, 1.0, true});
        int ci = static_cast<int>(clauses_.size() - 1);
        watches_[learnt[0]].push_back(ci);
        watches_[learnt[1]].push_back(ci);
        enqueue(learnt[0], ci);
      }
      decay();
      if (restart_conflicts >= restart_limit) {
        restart_conflicts = 0;
        restart_limit = static_cast<long long>(restart_limit * 1.3);
        backtrack(0);
      }
      continue;
    }
    SatLit next = pick_branch();
    if (next == -1) return SatStatus::Sat;
    trail_lim_.push_back(trail_.size());
    enqueue(next, -1);
  }
}

}  // namespace smtlite
