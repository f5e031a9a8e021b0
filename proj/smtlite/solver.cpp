#include "solver.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "fmf.hpp"
#include "ground.hpp"

namespace smtlite {

namespace {

using Clock = std::chrono::steady_clock;

bool verbose() {
  static bool v = std::getenv("SMTLITE_VERBOSE") != nullptr;
  return v;
}

// Quantifier instantiation over the growing ground-term universe. Variables
// are preferentially filled with terms already seen at the same function
// positions ("relevant domains"); full per-sort universes are used when a
// round with relevant domains adds nothing new.
class Instantiator {
public:
  Instantiator(TermStore& st, ClauseSet& clauses, GroundSolver& ground)
      : st_(st), clauses_(clauses), ground_(ground) {}

  // Adds one round of instances; returns the number of new ground clauses.
  // Candidate terms are snapshotted up front so one round only explores one
  // level of newly created terms.
  long long round(bool relevant_only, long long budget, Clock::time_point deadline) {
    universe_snapshot_ = ground_.universe();
    fillers_snapshot_ = ground_.fillers();

    long long added = 0;
    for (size_t ci = 0; ci < clauses_.quantified.size(); ++ci) {
      if (Clock::now() >= deadline) break;
      const Clause& clause = clauses_.quantified[ci];
      std::vector<std::vector<TermId>> candidates;
      bool empty_domain = false;
      for (const auto& [name, sort] : clause.vars) {
        std::vector<TermId> domain =
            relevant_only ? relevant_domain(clause, name, sort) : sort_universe(sort);
        if (domain.empty()) {
          empty_domain = true;
          break;
        }
        candidates.push_back(std::move(domain));
      }
      if (empty_domain) continue;

      long long combinations = 1;
      for (const auto& d : candidates) {
        combinations *= static_cast<long long>(d.size());
        if (combinations > budget) break;
      }
      if (combinations > budget) continue;  // revisited next round with more focus

      std::vector<size_t> tuple(clause.vars.size(), 0);
      while (true) {
        std::ostringstream memo;
        memo << ci;
        for (size_t i = 0; i < tuple.size(); ++i) memo << ',' << candidates[i][tuple[i]];
        if (done_.insert(memo.str()).second) {
          std::map<std::string, TermId> binding;
          for (size_t i = 0; i < clause.vars.size(); ++i)
            binding[clause.vars[i].first] = candidates[i][tuple[i]];
          std::vector<Lit> lits;
          bool tautology = false;
          for (const Lit& l : clause.lits) {
            TermId atom = substitute(st_, l.atom, binding);
            const Term& a = st_.term(atom);
            if (a.kind == Term::Kind::True) {
              if (!l.neg) tautology = true;
              continue;
            }
            if (a.kind == Term::Kind::False) {
              if (l.neg) tautology = true;
              continue;
            }
            lits.push_back({l.neg, atom});
          }
          if (!tautology) {
            ground_.add_clause(lits);
            ++added;
          }
        }
        size_t i = 0;
        while (i < tuple.size()) {
          if (++tuple[i] < candidates[i].size()) break;
          tuple[i] = 0;
          ++i;
        }
        if (i == tuple.size() || tuple.empty()) break;
        if (Clock::now() >= deadline) break;
      }
    }
    return added;
  }

private:
  std::vector<TermId> sort_universe(SortId sort) {
    std::vector<TermId> out;
    auto it = universe_snapshot_.find(sort);
    if (it != universe_snapshot_.end()) out = it->second;
    // Datatype sorts always have their constructors available.
    const SortInfo& info = st_.sort(sort);
    if (info.kind == SortKind::Datatype) {
      for (const auto& c : info.constructors) {
        TermId t = st_.mk_app(*st_.find_fun(c), {});
        if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
      }
    }
    return out;
  }

  std::vector<TermId> relevant_domain(const Clause& clause, const std::string& var,
                                      SortId sort) {
    std::set<std::pair<int, int>> positions;
    for (const Lit& l : clause.lits) collect_positions(l.atom, var, positions);
    std::vector<TermId> out;
    std::set<TermId> seen;
    for (const auto& pos : positions) {
      auto it = fillers_snapshot_.find(pos);
      if (it == fillers_snapshot_.end()) continue;
      for (TermId t : it->second)
        if (seen.insert(t).second) out.push_back(t);
    }
    if (out.empty()) return sort_universe(sort);
    return out;
  }

  void collect_positions(TermId t, const std::string& var,
                         std::set<std::pair<int, int>>& out) {
    const Term& term = st_.term(t);
    if (term.kind == Term::Kind::App) {
      for (size_t i = 0; i < term.args.size(); ++i) {
        const Term& arg = st_.term(term.args[i]);
        if (arg.kind == Term::Kind::Var && arg.sym == var)
          out.insert({term.fun, static_cast<int>(i)});
        collect_positions(term.args[i], var, out);
      }
      return;
    }
    for (TermId a : term.args) collect_positions(a, var, out);
  }

  TermStore& st_;
  ClauseSet& clauses_;
  GroundSolver& ground_;
  std::set<std::string> done_;
  std::map<SortId, std::vector<TermId>> universe_snapshot_;
  std::map<std::pair<int, int>, std::vector<TermId>> fillers_snapshot_;
};

}  // namespace

Answer solve_script(const std::string& text, double timeout_seconds) {
  Problem problem = parse_script(text);
  const auto deadline =
      Clock::now() + std::chrono::milliseconds(static_cast<long long>(timeout_seconds * 1000));

  ClauseSet clauses = clausify(problem);
  if (verbose())
    std::fprintf(stderr, "[smtlite] %zu ground + %zu quantified clauses\n",
                 clauses.ground.size(), clauses.quantified.size());

  GroundSolver ground(problem.store);
  for (const auto& c : clauses.ground) ground.add_clause(c.lits);

  // An immediate check catches purely propositional refutations.
  if (verbose()) std::fprintf(stderr, "[smtlite] initial ground check\n");
  if (ground.solve(500'000, deadline) == GroundStatus::Unsat) return Answer::Unsat;
  if (verbose()) std::fprintf(stderr, "[smtlite] initial ground check done\n");
  if (clauses.quantified.empty()) {
    // Quantifier-free and no ground refutation: look for a concrete model.
    FiniteModelFinder fmf(problem.store, clauses, deadline);
    for (int size = 1; size <= 6; ++size) {
      if (Clock::now() >= deadline) return Answer::Unknown;
      if (fmf.try_size(size) == FiniteModelFinder::Outcome::Model) return Answer::Sat;
    }
    return Answer::Unknown;
  }

  Instantiator inst(problem.store, clauses, ground);

  // Interleave refutation rounds with model sizes, cheap attempts first.
  struct Step {
    enum class Kind { Instantiate, Model } kind;
    bool relevant = true;
    long long budget = 0;
    int size = 0;
  };
  const std::vector<Step> schedule = {
      {Step::Kind::Instantiate, true, 20'000, 0},  {Step::Kind::Instantiate, true, 20'000, 0},
      {Step::Kind::Model, false, 0, 1},            {Step::Kind::Instantiate, true, 50'000, 0},
      {Step::Kind::Model, false, 0, 2},            {Step::Kind::Instantiate, false, 50'000, 0},
      {Step::Kind::Instantiate, true, 200'000, 0}, {Step::Kind::Model, false, 0, 3},
      {Step::Kind::Instantiate, false, 200'000, 0}, {Step::Kind::Model, false, 0, 4},
      {Step::Kind::Instantiate, false, 500'000, 0}, {Step::Kind::Model, false, 0, 5},
  };

  for (const Step& step : schedule) {
    auto now = Clock::now();
    if (now >= deadline) return Answer::Unknown;
    // A stuck step must not starve the remaining phases: every step gets a
    // slice of the remaining time, never the whole budget.
    auto remaining = std::chrono::duration<double>(deadline - now).count();
    auto step_deadline =
        now + std::chrono::milliseconds(
                  static_cast<long long>(std::max(2.0, remaining * 0.3) * 1000));
    if (step_deadline > deadline) step_deadline = deadline;

    if (step.kind == Step::Kind::Instantiate) {
      long long added = inst.round(step.relevant, step.budget, step_deadline);
      GroundStatus status = ground.solve(1'000'000, step_deadline);
      if (verbose())
        std::fprintf(stderr, "[smtlite] instantiate(relevant=%d budget=%lld): +%lld -> %s\n",
                     step.relevant, step.budget, added,
                     status == GroundStatus::Unsat       ? "unsat"
                     : status == GroundStatus::Consistent ? "consistent"
                                                          : "budget");
      if (status == GroundStatus::Unsat) return Answer::Unsat;
    } else {
      FiniteModelFinder sliced(problem.store, clauses, step_deadline);
      auto outcome = sliced.try_size(step.size);
      if (verbose())
        std::fprintf(stderr, "[smtlite] model size %d: %s\n", step.size,
                     outcome == FiniteModelFinder::Outcome::Model ? "model"
                     : outcome == FiniteModelFinder::Outcome::NoModelAtSize ? "no-model"
                                                                            : "gave-up");
      if (outcome == FiniteModelFinder::Outcome::Model) return Answer::Sat;
    }
  }
  return Answer::Unknown;
}

}  // namespace smtlite
