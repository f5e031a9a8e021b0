#pragma once

#include <chrono>

#include "clauses.hpp"
#include "sat.hpp"

namespace smtlite {

// Finite model search: fixes small domains per sort (integers are drawn from
// the script's literals plus padding), encodes function tables as one-hot
// selector variables, grounds every clause, and SAT-solves. A model is
// reported only after an independent evaluation of all clauses over the
// decoded tables, including a closure check that the model extends to the
// unbounded integer domain.
class FiniteModelFinder {
public:
  FiniteModelFinder(TermStore& store, const ClauseSet& clauses,
                    std::chrono::steady_clock::time_point deadline)
      : st_(store), clauses_(clauses), deadline_(deadline) {}

  enum class Outcome { Model, NoModelAtSize, GaveUp };
  Outcome try_size(int size);

private:
  TermStore& st_;
  const ClauseSet& clauses_;
  std::chrono::steady_clock::time_point deadline_;
};

}  // namespace smtlite
