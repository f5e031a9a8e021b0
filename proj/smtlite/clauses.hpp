#pragma once

#include "terms.hpp"

namespace smtlite {

// A literal over a (possibly open) atom term.
struct Lit {
  bool neg = false;
  TermId atom = 0;
};

// A universally quantified clause; ground when vars is empty. Variables
// occur as Term::Kind::Var nodes inside the atoms.
struct Clause {
  std::vector<std::pair<std::string, SortId>> vars;
  std::vector<Lit> lits;
};

struct ClauseSet {
  std::vector<Clause> ground;
  std::vector<Clause> quantified;
};

// NNF + skolemization + prenexing + CNF distribution. Fails (die) when the
// distribution exceeds a safety cap.
ClauseSet clausify(Problem& p);

// Capture-free substitution of variables by ground terms.
TermId substitute(TermStore& store, TermId t,
                  const std::map<std::string, TermId>& binding);

}  // namespace smtlite
