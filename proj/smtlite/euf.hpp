#pragma once

#include <optional>

#include "terms.hpp"

namespace smtlite {

// Ground consistency check for a set of asserted literals: congruence
// closure over uninterpreted functions, distinctness of integer / string
// literals and datatype constructors, Boolean predicate congruence, and
// integer comparisons against known values and bounds. On conflict, returns
// a (small) subset of the input tags sufficient for the inconsistency.
class GroundChecker {
public:
  struct Asserted {
    TermId atom = 0;
    bool value = true;
    int tag = 0;
  };

  explicit GroundChecker(const TermStore& store) : st_(store) {}

  // nullopt = consistent.
  std::optional<std::vector<int>> check(const std::vector<Asserted>& lits);

private:
  struct Reason {
    bool congruence = false;
    int tag = 0;        // literal tag when not congruence
    TermId a = 0, b = 0;  // the merged application terms when congruence
  };

  int node_of(TermId t);
  int find(int n);
  bool merge(int a, int b, const Reason& why);  // false on carrier conflict
  void explain(int a, int b, std::set<int>& tags, std::set<long long>& visited);
  void explain_terms(TermId a, TermId b, std::set<int>& tags, std::set<long long>& visited);

  const TermStore& st_;

  std::vector<TermId> node_term_;
  std::map<TermId, int> term_node_;
  int true_node_ = -1, false_node_ = -1;

  std::vector<int> uf_;
  std::vector<int> pf_parent_;        // proof forest
  std::vector<Reason> pf_reason_;
  std::vector<int> carrier_;          // node index of the class's value witness, or -1
  std::vector<std::vector<int>> uses_;  // application nodes touching this class
  std::map<std::string, int> signatures_;

  std::vector<std::pair<int, int>> pending_;  // congruent application pairs (node, node)
  std::vector<int> conflict_nodes_;          // set on carrier conflict: {x, y}
  std::optional<Reason> conflict_extra_;

  bool carriers_clash(int a, int b) const;
};

}  // namespace smtlite
