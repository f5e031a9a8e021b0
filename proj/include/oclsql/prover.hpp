#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "oclsql/datamodel.hpp"
#include "oclsql/msfol.hpp"
#include "oclsql/ocl_ast.hpp"
#include "oclsql/relational.hpp"
#include "oclsql/sql_ast.hpp"

// Assembles the three satisfiability problems whose joint unsatisfiability
// establishes that a select-statement implements an OCL Boolean constraint,
// drives an external SMT-LIB2 solver over them, and cross-checks verdicts
// against the built-in brute-force interpreters on bounded instances.

namespace oclsql::prover {

struct CorrectnessProblem {
  DataModel dm;
  rel::SqlSchema schema;
  ocl::ExprPtr expr;
  std::vector<ocl::ExprPtr> assumptions;
  sql::SelectPtr sel;
  std::vector<TypedVar> frees;

  void validate() const;  // exactly one select-item, frees cover both sides
};

enum class TheoryKind { C1, C2, C3 };

// C1: some instance makes the query return zero or more than one row.
// C2: some instance satisfies the constraint while some result row is not TRUE.
// C3: some instance has all result rows TRUE while the constraint is not true.
msfol::Theory build_theory(TheoryKind kind, const CorrectnessProblem& p);

// One uniqueness goal per scalar subselect, checked before C1-C3.
struct NamedTheory {
  std::string name;  // "OB1", ...
  std::string subject;
  msfol::Theory theory;
};
std::vector<NamedTheory> build_obligations(const CorrectnessProblem& p);

enum class SolverResult { Sat, Unsat, Unknown, Timeout };
const char* to_string(SolverResult r);

struct SolverConfig {
  std::string path;
  std::vector<std::string> args;
  int timeout_sec = 60;
};

// Writes nothing; reads the status token from the first line of stdout.
// Launch failures and unparseable output raise Error (a tool failure is
// never a verdict).
SolverResult check_file(const std::string& smt2_path, const SolverConfig& cfg);

// Emits the theory to `smt2_path` and checks it.
SolverResult check(const msfol::Theory& t, const SolverConfig& cfg,
                   const std::string& smt2_path);

struct Verdict {
  enum class Kind { Correct, Incorrect, Inconclusive } kind = Kind::Inconclusive;
  std::string witness;                 // first SAT theory when Incorrect
  std::vector<std::string> unknowns;   // UNKNOWN/TIMEOUT theories when Inconclusive
};

// SAT anywhere wins over UNKNOWN anywhere; Correct needs UNSAT everywhere.
// `results` must be in a deterministic order (obligations, then C1..C3).
Verdict decide(const std::vector<std::pair<std::string, SolverResult>>& results);

struct OracleReport {
  long long instances = 0;       // (object model, assignment) pairs examined
  long long discrepancies = 0;   // constraint truth vs single-TRUE-row mismatch
  long long row_count_witnesses = 0;   // executions with zero or >1 rows
  long long scalar_witnesses = 0;      // scalar subselects with zero or >1 rows
  std::vector<std::string> samples;    // a few printed discrepancy witnesses
};

// Exhaustive check of the correctness equivalence over all bounded instances
// and valid assignments whose assumptions all evaluate to true.
OracleReport cross_check(const CorrectnessProblem& p, const EnumerationBounds& bounds);

}  // namespace oclsql::prover
