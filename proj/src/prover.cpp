#include "oclsql/prover.hpp"

#include <fcntl.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstring>
#include <fstream>
#include <memory>
#include <set>
#include <sstream>
#include <thread>

#include "oclsql/ocl2msfol.hpp"
#include "oclsql/ocl_eval.hpp"
#include "oclsql/sql2msfol.hpp"
#include "oclsql/sql_exec.hpp"

namespace oclsql::prover {

namespace mk = msfol::mk;
using msfol::Sort;
using msfol::TermPtr;
using msfol::Theory;

void CorrectnessProblem::validate() const {
  if (!expr || !sel) fail("problem", "missing constraint or statement");
  if (sel->items.size() != 1)
    fail("problem", "the select-statement must have exactly one select-item");
  std::set<std::string> declared;
  for (const auto& v : frees) declared.insert(v.name);
  for (const auto& name : ocl::free_vars(expr))
    if (!declared.count(name)) fail("problem", "undeclared constraint variable '" + name + "'");
  for (const auto& a : assumptions)
    for (const auto& name : ocl::free_vars(a))
      if (!declared.count(name)) fail("problem", "undeclared assumption variable '" + name + "'");
  for (const auto& name : sql::statement_vars(sel))
    if (!declared.count(name)) fail("problem", "undeclared statement variable '" + name + "'");
}

namespace {

struct Assembled {
  Theory base;  // everything except the kind-specific parts
  o2f::FreeDecls frees;
  s2f::Output s2f;
  std::unique_ptr<o2f::Translator> translator;
};

// Shared base of all satisfiability problems: the data-model theory, the
// free-variable constants, the assumptions (translated as true), and the
// SQL index/val axioms of the statement. The translator is returned so the
// caller can add the constraint's formulas; its accumulated definitions are
// merged last, covering both the assumptions and the constraint.
Assembled assemble_base(const CorrectnessProblem& p) {
  Assembled out;
  out.frees = o2f::declare_frees(p.frees, p.dm);
  out.s2f = s2f::s2f_select(p.sel, p.dm, p.schema, out.frees);
  out.translator = std::make_unique<o2f::Translator>(p.dm, out.frees);

  Theory base = o2f::o2f_data(p.dm);
  base = msfol::theory_union(base, out.frees.theory);
  base = msfol::theory_union(base, out.s2f.schema_axioms);
  base = msfol::theory_union(base, out.s2f.select_axioms);

  Theory assumption_axioms;
  for (const auto& a : p.assumptions)
    assumption_axioms.add_axiom(out.translator->o2f_true(a), "assumption " + ocl::print(a));
  out.base = msfol::theory_union(base, assumption_axioms);
  return out;
}

TermPtr all_rows_true(const s2f::Output& s2f_out) {
  if (s2f_out.top_item_sort != Sort::SqlBool)
    fail("theory", "the select-item is not Boolean-valued");
  TermPtr x = mk::bound("x", Sort::Int);
  return mk::forall(
      {{"x", Sort::Int}},
      mk::implies(mk::app(s2f_out.top_index, {Sort::Int}, Sort::Bool, {x}),
                  mk::eq(mk::app(s2f_out.top_item_val, {Sort::Int}, Sort::SqlBool, {x}),
                         mk::sql_true())));
}

}  // namespace

Theory build_theory(TheoryKind kind, const CorrectnessProblem& p) {
  p.validate();
  Assembled a = assemble_base(p);
  o2f::Translator& tr = *a.translator;

  switch (kind) {
    case TheoryKind::C1: {
      Theory t = msfol::theory_union(a.base, tr.definitions());
      t.add_goal(mk::not_(s2f::single_row_property(a.s2f.top_index)),
                 "refute: the statement returns exactly one row");
      return t;
    }
    case TheoryKind::C2: {
      TermPtr expr_true = tr.o2f_true(p.expr);
      Theory t = msfol::theory_union(a.base, tr.definitions());
      t.add_axiom(expr_true, "constraint holds");
      t.add_goal(mk::not_(all_rows_true(a.s2f)),
                 "refute: every result row is TRUE");
      return t;
    }
    case TheoryKind::C3: {
      TermPtr expr_true = tr.o2f_true(p.expr);
      Theory t = msfol::theory_union(a.base, tr.definitions());
      t.add_axiom(all_rows_true(a.s2f), "every result row is TRUE");
      t.add_goal(mk::not_(expr_true), "refute: constraint holds");
      return t;
    }
  }
  fail("theory", "unreachable");
}

std::vector<NamedTheory> build_obligations(const CorrectnessProblem& p) {
  p.validate();
  Assembled a = assemble_base(p);

  std::vector<NamedTheory> out;
  int n = 0;
  for (const auto& ob : a.s2f.obligations) {
    NamedTheory nt;
    nt.name = "OB" + std::to_string(++n);
    nt.subject = ob.subselect;
    nt.theory = msfol::theory_union(a.base, a.translator->definitions());
    nt.theory.add_goal(ob.goal, "refute: subselect returns exactly one row");
    out.push_back(std::move(nt));
  }
  return out;
}

const char* to_string(SolverResult r) {
  switch (r) {
    case SolverResult::Sat: return "sat";
    case SolverResult::Unsat: return "unsat";
    case SolverResult::Unknown: return "unknown";
    case SolverResult::Timeout: return "timeout";
  }
  return "?";
}

namespace {

// Runs argv, captures stdout, enforces the deadline with SIGKILL.
// Returns {exit_ok, timed_out, output}.
struct RunResult {
  bool timed_out = false;
  bool failed = false;
  std::string output;
};

RunResult run_process(const std::vector<std::string>& argv, int timeout_sec) {
  int pipefd[2];
  if (pipe(pipefd) != 0) fail("solver", "pipe() failed");

  pid_t pid = fork();
  if (pid < 0) fail("solver", "fork() failed");
  if (pid == 0) {
    dup2(pipefd[1], STDOUT_FILENO);
    dup2(pipefd[1], STDERR_FILENO);
    close(pipefd[0]);
    close(pipefd[1]);
    std::vector<char*> cargv;
    for (const auto& a : argv) cargv.push_back(const_cast<char*>(a.c_str()));
    cargv.push_back(nullptr);
    execvp(cargv[0], cargv.data());
    _exit(127);
  }

  close(pipefd[1]);
  fcntl(pipefd[0], F_SETFL, O_NONBLOCK);

  RunResult result;
  const auto deadline =
      std::chrono::steady_clock::now() + std::chrono::seconds(timeout_sec);
  char buf[4096];
  bool child_done = false;
  int status = 0;
  while (true) {
    ssize_t n;
    while ((n = read(pipefd[0], buf, sizeof buf)) > 0) result.output.append(buf, n);
    if (child_done) break;
    pid_t r = waitpid(pid, &status, WNOHANG);
    if (r == pid) {
      child_done = true;
      continue;  // drain remaining output
    }
    if (std::chrono::steady_clock::now() >= deadline) {
      kill(pid, SIGKILL);
      waitpid(pid, &status, 0);
      result.timed_out = true;
      break;
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
  }
  close(pipefd[0]);
  if (!result.timed_out) {
    result.failed = !WIFEXITED(status) ||
                    (WEXITSTATUS(status) != 0 && result.output.find("sat") == std::string::npos &&
                     result.output.find("unknown") == std::string::npos);
    if (WIFEXITED(status) && WEXITSTATUS(status) == 127) result.failed = true;
  }
  return result;
}

}  // namespace

SolverResult check_file(const std::string& smt2_path, const SolverConfig& cfg) {
  if (cfg.path.empty()) fail("solver", "no solver configured");
  std::vector<std::string> argv{cfg.path};
  argv.insert(argv.end(), cfg.args.begin(), cfg.args.end());
  argv.push_back(smt2_path);

  RunResult r = run_process(argv, cfg.timeout_sec);
  if (r.timed_out) return SolverResult::Timeout;
  if (r.failed)
    fail("solver", "'" + cfg.path + "' failed on " + smt2_path + ": " +
                       r.output.substr(0, 400));

  std::istringstream lines(r.output);
  std::string line;
  while (std::getline(lines, line)) {
    // Trim trailing whitespace.
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back())))
      line.pop_back();
    if (line == "sat") return SolverResult::Sat;
    if (line == "unsat") return SolverResult::Unsat;
    if (line == "unknown") return SolverResult::Unknown;
  }
  fail("solver", "no status token in output of '" + cfg.path + "': " + r.output.substr(0, 400));
}

SolverResult check(const Theory& t, const SolverConfig& cfg, const std::string& smt2_path) {
  std::ofstream out(smt2_path);
  if (!out) fail("solver", "cannot write " + smt2_path);
  out << msfol::emit_smtlib(t);
  out.close();
  return check_file(smt2_path, cfg);
}

Verdict decide(const std::vector<std::pair<std::string, SolverResult>>& results) {
  Verdict v;
  for (const auto& [name, r] : results) {
    if (r == SolverResult::Sat) {
      v.kind = Verdict::Kind::Incorrect;
      v.witness = name;
      return v;
    }
  }
  for (const auto& [name, r] : results)
    if (r == SolverResult::Unknown || r == SolverResult::Timeout) v.unknowns.push_back(name);
  if (!v.unknowns.empty()) {
    v.kind = Verdict::Kind::Inconclusive;
    return v;
  }
  v.kind = Verdict::Kind::Correct;
  return v;
}

namespace {

std::string describe(const ObjectModel& om, const Assignment& sigma) {
  std::ostringstream out;
  out << "objects:";
  for (const auto& o : om.objects) out << ' ' << o.cls << '#' << o.id;
  for (const auto& [key, value] : om.attribute_values) {
    out << ' ' << key.first << '(' << key.second << ")=";
    switch (value.kind) {
      case OclScalar::Kind::Int: out << value.int_value; break;
      case OclScalar::Kind::String: out << '\'' << value.str_value << '\''; break;
      case OclScalar::Kind::Object: out << '#' << value.object; break;
      case OclScalar::Kind::Bool: out << (value.bool_value ? "true" : "false"); break;
      case OclScalar::Kind::Null: out << "null"; break;
    }
  }
  out << " links:";
  for (const auto& l : om.links) out << ' ' << l.assoc << '(' << l.left << ',' << l.right << ')';
  out << " sigma:";
  for (const auto& [name, value] : sigma.bindings) {
    out << ' ' << name << '=';
    switch (value.kind) {
      case OclScalar::Kind::Int: out << value.int_value; break;
      case OclScalar::Kind::String: out << '\'' << value.str_value << '\''; break;
      case OclScalar::Kind::Object: out << '#' << value.object; break;
      case OclScalar::Kind::Bool: out << (value.bool_value ? "true" : "false"); break;
      case OclScalar::Kind::Null: out << "null"; break;
    }
  }
  return out.str();
}

}  // namespace

OracleReport cross_check(const CorrectnessProblem& p, const EnumerationBounds& bounds) {
  p.validate();
  OracleReport report;
  const auto models = enumerate_object_models(p.dm, bounds);
  for (const auto& om : models) {
    const rel::DatabaseInstance db = rel::o2s_inst(p.dm, p.schema, om);
    for (const auto& sigma : enumerate_assignments(p.frees, om, bounds)) {
      bool assumptions_hold = true;
      for (const auto& a : p.assumptions) {
        if (!ocl::eval_ocl(om, sigma, a).is_true()) {
          assumptions_hold = false;
          break;
        }
      }
      if (!assumptions_hold) continue;
      ++report.instances;

      const bool ocl_true = ocl::eval_ocl(om, sigma, p.expr).is_true();

      bool sql_true = false;
      bool counted_rows = false;
      try {
        sql::ResultTable rt = sql::exec_sql(db, rel::o2s_inst_assignment(sigma), p.sel);
        counted_rows = true;
        if (rt.rows.size() != 1) ++report.row_count_witnesses;
        sql_true = rt.rows.size() == 1 && rt.rows[0].size() == 1 &&
                   rt.rows[0][0].kind == rel::SqlValue::Kind::Bool && rt.rows[0][0].bool_value;
      } catch (const sql::ScalarCardinalityError&) {
        ++report.scalar_witnesses;
      }
      (void)counted_rows;

      if (ocl_true != sql_true) {
        ++report.discrepancies;
        if (report.samples.size() < 5)
          report.samples.push_back((ocl_true ? "constraint true, statement not TRUE: "
                                             : "statement TRUE, constraint not true: ") +
                                   describe(om, sigma));
      }
    }
  }
  return report;
}

}  // namespace oclsql::prover
