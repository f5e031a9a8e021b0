#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "oclsql/ocl_eval.hpp"
#include "oclsql/prover.hpp"
#include "oclsql/relational.hpp"
#include "oclsql/sql2msfol.hpp"

namespace fs = std::filesystem;
using namespace oclsql;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(path, "cannot open file");
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

std::vector<TypedVar> parse_vars(const std::vector<std::string>& specs) {
  std::vector<TypedVar> out;
  for (const auto& s : specs) {
    auto colon = s.find(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 >= s.size())
      fail("--var", "expected NAME:TYPE, got '" + s + "'");
    out.push_back({s.substr(0, colon), s.substr(colon + 1)});
  }
  return out;
}

OclScalar parse_bound_value(const std::string& token, bool as_int) {
  if (token == "null") return OclScalar::null();
  if (as_int) return OclScalar::of_int(std::stoll(token));
  return OclScalar::of_string(token);
}

// SPEC format: "objects=2;ints=null,17,19;strings=null,a"
EnumerationBounds parse_bounds(const std::string& spec) {
  EnumerationBounds bounds;
  if (spec.empty()) return bounds;
  std::istringstream parts(spec);
  std::string part;
  while (std::getline(parts, part, ';')) {
    auto eq = part.find('=');
    if (eq == std::string::npos) fail("--oracle-bounds", "expected KEY=VALUES in '" + part + "'");
    std::string key = part.substr(0, eq);
    std::string values = part.substr(eq + 1);
    if (key == "objects") {
      bounds.max_objects_per_class = std::stoi(values);
      continue;
    }
    std::vector<OclScalar> domain;
    std::istringstream vals(values);
    std::string v;
    while (std::getline(vals, v, ',')) domain.push_back(parse_bound_value(v, key == "ints"));
    if (key == "ints")
      bounds.int_domain = std::move(domain);
    else if (key == "strings")
      bounds.string_domain = std::move(domain);
    else
      fail("--oracle-bounds", "unknown key '" + key + "'");
  }
  return bounds;
}

std::string default_solver() {
  if (const char* env = std::getenv("OCLSQL_SOLVER"); env && *env) return env;
  // Fall back to the bundled solver next to this binary.
  std::error_code ec;
  fs::path self = fs::read_symlink("/proc/self/exe", ec);
  if (!ec) {
    fs::path sibling = self.parent_path() / "smtlite";
    if (fs::exists(sibling)) return sibling.string();
    sibling = self.parent_path().parent_path() / "smtlite" / "smtlite";
    if (fs::exists(sibling)) return sibling.string();
  }
  return "";
}

struct CheckRecord {
  std::string name;
  std::string file;
  prover::SolverResult result;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Proves that a SQL select-statement correctly implements an OCL Boolean "
      "constraint over a shared data model, by checking three satisfiability "
      "problems with an SMT solver; a brute-force oracle cross-checks verdicts "
      "on bounded instances."};

  std::string data_model_path, ocl_path, ocl_inline, sql_path, sql_inline;
  std::vector<std::string> var_specs, assumptions_text;
  std::string solver_path, emit_dir, bounds_spec, case_name = "case", mode = "prove";
  int timeout = 60;

  app.add_option("--data-model", data_model_path, "Data model JSON document")->required();
  app.add_option("--ocl", ocl_path, "OCL constraint file");
  app.add_option("--ocl-inline", ocl_inline, "OCL constraint text");
  app.add_option("--sql", sql_path, "SQL select-statement file");
  app.add_option("--sql-inline", sql_inline, "SQL select-statement text");
  app.add_option("--var", var_specs, "Free variable NAME:TYPE (repeatable)");
  app.add_option("--assume", assumptions_text, "OCL assumption (repeatable)");
  app.add_option("--solver", solver_path, "SMT-LIB2 solver executable");
  app.add_option("--timeout", timeout, "Per-theory solver timeout in seconds");
  app.add_option("--emit-dir", emit_dir, "Directory for the emitted .smt2 files");
  app.add_option("--oracle-bounds", bounds_spec,
                 "Oracle bounds, e.g. objects=2;ints=null,17,19;strings=null,a");
  app.add_option("--case", case_name, "Case name used in emitted file names");
  app.add_option("--mode", mode, "prove | emit | oracle")
      ->check(CLI::IsMember({"prove", "emit", "oracle"}));

  try {
    app.parse(argc, argv);

    if (ocl_path.empty() == ocl_inline.empty())
      fail("input", "exactly one of --ocl / --ocl-inline is required");
    if (sql_path.empty() == sql_inline.empty())
      fail("input", "exactly one of --sql / --sql-inline is required");

    prover::CorrectnessProblem problem;
    problem.dm = load_data_model(slurp(data_model_path));
    problem.schema = rel::o2s(problem.dm);
    problem.frees = parse_vars(var_specs);

    const std::string ocl_text = ocl_path.empty() ? ocl_inline : slurp(ocl_path);
    problem.expr = ocl::parse_ocl(ocl_text, problem.dm, problem.frees);
    for (const auto& a : assumptions_text)
      problem.assumptions.push_back(ocl::parse_ocl(a, problem.dm, problem.frees));

    const std::string sql_text = sql_path.empty() ? sql_inline : slurp(sql_path);
    problem.sel = sql::parse_select(sql_text, problem.schema, problem.frees);
    problem.validate();

    if (mode == "oracle") {
      prover::OracleReport report = prover::cross_check(problem, parse_bounds(bounds_spec));
      std::cout << "instances checked:      " << report.instances << "\n"
                << "discrepancies:          " << report.discrepancies << "\n"
                << "row-count witnesses:    " << report.row_count_witnesses << "\n"
                << "scalar-subselect errors: " << report.scalar_witnesses << "\n";
      for (const auto& s : report.samples) std::cout << "  " << s << "\n";
      return report.discrepancies == 0 ? 0 : 1;
    }

    // Emit the theories.
    fs::path out_dir;
    if (!emit_dir.empty()) {
      out_dir = emit_dir;
      fs::create_directories(out_dir);
    } else {
      if (mode == "emit") fail("--emit-dir", "emit mode requires an output directory");
      out_dir = fs::temp_directory_path() /
                ("oclsql-" + case_name + "-" + std::to_string(::getpid()));
      fs::create_directories(out_dir);
    }

    std::vector<prover::NamedTheory> obligations = prover::build_obligations(problem);
    std::vector<std::pair<std::string, fs::path>> files;
    for (const auto& ob : obligations) {
      fs::path file = out_dir / (case_name + "-" + ob.name + ".smt2");
      std::ofstream(file) << msfol::emit_smtlib(ob.theory);
      files.emplace_back(ob.name, file);
    }
    const std::vector<std::pair<std::string, prover::TheoryKind>> kinds = {
        {"C1", prover::TheoryKind::C1},
        {"C2", prover::TheoryKind::C2},
        {"C3", prover::TheoryKind::C3}};
    for (const auto& [name, kind] : kinds) {
      fs::path file = out_dir / (case_name + "-" + name + ".smt2");
      std::ofstream(file) << msfol::emit_smtlib(prover::build_theory(kind, problem));
      files.emplace_back(name, file);
    }

    if (mode == "emit") {
      for (const auto& [name, file] : files) std::cout << name << ": " << file.string() << "\n";
      return 0;
    }

    prover::SolverConfig cfg;
    cfg.path = solver_path.empty() ? default_solver() : solver_path;
    cfg.timeout_sec = timeout;
    if (cfg.path.empty())
      fail("--solver", "no solver given, OCLSQL_SOLVER unset, and no bundled solver found");

    // Obligations first: they gate the scalar-subselect translations.
    std::vector<std::pair<std::string, prover::SolverResult>> results;
    bool obligation_sat = false;
    for (const auto& ob : obligations) {
      prover::SolverResult r =
          prover::check_file((out_dir / (case_name + "-" + ob.name + ".smt2")).string(), cfg);
      std::cout << ob.name << " (" << ob.subject << "): " << prover::to_string(r) << "\n";
      results.emplace_back(ob.name, r);
      if (r == prover::SolverResult::Sat) obligation_sat = true;
    }
    if (!obligation_sat) {
      for (const auto& [name, kind] : kinds) {
        prover::SolverResult r =
            prover::check_file((out_dir / (case_name + "-" + name + ".smt2")).string(), cfg);
        std::cout << name << ": " << prover::to_string(r) << "\n";
        results.emplace_back(name, r);
      }
    }

    prover::Verdict verdict = prover::decide(results);
    switch (verdict.kind) {
      case prover::Verdict::Kind::Correct:
        std::cout << "Correct\n";
        return 0;
      case prover::Verdict::Kind::Incorrect:
        std::cout << "Incorrect (" << verdict.witness << ")\n";
        return 1;
      case prover::Verdict::Kind::Inconclusive: {
        std::cout << "Inconclusive (";
        for (size_t i = 0; i < verdict.unknowns.size(); ++i)
          std::cout << (i ? ", " : "") << verdict.unknowns[i];
        std::cout << ")\n";
        return 2;
      }
    }
    return 3;
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
