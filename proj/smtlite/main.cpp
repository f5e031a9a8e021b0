#include <cstring>
#include <fstream>
#include <iostream>
#include <sstream>

#include "solver.hpp"

namespace {

void usage() {
  std::cerr << "usage: smtlite [--timeout SECONDS] FILE.smt2\n"
            << "Decides a quantified SMT-LIB2 subset: uninterpreted sorts,\n"
            << "enumerated datatypes, integer comparisons, string equality.\n";
}

}  // namespace

int main(int argc, char** argv) {
  double timeout = 60.0;
  std::string path;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--timeout") == 0 && i + 1 < argc) {
      timeout = std::stod(argv[++i]);
    } else if (std::strcmp(argv[i], "--help") == 0) {
      usage();
      return 0;
    } else if (path.empty()) {
      path = argv[i];
    } else {
      usage();
      return 2;
    }
  }
  if (path.empty()) {
    usage();
    return 2;
  }

  std::ifstream in(path);
  if (!in) {
    std::cerr << "error: cannot open " << path << "\n";
    return 2;
  }
  std::ostringstream text;
  text << in.rdbuf();

  try {
    switch (smtlite::solve_script(text.str(), timeout)) {
      case smtlite::Answer::Sat: std::cout << "sat\n"; break;
      case smtlite::Answer::Unsat: std::cout << "unsat\n"; break;
      case smtlite::Answer::Unknown: std::cout << "unknown\n"; break;
    }
    return 0;
  } catch (const smtlite::SolverError& e) {
    std::cerr << "error: " << e.message << "\n";
    return 2;
  }
}
