#pragma once

#include <string>

#include "terms.hpp"

namespace smtlite {

enum class Answer { Sat, Unsat, Unknown };

// Alternates ground-refutation search (quantifier instantiation into a lazy
// SMT core) with finite model search until the deadline.
Answer solve_script(const std::string& text, double timeout_seconds);

}  // namespace smtlite
