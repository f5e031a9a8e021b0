#pragma once

#include <stdexcept>
#include <string>

namespace oclsql {

// Single exception type for all user-facing failures (parse errors,
// invariant violations, translation limits, tool errors). The `where`
// prefix names the input or construct at fault.
class Error : public std::runtime_error {
public:
  explicit Error(std::string message) : std::runtime_error(std::move(message)) {}
  Error(const std::string& where, const std::string& message)
      : std::runtime_error(where + ": " + message) {}
};

[[noreturn]] inline void fail(const std::string& message) { throw Error(message); }

[[noreturn]] inline void fail(const std::string& where, const std::string& message) {
  throw Error(where, message);
}

}  // namespace oclsql
