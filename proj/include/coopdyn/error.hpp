#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace coopdyn {

enum class ErrorCode : int {
  invalid_argument = 1,
  non_convergence = 2,
  unsupported = 3,
  io = 4,
  schema = 5,
  overflow = 6,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Raised by iterative solvers that hit their iteration cap. Carries the
/// sequence of sup-norm increments so callers can tell slow convergence from
/// stagnation.
class NonConvergenceError : public Error {
 public:
  NonConvergenceError(const std::string& what, std::vector<double> history)
      : Error(ErrorCode::non_convergence, what), history_(std::move(history)) {}
  const std::vector<double>& residual_history() const noexcept { return history_; }

 private:
  std::vector<double> history_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::invalid_argument, what);
}

}  // namespace coopdyn
