#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sentinel {

enum class ErrorKind {
  IndexOutOfRange,
  SelfLoopRejected,
  ParseError,
  IoError,
  InvalidSpec,
  InvalidSpecPair,
  DomainError,
  DegenerateVariance,
  DegenerateGraph,
  EmptyGraph,
  InvalidSize,
  BudgetExceeded,
  TimeBudgetExceeded,
  InsufficientReplicates,
  MismatchedNullSpec,
};

std::string_view error_name(ErrorKind kind);

// Single exception type for the library; callers dispatch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(error_name(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool ok, ErrorKind kind, const std::string& what) {
  if (!ok) fail(kind, what);
}

}  // namespace sentinel
