#pragma once

#include <stdexcept>
#include <string>

namespace certlab {

// Base of every error the library throws on its own account.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class DimensionMismatch : public Error {
 public:
  explicit DimensionMismatch(const std::string& what) : Error("dimension mismatch: " + what) {}
};

// A documented precondition of an operation does not hold.
class PreconditionError : public Error {
 public:
  explicit PreconditionError(const std::string& what) : Error("precondition violated: " + what) {}
};

// Enumeration or LP size exceeded the configured budget.
class BudgetExceeded : public Error {
 public:
  explicit BudgetExceeded(const std::string& what) : Error("budget exceeded: " + what) {}
};

// Malformed external input (JSON, rational strings, CLI arguments).
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what) : Error("parse error: " + what) {}
};

// An internal identity that must hold exactly did not.
class InternalError : public Error {
 public:
  explicit InternalError(const std::string& what) : Error("internal consistency failure: " + what) {}
};

// Conditioning on a branch whose probability is zero.
class DegenerateBranch : public Error {
 public:
  explicit DegenerateBranch(const std::string& what) : Error("degenerate branch: " + what) {}
};

}  // namespace certlab
