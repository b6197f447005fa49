#pragma once

#include <stdexcept>
#include <string>

namespace dmlst {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// line is 1-based and refers to the offending input line
struct ParseError : Error {
  int line;
  ParseError(int line_, const std::string& what_)
      : Error("parse error at line " + std::to_string(line_) + ": " + what_), line(line_) {}
};

struct IllegalTransition : Error {
  using Error::Error;
};

struct InfeasibleRoot : Error {
  using Error::Error;
};

struct DegenerateInput : Error {
  using Error::Error;
};

struct CapExceeded : Error {
  using Error::Error;
};

struct BudgetExceeded : Error {
  using Error::Error;
};

struct NonPositiveDelta : Error {
  using Error::Error;
};

// raised when a branching/solver precondition is broken (indicates a bug upstream)
struct ContractViolation : std::logic_error {
  using std::logic_error::logic_error;
};

}  // namespace dmlst
