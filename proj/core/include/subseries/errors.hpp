#pragma once

#include <stdexcept>
#include <string>

namespace subseries {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller broke an operation's precondition (space mismatch, bad index,
/// unsupported kind/precision combination, malformed input).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

/// The requested functional family is deliberately not norming for the space.
class NotNorming : public Error {
 public:
  using Error::Error;
};

/// An enumeration or search would exceed its hard cap.
class BudgetError : public Error {
 public:
  using Error::Error;
};

/// Block extraction could not find the requested number of blocks.
class BudgetExhausted : public Error {
 public:
  BudgetExhausted(const std::string& what, std::size_t found)
      : Error(what), found_(found) {}
  std::size_t found() const noexcept { return found_; }

 private:
  std::size_t found_;
};

/// The analytic oracle of a catalog family cannot decide a query.
class OracleIncomplete : public Error {
 public:
  using Error::Error;
};

class UnknownFamily : public Error {
 public:
  using Error::Error;
};

/// An experiment's mathematical hypothesis does not hold for its inputs.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

}  // namespace subseries
