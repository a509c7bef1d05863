#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace slt {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Precondition violation on caller-supplied values.
class InvalidArgument : public Error {
public:
  using Error::Error;
};

class DimensionMismatch : public InvalidArgument {
public:
  DimensionMismatch(std::size_t expected, std::size_t actual);

  std::size_t expected() const noexcept { return expected_; }
  std::size_t actual() const noexcept { return actual_; }

private:
  std::size_t expected_;
  std::size_t actual_;
};

/// An enumeration or search would exceed its configured work budget.
class BudgetExceeded : public Error {
public:
  BudgetExceeded(std::size_t budget, std::size_t required, const std::string& what);

  std::size_t budget() const noexcept { return budget_; }
  std::size_t required() const noexcept { return required_; }

private:
  std::size_t budget_;
  std::size_t required_;
};

/// Raised where a true risk is needed but neither an analytic route nor a
/// Monte Carlo fallback was provided.
class NoAnalyticRisk : public Error {
public:
  using Error::Error;
};

/// Malformed external input (CSV / JSON).
class ParseError : public Error {
public:
  using Error::Error;
};

}  // namespace slt
