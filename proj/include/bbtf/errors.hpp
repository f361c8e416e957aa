#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bbtf {

// Shape mismatch or a problem too small for the requested order.
class DimensionError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// Grid locations are not strictly increasing.
class OrderingError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// An argument lies outside the domain of a distribution or operator.
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

// Non-numeric, NaN or infinite input data.
class ParseError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Missing, unreadable or unwritable files.
class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// A Cholesky factorization hit a non-positive pivot.
class ConditioningError : public std::runtime_error {
public:
  ConditioningError(std::size_t pivot, const std::string &what)
      : std::runtime_error(what), pivot_(pivot) {}

  std::size_t pivot() const noexcept { return pivot_; }

private:
  std::size_t pivot_;
};

} // namespace bbtf
