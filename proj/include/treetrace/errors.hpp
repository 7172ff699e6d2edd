#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace treetrace {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A Cayley table or permutation set that does not describe a group.
class GroupAxiomError : public Error {
 public:
  using Error::Error;
};

class IndexOutOfRange : public Error {
 public:
  using Error::Error;
};

/// Operands built from two different graphs of groups.
class SpecMismatch : public Error {
 public:
  using Error::Error;
};

class SubgroupNotInSource : public Error {
 public:
  using Error::Error;
};

class InvalidLetter : public Error {
 public:
  using Error::Error;
};

/// An enumeration or construction would exceed its configured budget.
class BudgetExceeded : public Error {
 public:
  BudgetExceeded(const std::string& what, std::size_t count)
      : Error(what + " (count " + std::to_string(count) + ")"), count_(count) {}
  std::size_t count() const noexcept { return count_; }

 private:
  std::size_t count_;
};

/// The examined ball does not contain the geodesic a query depends on.
class RadiusTooSmall : public Error {
 public:
  using Error::Error;
};

class NotAProjection : public Error {
 public:
  using Error::Error;
};

class NotHEquivariant : public Error {
 public:
  using Error::Error;
};

class IncompatibleSupports : public Error {
 public:
  using Error::Error;
};

class NumericalFailure : public Error {
 public:
  using Error::Error;
};

/// Malformed scenario input; line is 0 when unknown.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& message)
      : Error("line " + std::to_string(line) + ": " + message), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Well-formed input that violates a mathematical precondition.
class ValidationError : public Error {
 public:
  using Error::Error;
};

}  // namespace treetrace
