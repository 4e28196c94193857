#pragma once

#include <stdexcept>
#include <string>

namespace pbs {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands of a polynomial operation are expanded about different origins.
class OriginMismatch : public Error {
 public:
  OriginMismatch(double lhs, double rhs);
  double lhs_origin() const { return lhs_; }
  double rhs_origin() const { return rhs_; }

 private:
  double lhs_;
  double rhs_;
};

/// A series term would exceed the configured polynomial degree cap.
class DegreeCapExceeded : public Error {
 public:
  DegreeCapExceeded(int cap, int term_index, int degree);
  int cap() const { return cap_; }
  int term_index() const { return index_; }

 private:
  int cap_;
  int index_;
};

/// A requested time lies outside the domain of a matrix or vector function.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A sampled evaluator failed (threw or returned non-finite values).
class EvaluationError : public Error {
 public:
  EvaluationError(double node, const std::string& what);
  double node() const { return node_; }

 private:
  double node_;
};

/// Diagnostics failure: a fundamental matrix was numerically singular.
class ConditioningError : public Error {
 public:
  ConditioningError(double t, double rcond);
  double time() const { return t_; }

 private:
  double t_;
};

/// Malformed user input (problem files, CLI arguments). `field` names the
/// offending entry.
class InputError : public Error {
 public:
  InputError(std::string field, const std::string& what);
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

}  // namespace pbs
