#include "pbs/errors.hpp"

#include <sstream>

namespace pbs {

namespace {

std::string describe(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

OriginMismatch::OriginMismatch(double lhs, double rhs)
    : Error("polynomial origins differ (" + describe(lhs) + " vs " + describe(rhs) +
            "); recenter one operand first"),
      lhs_(lhs),
      rhs_(rhs) {}

DegreeCapExceeded::DegreeCapExceeded(int cap, int term_index, int degree)
    : Error("degree cap " + std::to_string(cap) + " exceeded at series term " +
            std::to_string(term_index) + " (degree " + std::to_string(degree) + ")"),
      cap_(cap),
      index_(term_index) {}

EvaluationError::EvaluationError(double node, const std::string& what)
    : Error("evaluation failed at t = " + describe(node) + ": " + what), node_(node) {}

ConditioningError::ConditioningError(double t, double rcond)
    : Error("transition matrix near-singular at t = " + describe(t) +
            " (reciprocal condition " + describe(rcond) + ")"),
      t_(t) {}

InputError::InputError(std::string field, const std::string& what)
    : Error(field.empty() ? what : field + ": " + what), field_(std::move(field)) {}

}  // namespace pbs
