#pragma once

#include <optional>
#include <vector>

#include "pbs/matrix_function.hpp"
#include "pbs/series.hpp"

namespace pbs {

/// x' = A(t) x + b(t), x(t0) = x0 on `domain`.
struct CauchyProblem {
  MatrixFunction a;
  std::optional<VectorFunction> b;
  double t0 = 0.0;
  Vector x0;
  Interval domain;
  double tol = 1e-10;
  SeriesOptions options;

  int dim() const { return a.dim(); }
  /// Throws InputError naming the inconsistent field.
  void validate() const;
};

/// Homogenized family [[A, b], [0, 0]] of size d + 1. Its flow applied to
/// (x0, 1) carries the inhomogeneous solution in the first d components.
MatrixFunction augment(const MatrixFunction& a, const VectorFunction& b);

/// Piecewise-polynomial solution of a Cauchy problem.
class Trajectory {
 public:
  struct Piece {
    double start;
    double end;
    PolyVector x;
    /// Error bound accumulated up to the end of this piece.
    double bound;
  };

  Trajectory(double t0, Vector x0, std::vector<Piece> pieces, double error_bound);

  double t0() const { return t0_; }
  double t_end() const { return pieces_.empty() ? t0_ : pieces_.back().end; }
  const std::vector<Piece>& pieces() const { return pieces_; }
  double error_bound() const { return error_bound_; }

  Vector operator()(double t) const;
  /// Error bound for the pieces needed to reach t (0 at t0).
  double error_bound_at(double t) const;
  /// Polynomial derivative of the piece containing t.
  Vector derivative(double t) const;

 private:
  const Piece& piece_at(double t) const;

  double t0_;
  Vector x0_;
  std::vector<Piece> pieces_;
  double error_bound_;
};

/// Solution on the interval between p.t0 and t. Homogeneous problems use the
/// series flow of A; otherwise the flow of the augmented family.
Trajectory solve_trajectory(const CauchyProblem& p, double t);

Vector solve(const CauchyProblem& p, double t);

/// Variation of constants,
///   x(t) = Phi(t; t0) (x0 + int_{t0}^{t} Phi(tau; t0)^{-1} b(tau) dtau),
/// with composite Gauss-Legendre aligned with the series steps. Throws
/// ConditioningError if some Phi(tau; t0) has reciprocal condition < 1e-12.
Vector solve_voc(const CauchyProblem& p, double t, int quad_nodes = 20);

}  // namespace pbs
