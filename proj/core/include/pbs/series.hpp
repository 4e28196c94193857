#pragma once

#include <vector>

#include "pbs/matrix_function.hpp"
#include "pbs/poly.hpp"

namespace pbs {

/// Engine knobs shared by the series, the solvers and the CLI.
struct SeriesOptions {
  /// Upper limit for the per-step integral bound of ||A||.
  double mu_max = 1.0;
  /// Largest polynomial degree a series term may reach.
  int degree_cap = 64;
  /// Interpolation degree used per step for sampled families.
  int sampled_degree = kDefaultSampledDegree;
};

/// The n-th iterated integral I_n as a polynomial about the step start.
struct SeriesTerm {
  int index = 0;
  PolyMatrix value;
};

/// I_{n+1}(t) = int_{step_start}^{t} A(tau) I_n(tau) dtau, exact in polynomial
/// arithmetic. Throws DegreeCapExceeded when the result degree exceeds
/// `degree_cap`.
SeriesTerm next_term(const PolyMatrix& a, const SeriesTerm& term, double step_start, int degree_cap = 64);

/// I_0 ... I_count about `step_start` (count + 1 terms).
std::vector<SeriesTerm> series_terms(const PolyMatrix& a, double step_start, int count, int degree_cap = 64);

/// mu^{n+1} / (n+1)! * e^mu, a closed upper bound of sum_{k>n} mu^k / k!.
double tail_majorant(double mu, int order);

/// sum_{k>n} mu^k / k!, summed directly.
double exponential_tail(double mu, int order);

/// Smallest order N whose tail majorant is <= tol.
int truncation_order(double mu, double tol);

/// Partial sum of the series over one step.
struct StepTransition {
  /// Time where the series is anchored (phi(start) = identity).
  double start = 0.0;
  /// Other end of the step; end < start for backward steps.
  double end = 0.0;
  PolyMatrix phi;
  int order = 0;
  /// Bound on int ||A|| over the step.
  double mu = 0.0;
  /// sum_{k > order} mu^k / k!.
  double tail_bound = 0.0;

  Interval span() const { return Interval::spanning(start, end); }
};

/// One series step with a priori truncation from the bound of ||A|| on
/// [start, end]. `a` may be expanded about any origin; the stored phi is
/// expanded about `start`.
StepTransition transition_step(const PolyMatrix& a, double start, double end, double tol, int degree_cap = 64);
/// Forward step over `step`.
StepTransition transition_step(const PolyMatrix& a, const Interval& step, double tol, int degree_cap = 64);

/// Variant for interpolated steps: terms above `degree_cap` are truncated
/// instead of rejected, and a bound on the dropped part is added to
/// tail_bound.
StepTransition transition_step_truncated(const PolyMatrix& a, double start, double end, double tol,
                                         int degree_cap = 64);

/// Piecewise representation of Phi(.; t0) on the interval between t0 and the
/// final time, built by composing single-step series.
class TransitionResult {
 public:
  TransitionResult(double t0, double t_end, int dim, std::vector<StepTransition> steps);

  double t0() const { return t0_; }
  double t_end() const { return t_end_; }
  int dim() const { return dim_; }
  Interval covered() const { return Interval::spanning(t0_, t_end_); }
  bool backward() const { return t_end_ < t0_; }

  const std::vector<StepTransition>& steps() const { return steps_; }
  /// Phi(start of step k; t0).
  const std::vector<Matrix>& entry_factors() const { return entry_; }

  /// Accumulated a priori error bound at the final time.
  double total_bound() const { return total_bound_; }
  /// Accumulated bound for the steps needed to reach `t`.
  double bound_at(double t) const;

  /// Phi(t; t0) for t in the covered interval.
  Matrix operator()(double t) const;
  Matrix end_value() const { return (*this)(t_end_); }

  /// Index of the step whose span contains t.
  std::size_t step_index(double t) const;

  /// Phi(.; t0) restricted to step k as a polynomial, phi_k(t) * entry_k.
  PolyMatrix step_polynomial(std::size_t k) const;

 private:
  double t0_;
  double t_end_;
  int dim_;
  std::vector<StepTransition> steps_;
  std::vector<Matrix> entry_;
  std::vector<double> prefix_bound_;
  double total_bound_ = 0.0;
};

/// One planned step: the polynomial form of A on it, expanded about `start`.
struct PlannedStep {
  double start;
  double end;
  PolyMatrix a;
  /// Interpolant of a sampled family rather than an exact representation.
  bool interpolated = false;
};

/// Subdivides [t0, t] (either direction) so that each step has
/// bound_sup_norm * |step| <= mu_max and no step crosses a piece boundary.
std::vector<PlannedStep> plan_steps(const MatrixFunction& a, double t0, double t, const SeriesOptions& opts);

/// Phi(t; t0) by the Peano-Baker series with flow composition. The
/// tolerance is split evenly across the steps. Throws DomainError if the
/// interval is outside the domain of A, DegreeCapExceeded from the series.
TransitionResult transition(const MatrixFunction& a, double t0, double t, double tol,
                            const SeriesOptions& opts = {});

}  // namespace pbs
