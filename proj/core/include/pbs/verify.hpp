#pragma once

#include <functional>
#include <string>

#include "pbs/cauchy.hpp"
#include "pbs/matrix_function.hpp"
#include "pbs/series.hpp"

namespace pbs::verify {

/// Outcome of one invariant check.
struct CheckReport {
  std::string name;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string grid;

  static CheckReport make(std::string name, double residual, double tolerance, std::string grid);
};

// --- closed-form families ------------------------------------------------------

/// alpha_n = sum_{l=1}^{n} l a^{l-1}.
double alpha_n(double a, int n);

/// Rising factorial (x)_k = x (x + 1) ... (x + k - 1).
double pochhammer(double x, int k);

/// Upper-triangular family [[1, t], [0, a]] about origin 0.
PolyMatrix example1_family(double a);

/// Off-diagonal family [[0, t], [a, 0]] about origin 0.
PolyMatrix airy_family(double a);

/// The closed-form I_n of the triangular family (t0 = 0).
Matrix example1_term(double a, int n, double t);

/// f(t) of the triangular family, with the confluent form t^2 e^t / 2 at a = 1.
double example1_f(double a, double t);

/// Phi(t; 0) = [[e^t, f(t)], [0, e^{at}]].
Matrix example1_phi(double a, double t);

/// Truncated power series f, f', g, g' of the Airy pair
///   f(z) = sum 3^k (1/3)_k z^{3k} / (3k)!,  g(z) = sum 3^k (2/3)_k z^{3k+1} / (3k+1)!.
struct AirySeries {
  double f = 0.0;
  double df = 0.0;
  double g = 0.0;
  double dg = 0.0;
  /// Largest magnitude among the last summands; a heuristic truncation estimate.
  double last_term = 0.0;
};

AirySeries airy_series(double z, int terms);

inline constexpr int kDefaultAiryTerms = 30;

/// Phi(t; 0) of the Airy family via alpha = a^{1/3} (real cube root, so
/// alpha < 0 for a < 0). a = 0 returns [[1, t^2/2], [0, 1]].
Matrix airy_phi(double a, double t, int terms = kDefaultAiryTerms);

/// A named closed-form case with its exact transition matrix Phi(t; t0).
struct ClosedFormCase {
  std::string name;
  double a = 0.0;
  PolyMatrix family;
  /// Exact Phi(t; t0). The closed forms are for t0 = 0; other start
  /// times use Phi(t; 0) Phi(t0; 0)^{-1}.
  std::function<Matrix(double t, double t0)> phi_exact;
};

ClosedFormCase example1_case(double a);
ClosedFormCase airy_case(double a, int terms = kDefaultAiryTerms);

// --- independent reference integrator --------------------------------------------

/// Classical fixed-step RK4 for x' = A x + b.
Vector rk4_reference(const CauchyProblem& p, double t, int steps);

/// Classical fixed-step RK4 for Phi' = A Phi, Phi(t0) = I.
Matrix rk4_transition(const MatrixFunction& a, double t0, double t, int steps);

// --- invariant checks -------------------------------------------------------------

inline constexpr int kDefaultGridPerStep = 101;

/// |det Phi(t; t0) - exp(int tr A)| / exp(int tr A), maximized over a grid of
/// `grid` points per step. Fails also if det Phi <= 0 anywhere.
CheckReport liouville_residual(const MatrixFunction& a, const TransitionResult& result,
                               int grid = kDefaultGridPerStep, double tolerance = 1e-9);

/// ||Phi(t; s) Phi(s; t0) - Phi(t; t0)|| with the three factors computed
/// independently at `engine_tol`. `tol` is the pass threshold.
CheckReport flow_residual(const MatrixFunction& a, double t0, double s, double t, double tol,
                          const SeriesOptions& opts = {}, double engine_tol = 1e-12);

/// ||Phi(t; s) Phi(s; t) - I||.
CheckReport inverse_residual(const MatrixFunction& a, double s, double t, double tol,
                             const SeriesOptions& opts = {}, double engine_tol = 1e-12);

/// max ||Phi(t) - I - int_{t0}^{t} A Phi|| over `grid` points per step, the
/// integral by composite Gauss-Legendre. Passes when the residual is at most
/// 10 x total_bound.
CheckReport volterra_residual(const MatrixFunction& a, const TransitionResult& result,
                              int grid = kDefaultGridPerStep, int quad_nodes = 40);

/// max over a grid of ||Phi(t) - reference(t)||.
CheckReport oracle_residual(const std::string& name, const TransitionResult& result,
                            const std::function<Matrix(double)>& reference, double tol,
                            int grid = kDefaultGridPerStep);

/// Derivative identity d/dt I_{n+1} = A I_n coefficient-wise,
/// relative to the coefficient scale. Returns the worst relative mismatch
/// over `count` terms.
double term_derivative_mismatch(const PolyMatrix& a, double step_start, int count, int degree_cap = 256);

}  // namespace pbs::verify
