#pragma once

#include "pbs/matrix_function.hpp"
#include "pbs/poly.hpp"

namespace pbs {

/// Constant d x d matrix (integrals of A and their exponentials).
using ConstMatrix = Matrix;

/// Exact test of [A(t), A(s)] = 0 for all t, s: every pair of coefficient
/// matrices of A must commute. `tol` is relative to the squared size of the
/// largest coefficient (at least 1).
bool is_commuting(const PolyMatrix& a, double tol = 1e-12);

/// Sampled test of the weaker condition [A(t), int_{J.lo}^{t} A] = 0 on a
/// 33-point grid over J. A grid verdict, not a proof.
bool is_weakly_commuting(const PolyMatrix& a, const Interval& span, double tol = 1e-12);

/// Grid version of the pointwise test [A(t), A(s)] = 0 for families without a
/// polynomial form (33 points, all pairs).
bool is_commuting_sampled(const MatrixFunction& a, const Interval& span, double tol = 1e-12);

/// int_{t0}^{t} A(tau) dtau, exact entry-wise.
ConstMatrix integral_of(const PolyMatrix& a, double t0, double t);

/// exp(M) by scaling and squaring around a truncated Taylor series whose
/// cutoff comes from the factorial tail majorant at `tol`.
ConstMatrix matrix_exp(const ConstMatrix& m, double tol = 1e-17);

/// exp(int_{t0}^{t} A). Valid when A commutes (strongly or weakly); the
/// caller is responsible for checking.
ConstMatrix transition_commuting(const PolyMatrix& a, double t0, double t, double tol = 1e-17);

/// Closed form for the inhomogeneous commuting case:
/// x(t) = E(t) (x0 + int_{t0}^{t} E(tau)^{-1} b(tau) dtau) with
/// E(t) = exp(int_{t0}^{t} A), where E(tau)^{-1} = exp(-int_{t0}^{tau} A).
/// The outer integral uses composite Gauss-Legendre with `panels` panels of
/// `nodes` points each.
Vector solve_commuting(const PolyMatrix& a, const VectorFunction* b, double t0, const Vector& x0, double t,
                       int panels = 16, int nodes = 20);

}  // namespace pbs
