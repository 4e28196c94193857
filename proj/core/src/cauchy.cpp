#include "pbs/cauchy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

#include "pbs/errors.hpp"
#include "pbs/quadrature.hpp"

namespace pbs {

namespace {

constexpr double kMinRcond = 1e-12;

Interval intersect(const Interval& x, const Interval& y) {
  const double lo = std::max(x.lo, y.lo);
  const double hi = std::min(x.hi, y.hi);
  if (lo > hi) throw DomainError("domains of A and b do not overlap");
  return {lo, hi};
}

PolyMatrix block(const PolyMatrix& a, const PolyVector& b) {
  const int d = a.dim();
  PolyMatrix out(d + 1, a.origin());
  const PolyVector bb = recenter(b, a.origin());
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) out.set(i, j, a(i, j));
    out.set(i, d, bb.entries[static_cast<std::size_t>(i)]);
  }
  return out;
}

}  // namespace

void CauchyProblem::validate() const {
  if (!(tol > 0.0)) throw InputError("tol", "must be positive");
  if (!domain.contains(t0)) throw InputError("t0", "must lie inside the domain");
  if (!a.domain().contains(domain)) throw InputError("domain", "exceeds the domain of A");
  if (x0.size() != a.dim()) throw InputError("x0", "length must equal the dimension of A");
  if (b) {
    if (b->dim() != a.dim()) throw InputError("b", "length must equal the dimension of A");
    if (!b->domain().contains(domain)) throw InputError("domain", "exceeds the domain of b");
  }
}

MatrixFunction augment(const MatrixFunction& a, const VectorFunction& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("augment: dimensions of A and b differ");
  const int d = a.dim();
  const bool a_bounded = !a.is_polynomial();
  const bool b_bounded = !b.is_polynomial();
  if (a_bounded && b_bounded && a.domain() != b.domain()) throw DomainError("augment: A and b have different domains");

  if (a.is_polynomial() && b.is_polynomial()) return block(a.polynomial(), b.polynomial());

  const Interval dom = intersect(a.domain(), b.domain());
  if (a.is_sampled() || b.is_sampled()) {
    SampledMatrix s;
    s.dim = d + 1;
    s.domain = dom;
    s.evaluate = [a, b, d](double t) {
      Matrix m = Matrix::Zero(d + 1, d + 1);
      m.topLeftCorner(d, d) = a(t);
      m.topRightCorner(d, 1) = b(t);
      return m;
    };
    return s;
  }

  std::set<double> cuts{dom.lo, dom.hi};
  for (double c : a.breakpoints(dom)) cuts.insert(c);
  for (double c : b.breakpoints(dom)) cuts.insert(c);
  MatrixFunction::Piecewise pieces;
  for (auto it = cuts.begin(); std::next(it) != cuts.end(); ++it) {
    const Interval span(*it, *std::next(it));
    pieces.push_back({span, block(a.local_polynomial(span, span.lo, kDefaultSampledDegree),
                                  b.local_polynomial(span, span.lo))});
  }
  return pieces;
}

// --- Trajectory --------------------------------------------------------------

Trajectory::Trajectory(double t0, Vector x0, std::vector<Piece> pieces, double error_bound)
    : t0_(t0), x0_(std::move(x0)), pieces_(std::move(pieces)), error_bound_(error_bound) {}

const Trajectory::Piece& Trajectory::piece_at(double t) const {
  const Interval covered = Interval::spanning(t0_, t_end());
  if (pieces_.empty() || !covered.contains(t)) throw DomainError("t = " + std::to_string(t) + " is outside the trajectory");
  for (const auto& p : pieces_)
    if (Interval::spanning(p.start, p.end).contains(t)) return p;
  return pieces_.back();
}

Vector Trajectory::operator()(double t) const {
  if (t == t0_) return x0_;
  return piece_at(t).x(t);
}

double Trajectory::error_bound_at(double t) const {
  if (t == t0_) return 0.0;
  return piece_at(t).bound;
}

Vector Trajectory::derivative(double t) const {
  if (pieces_.empty()) throw DomainError("empty trajectory has no derivative");
  return piece_at(t).x.derivative()(t);
}

// --- solvers -----------------------------------------------------------------

Trajectory solve_trajectory(const CauchyProblem& p, double t) {
  p.validate();
  if (!p.domain.contains(t)) throw DomainError("t = " + std::to_string(t) + " is outside the problem domain");
  const int d = p.dim();

  Vector y0 = p.x0;
  std::optional<MatrixFunction> augmented;
  if (p.b) {
    augmented = augment(p.a, *p.b);
    y0.conservativeResize(d + 1);
    y0(d) = 1.0;
  }
  const MatrixFunction& family = augmented ? *augmented : p.a;
  const TransitionResult flow = transition(family, p.t0, t, p.tol, p.options);

  const double scale = 1.0 + norm_inf(p.x0);
  std::vector<Trajectory::Piece> pieces;
  for (std::size_t k = 0; k < flow.steps().size(); ++k) {
    const auto& step = flow.steps()[k];
    const Vector entry_state = flow.entry_factors()[k] * y0;
    auto comps = poly_apply(step.phi, entry_state);
    comps.resize(static_cast<std::size_t>(d));
    pieces.push_back({step.start, step.end, PolyVector{step.phi.origin(), std::move(comps)},
                      flow.bound_at(step.end) * scale});
  }
  return Trajectory(p.t0, p.x0, std::move(pieces), flow.total_bound() * scale);
}

Vector solve(const CauchyProblem& p, double t) { return solve_trajectory(p, t)(t); }

Vector solve_voc(const CauchyProblem& p, double t, int quad_nodes) {
  p.validate();
  if (quad_nodes < 2) throw std::invalid_argument("solve_voc needs at least 2 quadrature nodes");
  if (!p.domain.contains(t)) throw DomainError("t = " + std::to_string(t) + " is outside the problem domain");
  const TransitionResult flow = transition(p.a, p.t0, t, p.tol, p.options);
  if (!p.b || t == p.t0) return flow(t) * p.x0;

  const VectorFunction& b = *p.b;
  auto integrand = [&](double tau) -> Vector {
    const Matrix phi = flow(tau);
    const Eigen::PartialPivLU<Matrix> lu(phi);
    const double rcond = lu.rcond();
    if (!(rcond >= kMinRcond)) throw ConditioningError(tau, rcond);
    return lu.solve(b(tau));
  };

  Vector inner = p.x0;
  for (const auto& step : flow.steps()) {
    // Panels also break at the pieces of b so each panel integrand is smooth.
    std::vector<double> cuts = b.breakpoints(step.span());
    if (step.end < step.start) std::reverse(cuts.begin(), cuts.end());
    double lo = step.start;
    cuts.push_back(step.end);
    for (double hi : cuts) {
      inner += integrate_gauss(integrand, lo, hi, quad_nodes);
      lo = hi;
    }
  }
  return flow(t) * inner;
}

}  // namespace pbs
