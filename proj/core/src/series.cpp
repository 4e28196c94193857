#include "pbs/series.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pbs/errors.hpp"

namespace pbs {

namespace {
constexpr double kTailSlack = 1e-12;
}  // namespace

SeriesTerm next_term(const PolyMatrix& a, const SeriesTerm& term, double step_start, int degree_cap) {
  PolyMatrix value = poly_integrate(poly_mul(a, term.value), step_start);
  const int next_index = term.index + 1;
  if (value.degree() > degree_cap) throw DegreeCapExceeded(degree_cap, next_index, value.degree());
  return {next_index, std::move(value)};
}

std::vector<SeriesTerm> series_terms(const PolyMatrix& a, double step_start, int count, int degree_cap) {
  std::vector<SeriesTerm> terms;
  terms.reserve(static_cast<std::size_t>(count) + 1);
  terms.push_back({0, PolyMatrix::identity(a.dim(), a.origin())});
  for (int n = 0; n < count; ++n) terms.push_back(next_term(a, terms.back(), step_start, degree_cap));
  return terms;
}

double tail_majorant(double mu, int order) {
  if (mu < 0.0) throw std::invalid_argument("mu must be non-negative");
  if (mu == 0.0) return 0.0;
  const double k = order + 1.0;
  return std::exp(k * std::log(mu) - std::lgamma(k + 1.0) + mu);
}

double exponential_tail(double mu, int order) {
  if (mu < 0.0) throw std::invalid_argument("mu must be non-negative");
  if (mu == 0.0) return 0.0;
  double k = order + 1.0;
  double term = std::exp(k * std::log(mu) - std::lgamma(k + 1.0));
  double sum = 0.0;
  // Once k > 2 mu the ratio of consecutive terms is below 1/2, so the
  // remainder after a term is at most that term; it is added at the end.
  for (int i = 0; i < 100000; ++i) {
    sum += term;
    term *= mu / (k + 1.0);
    k += 1.0;
    if (k > 2.0 * mu && term <= sum * 1e-17) break;
  }
  // The log/lgamma evaluation carries a relative error of a few ulps per
  // unit of k |log mu|; the slack keeps the result an upper bound, which is
  // attained for constant scalar A.
  return (sum + term) * (1.0 + kTailSlack);
}

int truncation_order(double mu, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  if (mu < 0.0 || !std::isfinite(mu)) throw std::invalid_argument("mu must be finite and non-negative");
  int order = 0;
  while (tail_majorant(mu, order) > tol) ++order;
  return order;
}

StepTransition transition_step(const PolyMatrix& a, double start, double end, double tol, int degree_cap) {
  const PolyMatrix local = recenter(a, start);
  const Interval span = Interval::spanning(start, end);
  const double mu = bound_sup_norm(local, span) * span.length();
  const int order = truncation_order(mu, tol);
  const auto terms = series_terms(local, start, order, degree_cap);

  PolyMatrix phi(local.dim(), start);
  for (auto it = terms.rbegin(); it != terms.rend(); ++it) phi += it->value;

  return {start, end, std::move(phi), order, mu, exponential_tail(mu, order)};
}

StepTransition transition_step(const PolyMatrix& a, const Interval& step, double tol, int degree_cap) {
  return transition_step(a, step.lo, step.hi, tol, degree_cap);
}

namespace {

/// Drops monomials above `cap` and returns a sup bound of what was dropped on `span`.
double truncate_degree(PolyMatrix& m, int cap, const Interval& span) {
  if (m.degree() <= cap) return 0.0;
  const double origin = m.origin();
  const double r = std::max(std::abs(span.lo - origin), std::abs(span.hi - origin));
  double dropped = 0.0;
  PolyMatrix kept(m.dim(), origin);
  for (int i = 0; i < m.dim(); ++i) {
    double row = 0.0;
    for (int j = 0; j < m.dim(); ++j) {
      const auto c = m(i, j).coeffs();
      if (static_cast<int>(c.size()) <= cap + 1) {
        kept.set(i, j, m(i, j));
        continue;
      }
      const auto head = static_cast<std::ptrdiff_t>(cap) + 1;
      kept.set(i, j, Poly(std::vector<double>(c.begin(), c.begin() + head), origin));
      row += Poly(std::vector<double>(c.begin() + head, c.end()), origin).abs_bound(r) * std::pow(r, head);
    }
    dropped = std::max(dropped, row);
  }
  m = std::move(kept);
  return dropped;
}

}  // namespace

StepTransition transition_step_truncated(const PolyMatrix& a, double start, double end, double tol, int degree_cap) {
  const PolyMatrix local = recenter(a, start);
  const Interval span = Interval::spanning(start, end);
  const double mu = bound_sup_norm(local, span) * span.length();
  const int order = truncation_order(mu, tol);

  // The error of a truncated term feeds the next one through int A, which
  // scales it by at most mu: E_{n+1} <= delta_{n+1} + mu E_n.
  std::vector<SeriesTerm> terms{{0, PolyMatrix::identity(local.dim(), start)}};
  double carried = 0.0;
  double dropped_total = 0.0;
  for (int n = 0; n < order; ++n) {
    PolyMatrix next = poly_integrate(poly_mul(local, terms.back().value), start);
    carried = truncate_degree(next, degree_cap, span) + mu * carried;
    dropped_total += carried;
    terms.push_back({n + 1, std::move(next)});
  }

  PolyMatrix phi(local.dim(), start);
  for (auto it = terms.rbegin(); it != terms.rend(); ++it) phi += it->value;
  return {start, end, std::move(phi), order, mu, exponential_tail(mu, order) + dropped_total};
}

// --- TransitionResult ------------------------------------------------------

TransitionResult::TransitionResult(double t0, double t_end, int dim, std::vector<StepTransition> steps)
    : t0_(t0), t_end_(t_end), dim_(dim), steps_(std::move(steps)) {
  Matrix entry = Matrix::Identity(dim, dim);
  double mu_sum = 0.0;
  double bound = 0.0;
  double expected_start = t0;
  for (const auto& s : steps_) {
    if (s.start != expected_start) throw std::invalid_argument("steps must tile the interval from t0");
    expected_start = s.end;
    entry_.push_back(entry);
    entry = s.phi(s.end) * entry;
    bound = bound * std::exp(s.mu) + s.tail_bound * std::exp(mu_sum);
    mu_sum += s.mu;
    prefix_bound_.push_back(bound);
  }
  if (!steps_.empty() && expected_start != t_end) throw std::invalid_argument("steps must end at t_end");
  total_bound_ = bound;
}

std::size_t TransitionResult::step_index(double t) const {
  if (!covered().contains(t)) throw DomainError("t = " + std::to_string(t) + " is outside the computed interval");
  if (steps_.empty()) throw DomainError("empty transition has no steps");
  const bool back = backward();
  // First step whose far end reaches t.
  auto it = std::partition_point(steps_.begin(), steps_.end(), [&](const StepTransition& s) {
    return back ? s.end > t : s.end < t;
  });
  if (it == steps_.end()) --it;
  return static_cast<std::size_t>(it - steps_.begin());
}

double TransitionResult::bound_at(double t) const {
  if (t == t0_ || steps_.empty()) {
    if (!covered().contains(t)) throw DomainError("t = " + std::to_string(t) + " is outside the computed interval");
    return 0.0;
  }
  return prefix_bound_[step_index(t)];
}

Matrix TransitionResult::operator()(double t) const {
  if (steps_.empty()) {
    if (t != t0_) throw DomainError("t = " + std::to_string(t) + " is outside the computed interval");
    return Matrix::Identity(dim_, dim_);
  }
  const std::size_t k = step_index(t);
  return steps_[k].phi(t) * entry_[k];
}

PolyMatrix TransitionResult::step_polynomial(std::size_t k) const {
  const auto& phi = steps_.at(k).phi;
  const Matrix& e = entry_.at(k);
  PolyMatrix out(dim_, phi.origin());
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) {
      Poly acc({}, phi.origin());
      for (int m = 0; m < dim_; ++m) acc += phi(i, m) * e(m, j);
      out.set(i, j, std::move(acc));
    }
  return out;
}

// --- planning and composition ----------------------------------------------

namespace {

/// Largest |h| <= |remaining| with bound(|h|) * |h| <= mu_max, for a polynomial
/// expanded about the step start.
double polynomial_step_length(const PolyMatrix& local, double start, double remaining, double mu_max) {
  const double dir = remaining < 0.0 ? -1.0 : 1.0;
  // Measured on the rounded end point, which is what the step will use.
  auto mu_of = [&](double h) {
    const Interval span = Interval::spanning(start, start + dir * h);
    return bound_sup_norm(local, span) * span.length();
  };
  const double full = std::abs(remaining);
  if (mu_of(full) <= mu_max) return full;
  double lo = 0.0;
  double hi = full;
  for (int i = 0; i < 200 && hi - lo > 1e-15 * full; ++i) {
    const double mid = 0.5 * (lo + hi);
    (mu_of(mid) <= mu_max ? lo : hi) = mid;
  }
  return lo;
}

}  // namespace

std::vector<PlannedStep> plan_steps(const MatrixFunction& a, double t0, double t, const SeriesOptions& opts) {
  if (!(opts.mu_max > 0.0)) throw std::invalid_argument("mu_max must be positive");
  const Interval span = Interval::spanning(t0, t);
  if (!a.domain().contains(span)) throw DomainError("requested interval lies outside the domain of A");

  std::vector<PlannedStep> plan;
  if (t == t0) return plan;

  // Segment ends in travel order; no step may cross a piece boundary.
  std::vector<double> cuts = a.breakpoints(span);
  if (t < t0) std::reverse(cuts.begin(), cuts.end());
  cuts.push_back(t);

  double s = t0;
  for (double seg_end : cuts) {
    const Interval seg = Interval::spanning(s, seg_end);
    while (s != seg_end) {
      const double remaining = seg_end - s;
      double h = std::abs(remaining);
      PolyMatrix local(a.dim(), s);
      if (a.is_sampled()) {
        for (;;) {
          const double e = std::abs(remaining) == h ? seg_end : s + std::copysign(h, remaining);
          const Interval piece = Interval::spanning(s, e);
          local = a.local_polynomial(piece, s, opts.sampled_degree);
          const double mu = bound_sup_norm(local, piece) * piece.length();
          if (mu <= opts.mu_max) break;
          h *= std::clamp(0.9 * opts.mu_max / mu, 0.1, 0.5);
          if (h < 1e-12 * (1.0 + std::abs(s))) throw Error("step size underflow while bounding a sampled family");
        }
      } else {
        local = a.local_polynomial(seg, s, opts.sampled_degree);
        h = polynomial_step_length(local, s, remaining, opts.mu_max);
        if (h <= 0.0) throw Error("step size underflow: ||A|| bound too large for mu_max");
      }
      const double e = h >= std::abs(remaining) ? seg_end : s + std::copysign(h, remaining);
      plan.push_back({s, e, std::move(local), a.is_sampled()});
      s = e;
    }
  }
  return plan;
}

TransitionResult transition(const MatrixFunction& a, double t0, double t, double tol, const SeriesOptions& opts) {
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  const auto plan = plan_steps(a, t0, t, opts);
  const double step_tol = tol / static_cast<double>(std::max<std::size_t>(1, plan.size()));
  std::vector<StepTransition> steps;
  steps.reserve(plan.size());
  for (const auto& p : plan)
    steps.push_back(p.interpolated ? transition_step_truncated(p.a, p.start, p.end, step_tol, opts.degree_cap)
                                   : transition_step(p.a, p.start, p.end, step_tol, opts.degree_cap));
  return TransitionResult(t0, t, a.dim(), std::move(steps));
}

}  // namespace pbs
