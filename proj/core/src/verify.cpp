#include "pbs/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "pbs/quadrature.hpp"

namespace pbs::verify {

namespace {

std::string describe_grid(int per_step, std::size_t steps) {
  std::ostringstream os;
  os << per_step << " points per step x " << steps << " steps";
  return os.str();
}

/// Equispaced points on every step of the result (endpoints included).
std::vector<double> step_grid(const TransitionResult& r, int per_step) {
  std::vector<double> pts;
  if (r.steps().empty()) return {r.t0()};
  const int n = std::max(per_step, 2);
  for (const auto& s : r.steps())
    for (int i = 0; i < n; ++i) pts.push_back(i == n - 1 ? s.end : s.start + (s.end - s.start) * i / (n - 1));
  return pts;
}

Matrix phi_between(const MatrixFunction& a, double from, double to, double tol, const SeriesOptions& opts) {
  if (from == to) return Matrix::Identity(a.dim(), a.dim());
  return transition(a, from, to, tol, opts).end_value();
}

}  // namespace

CheckReport CheckReport::make(std::string name, double residual, double tolerance, std::string grid) {
  return {std::move(name), residual, tolerance, residual <= tolerance, std::move(grid)};
}

// --- closed forms -----------------------------------------------------------------

double alpha_n(double a, int n) {
  double sum = 0.0;
  double power = 1.0;
  for (int l = 1; l <= n; ++l) {
    sum += l * power;
    power *= a;
  }
  return sum;
}

double pochhammer(double x, int k) {
  double p = 1.0;
  for (int i = 0; i < k; ++i) p *= x + i;
  return p;
}

PolyMatrix example1_family(double a) {
  PolyMatrix m(2, 0.0);
  m.set(0, 0, Poly::constant(1.0));
  m.set(0, 1, Poly({0.0, 1.0}));
  m.set(1, 1, Poly::constant(a));
  return m;
}

PolyMatrix airy_family(double a) {
  PolyMatrix m(2, 0.0);
  m.set(0, 1, Poly({0.0, 1.0}));
  m.set(1, 0, Poly::constant(a));
  return m;
}

Matrix example1_term(double a, int n, double t) {
  const double fact_n = std::tgamma(n + 1.0);
  Matrix m(2, 2);
  m << std::pow(t, n) / fact_n, std::pow(t, n + 1) / (fact_n * (n + 1)) * alpha_n(a, n),
      0.0, std::pow(a * t, n) / fact_n;
  return m;
}

double example1_f(double a, double t) {
  // With x = (a - 1) t the numerator is e^t (1 - e^x + x e^x) = e^t sum_{k>=2} (k - 1) x^k / k!,
  // which avoids the cancellation of the closed form near a = 1 (and gives t^2 e^t / 2 there).
  const double x = (a - 1.0) * t;
  if (std::abs(x) < 0.5) {
    double sum = 0.0;
    double power = 1.0 / 2.0;  // x^{k-2} / k! at k = 2
    for (int k = 2; k < 40; ++k) {
      sum += (k - 1) * power;
      power *= x / (k + 1);
    }
    return t * t * std::exp(t) * sum;
  }
  const double eat = std::exp(a * t);
  return (std::exp(t) - eat - (1.0 - a) * t * eat) / ((1.0 - a) * (1.0 - a));
}

Matrix example1_phi(double a, double t) {
  Matrix m(2, 2);
  m << std::exp(t), example1_f(a, t), 0.0, std::exp(a * t);
  return m;
}

AirySeries airy_series(double z, int terms) {
  if (terms < 1) throw std::invalid_argument("airy_series needs at least one term");
  const double z3 = z * z * z;
  AirySeries out;
  double u = 1.0;        // f summand, k = 0
  double v = 0.5 * z * z;  // f' summand, k = 1
  double w = z;          // g summand, k = 0
  double y = 1.0;        // g' summand, k = 0
  for (int k = 0; k < terms; ++k) {
    out.f += u;
    out.df += v;
    out.g += w;
    out.dg += y;
    out.last_term = std::max({std::abs(u), std::abs(v), std::abs(w), std::abs(y)});
    const double kk = k;
    u *= 3.0 * (1.0 / 3.0 + kk) * z3 / ((3 * kk + 1) * (3 * kk + 2) * (3 * kk + 3));
    v *= 3.0 * (1.0 / 3.0 + kk + 1) * z3 / ((3 * kk + 3) * (3 * kk + 4) * (3 * kk + 5));
    w *= 3.0 * (2.0 / 3.0 + kk) * z3 / ((3 * kk + 2) * (3 * kk + 3) * (3 * kk + 4));
    y *= 3.0 * (2.0 / 3.0 + kk) * z3 / ((3 * kk + 1) * (3 * kk + 2) * (3 * kk + 3));
  }
  return out;
}

Matrix airy_phi(double a, double t, int terms) {
  Matrix m(2, 2);
  if (a == 0.0) {
    m << 1.0, 0.5 * t * t, 0.0, 1.0;
    return m;
  }
  const double alpha = std::cbrt(a);
  const double alpha2 = alpha * alpha;
  const AirySeries s = airy_series(alpha * t, terms);
  m << s.dg, s.df / alpha2, alpha2 * s.g, s.f;
  return m;
}

ClosedFormCase example1_case(double a) {
  std::ostringstream name;
  name << "example1(a=" << a << ")";
  return {name.str(), a, example1_family(a), [a](double t, double t0) -> Matrix {
            if (t0 == 0.0) return example1_phi(a, t);
            return example1_phi(a, t) * example1_phi(a, t0).inverse();
          }};
}

ClosedFormCase airy_case(double a, int terms) {
  std::ostringstream name;
  name << "airy(a=" << a << ")";
  return {name.str(), a, airy_family(a), [a, terms](double t, double t0) -> Matrix {
            if (t0 == 0.0) return airy_phi(a, t, terms);
            return airy_phi(a, t, terms) * airy_phi(a, t0, terms).inverse();
          }};
}

// --- RK4 -----------------------------------------------------------------------------

Vector rk4_reference(const CauchyProblem& p, double t, int steps) {
  if (steps < 1) throw std::invalid_argument("rk4_reference needs at least one step");
  auto rhs = [&](double tau, const Vector& x) -> Vector {
    Vector dx = p.a(tau) * x;
    if (p.b) dx += (*p.b)(tau);
    return dx;
  };
  const double h = (t - p.t0) / steps;
  Vector x = p.x0;
  for (int i = 0; i < steps; ++i) {
    const double tau = p.t0 + i * h;
    const Vector k1 = rhs(tau, x);
    const Vector k2 = rhs(tau + 0.5 * h, x + 0.5 * h * k1);
    const Vector k3 = rhs(tau + 0.5 * h, x + 0.5 * h * k2);
    const Vector k4 = rhs(tau + h, x + h * k3);
    x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return x;
}

Matrix rk4_transition(const MatrixFunction& a, double t0, double t, int steps) {
  if (steps < 1) throw std::invalid_argument("rk4_transition needs at least one step");
  const double h = (t - t0) / steps;
  Matrix x = Matrix::Identity(a.dim(), a.dim());
  for (int i = 0; i < steps; ++i) {
    const double tau = t0 + i * h;
    const Matrix a_mid = a(tau + 0.5 * h);
    const Matrix k1 = a(tau) * x;
    const Matrix k2 = a_mid * (x + 0.5 * h * k1);
    const Matrix k3 = a_mid * (x + 0.5 * h * k2);
    const Matrix k4 = a(tau + h) * (x + h * k3);
    x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return x;
}

// --- checks ----------------------------------------------------------------------------

CheckReport liouville_residual(const MatrixFunction& a, const TransitionResult& result, int grid, double tolerance) {
  double worst = 0.0;
  double trace_before = 0.0;  // int_{t0}^{step start} tr A
  const int n = std::max(grid, 2);
  for (const auto& step : result.steps()) {
    std::function<double(double)> trace_from_start;
    if (a.is_sampled()) {
      trace_from_start = [&a, &step](double t) {
        return integrate_gauss([&a](double tau) { return a(tau).trace(); }, step.start, t, 40);
      };
    } else {
      const PolyMatrix local = a.local_polynomial(step.span(), step.start, kDefaultSampledDegree);
      Poly tr({}, step.start);
      for (int i = 0; i < local.dim(); ++i) tr += local(i, i);
      const Poly tr_int = poly_integrate(tr, step.start);
      trace_from_start = [tr_int](double t) { return tr_int(t); };
    }
    for (int i = 0; i < n; ++i) {
      const double t = i == n - 1 ? step.end : step.start + (step.end - step.start) * i / (n - 1);
      const double expected = std::exp(trace_before + trace_from_start(t));
      const double det = result(t).determinant();
      worst = std::max(worst, std::abs(det - expected) / expected);
      if (!(det > 0.0)) worst = std::max(worst, std::numeric_limits<double>::infinity());
    }
    trace_before += trace_from_start(step.end);
  }
  return CheckReport::make("liouville", worst, tolerance, describe_grid(n, result.steps().size()));
}

CheckReport flow_residual(const MatrixFunction& a, double t0, double s, double t, double tol,
                          const SeriesOptions& opts, double engine_tol) {
  const Matrix lhs = phi_between(a, s, t, engine_tol, opts) * phi_between(a, t0, s, engine_tol, opts);
  const Matrix rhs = phi_between(a, t0, t, engine_tol, opts);
  std::ostringstream grid;
  grid << "(t0, s, t) = (" << t0 << ", " << s << ", " << t << ")";
  return CheckReport::make("flow", norm_inf(lhs - rhs), tol, grid.str());
}

CheckReport inverse_residual(const MatrixFunction& a, double s, double t, double tol, const SeriesOptions& opts,
                             double engine_tol) {
  const Matrix prod = phi_between(a, s, t, engine_tol, opts) * phi_between(a, t, s, engine_tol, opts);
  std::ostringstream grid;
  grid << "(s, t) = (" << s << ", " << t << ")";
  return CheckReport::make("inverse", norm_inf(prod - Matrix::Identity(a.dim(), a.dim())), tol, grid.str());
}

CheckReport volterra_residual(const MatrixFunction& a, const TransitionResult& result, int grid, int quad_nodes) {
  const int d = result.dim();
  const Matrix id = Matrix::Identity(d, d);
  auto integrand = [&](double tau) -> Matrix { return a(tau) * result(tau); };
  double worst = 0.0;
  Matrix before = Matrix::Zero(d, d);  // int_{t0}^{step start} A Phi
  const int n = std::max(grid, 2);
  for (const auto& step : result.steps()) {
    for (int i = 0; i < n; ++i) {
      const double t = i == n - 1 ? step.end : step.start + (step.end - step.start) * i / (n - 1);
      const Matrix partial = t == step.start ? Matrix::Zero(d, d) : integrate_gauss(integrand, step.start, t, quad_nodes);
      worst = std::max(worst, norm_inf(result(t) - id - (before + partial)));
    }
    before += integrate_gauss(integrand, step.start, step.end, quad_nodes);
  }
  return CheckReport::make("volterra", worst, 10.0 * result.total_bound(), describe_grid(n, result.steps().size()));
}

CheckReport oracle_residual(const std::string& name, const TransitionResult& result,
                            const std::function<Matrix(double)>& reference, double tol, int grid) {
  double worst = 0.0;
  for (double t : step_grid(result, grid)) worst = std::max(worst, norm_inf(result(t) - reference(t)));
  return CheckReport::make(name, worst, tol, describe_grid(std::max(grid, 2), result.steps().size()));
}

double term_derivative_mismatch(const PolyMatrix& a, double step_start, int count, int degree_cap) {
  const PolyMatrix local = recenter(a, step_start);
  const auto terms = series_terms(local, step_start, count, degree_cap);
  double worst = 0.0;
  for (std::size_t n = 0; n + 1 < terms.size(); ++n) {
    const PolyMatrix lhs = terms[n + 1].value.derivative();
    const PolyMatrix rhs = poly_mul(local, terms[n].value);
    const int deg = std::max(lhs.degree(), rhs.degree());
    double scale = 0.0;
    for (int k = 0; k <= deg; ++k) scale = std::max(scale, rhs.coefficient(k).cwiseAbs().maxCoeff());
    if (scale == 0.0) scale = 1.0;
    for (int k = 0; k <= deg; ++k)
      worst = std::max(worst, (lhs.coefficient(k) - rhs.coefficient(k)).cwiseAbs().maxCoeff() / scale);
  }
  return worst;
}

}  // namespace pbs::verify
