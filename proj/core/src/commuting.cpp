#include "pbs/commuting.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pbs/quadrature.hpp"
#include "pbs/series.hpp"

namespace pbs {

namespace {

constexpr int kCommutatorGrid = 33;

double commutator_norm(const Matrix& x, const Matrix& y) { return norm_inf(x * y - y * x); }

std::vector<double> grid(const Interval& span, int points) {
  std::vector<double> g(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i)
    g[static_cast<std::size_t>(i)] = span.lo + span.length() * i / (points - 1);
  return g;
}

}  // namespace

bool is_commuting(const PolyMatrix& a, double tol) {
  const int deg = a.degree();
  std::vector<Matrix> coeffs;
  double scale = 1.0;
  for (int k = 0; k <= deg; ++k) {
    coeffs.push_back(a.coefficient(k));
    scale = std::max(scale, norm_inf(coeffs.back()));
  }
  const double limit = tol * scale * scale;
  for (std::size_t i = 0; i < coeffs.size(); ++i)
    for (std::size_t j = i + 1; j < coeffs.size(); ++j)
      if (commutator_norm(coeffs[i], coeffs[j]) > limit) return false;
  return true;
}

bool is_weakly_commuting(const PolyMatrix& a, const Interval& span, double tol) {
  const PolyMatrix integral = poly_integrate(a, span.lo);
  for (double t : grid(span, kCommutatorGrid)) {
    const Matrix at = a(t);
    const Matrix it = integral(t);
    const double scale = std::max(1.0, norm_inf(at) * norm_inf(it));
    if (commutator_norm(at, it) > tol * scale) return false;
  }
  return true;
}

bool is_commuting_sampled(const MatrixFunction& a, const Interval& span, double tol) {
  std::vector<Matrix> values;
  for (double t : grid(span, kCommutatorGrid)) values.push_back(a(t));
  for (std::size_t i = 0; i < values.size(); ++i)
    for (std::size_t j = i + 1; j < values.size(); ++j) {
      const double scale = std::max(1.0, norm_inf(values[i]) * norm_inf(values[j]));
      if (commutator_norm(values[i], values[j]) > tol * scale) return false;
    }
  return true;
}

ConstMatrix integral_of(const PolyMatrix& a, double t0, double t) { return poly_integrate(a, t0)(t); }

ConstMatrix matrix_exp(const ConstMatrix& m, double tol) {
  if (m.rows() != m.cols()) throw std::invalid_argument("matrix_exp needs a square matrix");
  if (!m.allFinite()) throw std::invalid_argument("matrix_exp needs finite entries");
  const auto d = m.rows();
  const Matrix id = Matrix::Identity(d, d);
  const double norm = norm_inf(m);
  if (norm == 0.0) return id;

  int squarings = 0;
  if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  const Matrix x = std::ldexp(1.0, -squarings) * m;
  const int order = std::max(1, truncation_order(norm_inf(x), tol));

  // Horner form of sum_{k<=order} x^k / k!.
  Matrix e = id;
  for (int k = order; k >= 1; --k) e = id + (x * e) / static_cast<double>(k);
  for (int i = 0; i < squarings; ++i) e = e * e;
  return e;
}

ConstMatrix transition_commuting(const PolyMatrix& a, double t0, double t, double tol) {
  return matrix_exp(integral_of(a, t0, t), tol);
}

Vector solve_commuting(const PolyMatrix& a, const VectorFunction* b, double t0, const Vector& x0, double t,
                       int panels, int nodes) {
  const PolyMatrix integral = poly_integrate(a, t0);
  Vector inner = x0;
  if (b != nullptr && t != t0) {
    inner += integrate_gauss([&](double tau) -> Vector { return matrix_exp(-integral(tau)) * (*b)(tau); }, t0, t,
                             nodes, panels);
  }
  return matrix_exp(integral(t)) * inner;
}

}  // namespace pbs
