#include "pbs/matrix_function.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "pbs/errors.hpp"

namespace pbs {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <typename Pieces>
void validate_pieces(const Pieces& pieces, const char* what) {
  if (pieces.empty()) throw std::invalid_argument(std::string(what) + ": no pieces");
  for (std::size_t i = 0; i + 1 < pieces.size(); ++i)
    if (pieces[i].span.hi != pieces[i + 1].span.lo)
      throw std::invalid_argument(std::string(what) + ": pieces must be contiguous and sorted");
  for (const auto& p : pieces)
    if (p.value.dim() != pieces.front().value.dim())
      throw std::invalid_argument(std::string(what) + ": pieces differ in dimension");
}

template <typename Pieces>
std::vector<double> interior_breaks(const Pieces& pieces, const Interval& span) {
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < pieces.size(); ++i) {
    const double b = pieces[i].span.hi;
    if (span.lo < b && b < span.hi) out.push_back(b);
  }
  return out;
}

/// Index of the piece containing `span`; throws if none does.
template <typename Pieces>
std::size_t find_piece(const Pieces& pieces, const Interval& span) {
  for (std::size_t i = 0; i < pieces.size(); ++i)
    if (pieces[i].span.contains(span)) return i;
  throw DomainError("interval [" + std::to_string(span.lo) + ", " + std::to_string(span.hi) +
                    "] is not contained in a single polynomial piece");
}

/// Index of the piece containing t, preferring the left piece at a shared
/// boundary.
template <typename Pieces>
std::size_t find_piece(const Pieces& pieces, double t) {
  for (std::size_t i = 0; i < pieces.size(); ++i)
    if (pieces[i].span.contains(t)) return i;
  throw DomainError("t = " + std::to_string(t) + " is outside the domain");
}

void check_finite(const Matrix& m, double t) {
  if (!m.allFinite()) throw EvaluationError(t, "evaluator returned non-finite values");
}

}  // namespace

// --- MatrixFunction ---------------------------------------------------------

MatrixFunction::MatrixFunction(PolyMatrix poly) : repr_(std::move(poly)), dim_(0) {
  dim_ = std::get<PolyMatrix>(repr_).dim();
}

MatrixFunction::MatrixFunction(Piecewise pieces) : repr_(std::move(pieces)), dim_(0) {
  const auto& p = std::get<Piecewise>(repr_);
  validate_pieces(p, "piecewise matrix function");
  dim_ = p.front().value.dim();
}

MatrixFunction::MatrixFunction(SampledMatrix sampled) : repr_(std::move(sampled)), dim_(0) {
  const auto& s = std::get<SampledMatrix>(repr_);
  if (!s.evaluate) throw std::invalid_argument("sampled matrix function needs an evaluator");
  if (!std::isfinite(s.domain.lo) || !std::isfinite(s.domain.hi))
    throw std::invalid_argument("sampled matrix function needs a finite domain");
  if (s.dim < 1) throw std::invalid_argument("sampled matrix function needs dim >= 1");
  dim_ = s.dim;
}

Interval MatrixFunction::domain() const {
  if (is_polynomial()) return {-kInf, kInf};
  if (is_piecewise()) return {pieces().front().span.lo, pieces().back().span.hi};
  return sampled().domain;
}

Matrix MatrixFunction::operator()(double t) const {
  if (is_polynomial()) return polynomial()(t);
  if (is_piecewise()) return pieces()[find_piece(pieces(), t)].value(t);
  if (!sampled().domain.contains(t)) throw DomainError("t = " + std::to_string(t) + " is outside the domain");
  Matrix m;
  try {
    m = sampled().evaluate(t);
  } catch (const EvaluationError&) {
    throw;
  } catch (const std::exception& e) {
    throw EvaluationError(t, e.what());
  }
  if (m.rows() != dim_ || m.cols() != dim_) throw EvaluationError(t, "evaluator returned wrong shape");
  check_finite(m, t);
  return m;
}

std::vector<double> MatrixFunction::breakpoints(const Interval& span) const {
  if (!is_piecewise()) return {};
  return interior_breaks(pieces(), span);
}

PolyMatrix MatrixFunction::local_polynomial(const Interval& span, double origin, int sampled_degree) const {
  if (!domain().contains(span)) throw DomainError("interval outside the domain of A");
  if (is_polynomial()) return recenter(polynomial(), origin);
  if (is_piecewise()) return recenter(pieces()[find_piece(pieces(), span)].value, origin);
  return recenter(interpolate(sampled(), span, sampled_degree), origin);
}

PolyMatrix interpolate(const SampledMatrix& f, const Interval& span, int degree) {
  if (degree < 0) throw std::invalid_argument("interpolation degree must be non-negative");
  if (!f.domain.contains(span)) throw DomainError("interpolation interval outside the declared domain");
  const MatrixFunction fn(f);
  const int d = f.dim;
  const double mid = span.midpoint();
  const double half = 0.5 * span.length();
  if (degree == 0 || half == 0.0) return PolyMatrix(fn(mid), mid);

  const int n = degree;
  std::vector<double> nodes(static_cast<std::size_t>(n) + 1);
  std::vector<Matrix> values;
  values.reserve(nodes.size());
  for (int j = 0; j <= n; ++j) {
    nodes[static_cast<std::size_t>(j)] = std::cos(std::numbers::pi * j / n);
    values.push_back(fn(mid + half * nodes[static_cast<std::size_t>(j)]));
  }

  // Chebyshev coefficients from the discrete cosine sums.
  std::vector<Matrix> cheb(static_cast<std::size_t>(n) + 1, Matrix::Zero(d, d));
  for (int k = 0; k <= n; ++k) {
    Matrix acc = Matrix::Zero(d, d);
    for (int j = 0; j <= n; ++j) {
      const double w = (j == 0 || j == n) ? 0.5 : 1.0;
      acc += w * std::cos(std::numbers::pi * k * j / n) * values[static_cast<std::size_t>(j)];
    }
    acc *= 2.0 / n;
    if (k == 0 || k == n) acc *= 0.5;
    cheb[static_cast<std::size_t>(k)] = acc;
  }

  // Monomial coefficients of T_k in x, then rescale x = (t - mid) / half.
  std::vector<Matrix> mono(static_cast<std::size_t>(n) + 1, Matrix::Zero(d, d));
  std::vector<double> t_prev{1.0};
  std::vector<double> t_cur{0.0, 1.0};
  for (int k = 0; k <= n; ++k) {
    const std::vector<double>& tk = (k == 0) ? t_prev : t_cur;
    for (std::size_t m = 0; m < tk.size(); ++m) mono[m] += tk[m] * cheb[static_cast<std::size_t>(k)];
    if (k >= 1) {
      std::vector<double> next(t_cur.size() + 1, 0.0);
      for (std::size_t m = 0; m < t_cur.size(); ++m) next[m + 1] += 2.0 * t_cur[m];
      for (std::size_t m = 0; m < t_prev.size(); ++m) next[m] -= t_prev[m];
      t_prev = std::move(t_cur);
      t_cur = std::move(next);
    }
  }
  double scale = 1.0;
  for (auto& m : mono) {
    m *= scale;
    scale /= half;
  }
  return PolyMatrix::from_coefficients(mono, mid);
}

// --- PolyVector / VectorFunction -------------------------------------------

Vector PolyVector::operator()(double t) const {
  Vector v(dim());
  for (int i = 0; i < dim(); ++i) v(i) = entries[static_cast<std::size_t>(i)](t);
  return v;
}

PolyVector PolyVector::derivative() const {
  PolyVector out{origin, {}};
  for (const auto& p : entries) out.entries.push_back(p.derivative());
  return out;
}

PolyVector recenter(const PolyVector& v, double new_origin) {
  PolyVector out{new_origin, {}};
  for (const auto& p : v.entries) out.entries.push_back(p.is_zero() ? Poly({}, new_origin) : recenter(p, new_origin));
  return out;
}

VectorFunction::VectorFunction(PolyVector poly) : repr_(std::move(poly)), dim_(0) {
  dim_ = std::get<PolyVector>(repr_).dim();
  if (dim_ < 1) throw std::invalid_argument("vector function needs dim >= 1");
}

VectorFunction::VectorFunction(Piecewise pieces) : repr_(std::move(pieces)), dim_(0) {
  const auto& p = std::get<Piecewise>(repr_);
  validate_pieces(p, "piecewise vector function");
  dim_ = p.front().value.dim();
}

VectorFunction::VectorFunction(SampledVector sampled) : repr_(std::move(sampled)), dim_(0) {
  const auto& s = std::get<SampledVector>(repr_);
  if (!s.evaluate) throw std::invalid_argument("sampled vector function needs an evaluator");
  if (!std::isfinite(s.domain.lo) || !std::isfinite(s.domain.hi))
    throw std::invalid_argument("sampled vector function needs a finite domain");
  dim_ = s.dim;
}

Interval VectorFunction::domain() const {
  if (is_polynomial()) return {-kInf, kInf};
  if (is_piecewise()) return {pieces().front().span.lo, pieces().back().span.hi};
  return sampled().domain;
}

Vector VectorFunction::operator()(double t) const {
  if (is_polynomial()) return polynomial()(t);
  if (is_piecewise()) return pieces()[find_piece(pieces(), t)].value(t);
  if (!sampled().domain.contains(t)) throw DomainError("t = " + std::to_string(t) + " is outside the domain");
  Vector v;
  try {
    v = sampled().evaluate(t);
  } catch (const std::exception& e) {
    throw EvaluationError(t, e.what());
  }
  if (v.size() != dim_) throw EvaluationError(t, "evaluator returned wrong length");
  if (!v.allFinite()) throw EvaluationError(t, "evaluator returned non-finite values");
  return v;
}

std::vector<double> VectorFunction::breakpoints(const Interval& span) const {
  if (!is_piecewise()) return {};
  return interior_breaks(pieces(), span);
}

PolyVector VectorFunction::local_polynomial(const Interval& span, double origin) const {
  if (!domain().contains(span)) throw DomainError("interval outside the domain of b");
  if (is_polynomial()) return recenter(polynomial(), origin);
  if (is_piecewise()) return recenter(pieces()[find_piece(pieces(), span)].value, origin);
  throw std::logic_error("sampled vector functions have no polynomial representation");
}

}  // namespace pbs
