#include "pbs/poly.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pbs/errors.hpp"

namespace pbs {

Interval::Interval(double lo, double hi) : lo(lo), hi(hi) {
  if (!(lo <= hi)) throw DomainError("interval requires lo <= hi");
}

Interval Interval::spanning(double a, double b) { return a <= b ? Interval(a, b) : Interval(b, a); }

// --- Poly -------------------------------------------------------------------

Poly::Poly(std::vector<double> coeffs, double origin) : origin_(origin), coeffs_(std::move(coeffs)) {
  canonicalize();
}

Poly Poly::constant(double c, double origin) { return Poly({c}, origin); }

void Poly::canonicalize() {
  while (!coeffs_.empty() && coeffs_.back() == 0.0) coeffs_.pop_back();
}

void Poly::require_same_origin(const Poly& other) const {
  if (origin_ != other.origin_) throw OriginMismatch(origin_, other.origin_);
}

double Poly::operator()(double t) const {
  const double x = t - origin_;
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

Poly Poly::derivative() const {
  if (coeffs_.size() <= 1) return Poly({}, origin_);
  std::vector<double> d(coeffs_.size() - 1);
  for (std::size_t k = 1; k < coeffs_.size(); ++k) d[k - 1] = static_cast<double>(k) * coeffs_[k];
  return Poly(std::move(d), origin_);
}

double Poly::abs_bound(double r) const {
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * r + std::abs(*it);
  return acc;
}

Poly& Poly::operator+=(const Poly& rhs) {
  if (rhs.is_zero()) return *this;
  if (is_zero()) {
    origin_ = rhs.origin_;
    coeffs_ = rhs.coeffs_;
    return *this;
  }
  require_same_origin(rhs);
  if (coeffs_.size() < rhs.coeffs_.size()) coeffs_.resize(rhs.coeffs_.size(), 0.0);
  for (std::size_t k = 0; k < rhs.coeffs_.size(); ++k) coeffs_[k] += rhs.coeffs_[k];
  canonicalize();
  return *this;
}

Poly& Poly::operator-=(const Poly& rhs) {
  Poly neg = rhs;
  neg *= -1.0;
  return *this += neg;
}

Poly& Poly::operator*=(double s) {
  for (double& c : coeffs_) c *= s;
  canonicalize();
  return *this;
}

namespace {

void flush_tiny(std::vector<double>& c) {
  for (double& v : c)
    if (std::abs(v) < kFlushThreshold) v = 0.0;
}

}  // namespace

Poly poly_integrate(const Poly& p, double lower) {
  if (p.is_zero()) return Poly({}, p.origin());
  const auto c = p.coeffs();
  std::vector<double> q(c.size() + 1, 0.0);
  for (std::size_t k = 0; k < c.size(); ++k) q[k + 1] = c[k] / static_cast<double>(k + 1);
  flush_tiny(q);
  Poly result(std::move(q), p.origin());
  if (lower != p.origin()) result -= Poly::constant(result(lower), p.origin());
  return result;
}

Poly poly_mul(const Poly& p, const Poly& q) {
  if (p.origin() != q.origin()) throw OriginMismatch(p.origin(), q.origin());
  if (p.is_zero() || q.is_zero()) return Poly({}, p.origin());
  const auto a = p.coeffs();
  const auto b = q.coeffs();
  std::vector<double> c(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0.0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  }
  flush_tiny(c);
  return Poly(std::move(c), p.origin());
}

Poly recenter(const Poly& p, double new_origin) {
  if (new_origin == p.origin()) return p;
  const double shift = new_origin - p.origin();
  const auto c = p.coeffs();
  // Horner in the variable (t - new_origin) + shift.
  std::vector<double> acc;
  acc.reserve(c.size());
  for (auto it = c.rbegin(); it != c.rend(); ++it) {
    acc.push_back(0.0);
    for (std::size_t j = acc.size() - 1; j > 0; --j) acc[j] = acc[j - 1] + shift * acc[j];
    acc[0] = shift * acc[0] + *it;
  }
  return Poly(std::move(acc), new_origin);
}

// --- PolyMatrix -------------------------------------------------------------

PolyMatrix::PolyMatrix(int dim, double origin) : dim_(dim), origin_(origin) {
  if (dim < 1) throw std::invalid_argument("PolyMatrix dimension must be positive");
  entries_.assign(static_cast<std::size_t>(dim) * static_cast<std::size_t>(dim), Poly({}, origin));
}

PolyMatrix::PolyMatrix(const Matrix& m, double origin) : PolyMatrix(static_cast<int>(m.rows()), origin) {
  if (m.rows() != m.cols()) throw std::invalid_argument("PolyMatrix requires a square matrix");
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) entries_[index(i, j)] = Poly::constant(m(i, j), origin);
}

PolyMatrix PolyMatrix::identity(int dim, double origin) {
  return PolyMatrix(Matrix::Identity(dim, dim), origin);
}

PolyMatrix PolyMatrix::from_coefficients(std::span<const Matrix> coeffs, double origin) {
  if (coeffs.empty()) throw std::invalid_argument("from_coefficients needs at least one matrix");
  const int d = static_cast<int>(coeffs.front().rows());
  PolyMatrix out(d, origin);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      std::vector<double> c(coeffs.size());
      for (std::size_t k = 0; k < coeffs.size(); ++k) c[k] = coeffs[k](i, j);
      out.entries_[out.index(i, j)] = Poly(std::move(c), origin);
    }
  return out;
}

void PolyMatrix::set(int row, int col, Poly p) {
  if (!p.is_zero() && p.origin() != origin_) throw OriginMismatch(origin_, p.origin());
  entries_[index(row, col)] = p.is_zero() ? Poly({}, origin_) : std::move(p);
}

Matrix PolyMatrix::operator()(double t) const {
  Matrix m(dim_, dim_);
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) m(i, j) = entries_[index(i, j)](t);
  return m;
}

int PolyMatrix::degree() const {
  int d = -1;
  for (const auto& p : entries_) d = std::max(d, p.degree());
  return d;
}

Matrix PolyMatrix::coefficient(int k) const {
  Matrix m(dim_, dim_);
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) m(i, j) = entries_[index(i, j)].coeff(static_cast<std::size_t>(k));
  return m;
}

PolyMatrix PolyMatrix::derivative() const {
  PolyMatrix out(dim_, origin_);
  for (std::size_t k = 0; k < entries_.size(); ++k) out.entries_[k] = entries_[k].derivative();
  return out;
}

PolyMatrix& PolyMatrix::operator+=(const PolyMatrix& rhs) {
  if (rhs.dim_ != dim_) throw std::invalid_argument("PolyMatrix dimension mismatch");
  if (rhs.origin_ != origin_) throw OriginMismatch(origin_, rhs.origin_);
  for (std::size_t k = 0; k < entries_.size(); ++k) {
    entries_[k] += rhs.entries_[k];
    if (entries_[k].is_zero()) entries_[k] = Poly({}, origin_);
  }
  return *this;
}

PolyMatrix& PolyMatrix::operator-=(const PolyMatrix& rhs) {
  PolyMatrix neg = rhs;
  neg *= -1.0;
  return *this += neg;
}

PolyMatrix& PolyMatrix::operator*=(double s) {
  for (auto& p : entries_) p *= s;
  return *this;
}

PolyMatrix poly_mul(const PolyMatrix& lhs, const PolyMatrix& rhs) {
  if (lhs.dim() != rhs.dim()) throw std::invalid_argument("PolyMatrix dimension mismatch");
  if (lhs.origin() != rhs.origin()) throw OriginMismatch(lhs.origin(), rhs.origin());
  const int d = lhs.dim();
  PolyMatrix out(d, lhs.origin());
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      Poly acc({}, lhs.origin());
      for (int k = 0; k < d; ++k) acc += poly_mul(lhs(i, k), rhs(k, j));
      out.set(i, j, std::move(acc));
    }
  return out;
}

PolyMatrix poly_integrate(const PolyMatrix& m, double lower) {
  PolyMatrix out(m.dim(), m.origin());
  for (int i = 0; i < m.dim(); ++i)
    for (int j = 0; j < m.dim(); ++j) out.set(i, j, poly_integrate(m(i, j), lower));
  return out;
}

PolyMatrix recenter(const PolyMatrix& m, double new_origin) {
  PolyMatrix out(m.dim(), new_origin);
  for (int i = 0; i < m.dim(); ++i)
    for (int j = 0; j < m.dim(); ++j) out.set(i, j, recenter(m(i, j), new_origin));
  return out;
}

std::vector<Poly> poly_apply(const PolyMatrix& m, const Vector& x) {
  if (x.size() != m.dim()) throw std::invalid_argument("vector length does not match matrix dimension");
  std::vector<Poly> out;
  out.reserve(static_cast<std::size_t>(m.dim()));
  for (int i = 0; i < m.dim(); ++i) {
    Poly acc({}, m.origin());
    for (int j = 0; j < m.dim(); ++j) acc += m(i, j) * x(j);
    out.push_back(std::move(acc));
  }
  return out;
}

double bound_sup_norm(const PolyMatrix& m, const Interval& span) {
  const double r = std::max(std::abs(span.lo - m.origin()), std::abs(span.hi - m.origin()));
  double best = 0.0;
  for (int i = 0; i < m.dim(); ++i) {
    double row = 0.0;
    for (int j = 0; j < m.dim(); ++j) row += m(i, j).abs_bound(r);
    best = std::max(best, row);
  }
  return best;
}

}  // namespace pbs
