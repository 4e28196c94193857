#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace pbs {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Closed time interval [lo, hi].
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  Interval() = default;
  Interval(double lo, double hi);

  double length() const { return hi - lo; }
  double midpoint() const { return 0.5 * (lo + hi); }
  bool contains(double t) const { return lo <= t && t <= hi; }
  bool contains(const Interval& other) const { return lo <= other.lo && other.hi <= hi; }

  /// Interval spanned by two endpoints in either order.
  static Interval spanning(double a, double b);

  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Real polynomial in the monomial basis of (t - origin). Coefficient k
/// multiplies (t - origin)^k. Trailing zeros are always stripped, so the zero
/// polynomial has no coefficients.
class Poly {
 public:
  Poly() = default;
  explicit Poly(std::vector<double> coeffs, double origin = 0.0);

  static Poly constant(double c, double origin = 0.0);

  double origin() const { return origin_; }
  std::span<const double> coeffs() const { return coeffs_; }
  double coeff(std::size_t k) const { return k < coeffs_.size() ? coeffs_[k] : 0.0; }

  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }

  /// Horner evaluation.
  double operator()(double t) const;

  Poly derivative() const;

  /// Sum of |c_k| r^k: bounds |p(t)| for |t - origin| <= r.
  double abs_bound(double r) const;

  Poly& operator+=(const Poly& rhs);
  Poly& operator-=(const Poly& rhs);
  Poly& operator*=(double s);

  friend Poly operator+(Poly lhs, const Poly& rhs) { return lhs += rhs; }
  friend Poly operator-(Poly lhs, const Poly& rhs) { return lhs -= rhs; }
  friend Poly operator*(Poly p, double s) { return p *= s; }
  friend Poly operator*(double s, Poly p) { return p *= s; }

 private:
  void canonicalize();
  void require_same_origin(const Poly& other) const;

  double origin_ = 0.0;
  std::vector<double> coeffs_;
};

/// Antiderivative q of p with q(lower) = 0, expanded about p's origin.
Poly poly_integrate(const Poly& p, double lower);

/// Exact coefficient convolution. Throws OriginMismatch if origins differ.
Poly poly_mul(const Poly& p, const Poly& q);

/// Same function expanded about a new origin (binomial shift).
Poly recenter(const Poly& p, double new_origin);

/// Coefficients below this magnitude are flushed to zero after products and
/// antiderivatives.
inline constexpr double kFlushThreshold = 1e-300;

/// Square d x d matrix of polynomials sharing one origin, stored row-major.
class PolyMatrix {
 public:
  PolyMatrix(int dim, double origin);
  /// Constant matrix.
  PolyMatrix(const Matrix& m, double origin);

  static PolyMatrix identity(int dim, double origin);
  /// Builds sum_k coeffs[k] (t - origin)^k.
  static PolyMatrix from_coefficients(std::span<const Matrix> coeffs, double origin);

  int dim() const { return dim_; }
  double origin() const { return origin_; }

  const Poly& operator()(int row, int col) const { return entries_[index(row, col)]; }
  void set(int row, int col, Poly p);

  Matrix operator()(double t) const;

  /// Largest entry degree, -1 for the zero matrix.
  int degree() const;
  /// Matrix of k-th coefficients.
  Matrix coefficient(int k) const;

  PolyMatrix derivative() const;

  PolyMatrix& operator+=(const PolyMatrix& rhs);
  PolyMatrix& operator-=(const PolyMatrix& rhs);
  PolyMatrix& operator*=(double s);
  friend PolyMatrix operator+(PolyMatrix lhs, const PolyMatrix& rhs) { return lhs += rhs; }
  friend PolyMatrix operator-(PolyMatrix lhs, const PolyMatrix& rhs) { return lhs -= rhs; }

 private:
  std::size_t index(int row, int col) const {
    return static_cast<std::size_t>(row) * static_cast<std::size_t>(dim_) +
           static_cast<std::size_t>(col);
  }

  int dim_;
  double origin_;
  std::vector<Poly> entries_;
};

PolyMatrix poly_mul(const PolyMatrix& lhs, const PolyMatrix& rhs);
PolyMatrix poly_integrate(const PolyMatrix& m, double lower);
PolyMatrix recenter(const PolyMatrix& m, double new_origin);

/// Polynomial matrix times a constant vector.
std::vector<Poly> poly_apply(const PolyMatrix& m, const Vector& x);

/// Upper bound of sup_{t in J} of the max-row-sum norm of M(t), from
/// coefficient magnitudes about M's origin.
double bound_sup_norm(const PolyMatrix& m, const Interval& span);

/// Max-row-sum (infinity) operator norm; the max-abs norm for vectors.
template <typename Derived>
double norm_inf(const Eigen::MatrixBase<Derived>& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().rowwise().sum().maxCoeff();
}

}  // namespace pbs
