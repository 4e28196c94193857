#pragma once

#include <functional>
#include <variant>
#include <vector>

#include "pbs/poly.hpp"

namespace pbs {

/// One polynomial piece of a piecewise family.
struct MatrixPiece {
  Interval span;
  PolyMatrix value;
};

/// A general continuous family, known only through point evaluation on a
/// declared interval.
struct SampledMatrix {
  std::function<Matrix(double)> evaluate;
  Interval domain;
  int dim = 1;
};

/// The user-facing coefficient family A(t).
///
/// Polynomial families are defined on the whole real line. Piecewise pieces
/// must be sorted, contiguous and non-overlapping; their union is the domain.
class MatrixFunction {
 public:
  using Piecewise = std::vector<MatrixPiece>;

  MatrixFunction(PolyMatrix poly);  // NOLINT(google-explicit-constructor)
  MatrixFunction(Piecewise pieces);  // NOLINT(google-explicit-constructor)
  MatrixFunction(SampledMatrix sampled);  // NOLINT(google-explicit-constructor)

  int dim() const { return dim_; }
  Interval domain() const;
  bool is_polynomial() const { return std::holds_alternative<PolyMatrix>(repr_); }
  bool is_piecewise() const { return std::holds_alternative<Piecewise>(repr_); }
  bool is_sampled() const { return std::holds_alternative<SampledMatrix>(repr_); }

  const PolyMatrix& polynomial() const { return std::get<PolyMatrix>(repr_); }
  const Piecewise& pieces() const { return std::get<Piecewise>(repr_); }
  const SampledMatrix& sampled() const { return std::get<SampledMatrix>(repr_); }

  /// Point evaluation. Throws DomainError outside the domain and
  /// EvaluationError if a sampled evaluator fails.
  Matrix operator()(double t) const;

  /// Break points strictly inside (lo, hi) where the polynomial representation
  /// changes. Empty unless piecewise.
  std::vector<double> breakpoints(const Interval& span) const;

  /// Polynomial representation valid on `span`, expanded about `origin`.
  /// `span` must lie inside one piece; sampled families are interpolated with
  /// `sampled_degree`.
  PolyMatrix local_polynomial(const Interval& span, double origin, int sampled_degree) const;

 private:
  std::variant<PolyMatrix, Piecewise, SampledMatrix> repr_;
  int dim_;
};

/// Entry-wise interpolant of a sampled family at `degree + 1` Chebyshev points
/// of the second kind on `span`, expanded about the midpoint of `span`.
PolyMatrix interpolate(const SampledMatrix& f, const Interval& span, int degree);

inline constexpr int kDefaultSampledDegree = 16;

// --- vector-valued families --------------------------------------------------

/// Polynomial vector sharing one origin.
struct PolyVector {
  double origin = 0.0;
  std::vector<Poly> entries;

  int dim() const { return static_cast<int>(entries.size()); }
  Vector operator()(double t) const;
  PolyVector derivative() const;
};

PolyVector recenter(const PolyVector& v, double new_origin);

struct VectorPiece {
  Interval span;
  PolyVector value;
};

struct SampledVector {
  std::function<Vector(double)> evaluate;
  Interval domain;
  int dim = 1;
};

/// The inhomogeneity b(t), with the same three representations as
/// MatrixFunction.
class VectorFunction {
 public:
  using Piecewise = std::vector<VectorPiece>;

  VectorFunction(PolyVector poly);  // NOLINT(google-explicit-constructor)
  VectorFunction(Piecewise pieces);  // NOLINT(google-explicit-constructor)
  VectorFunction(SampledVector sampled);  // NOLINT(google-explicit-constructor)

  int dim() const { return dim_; }
  Interval domain() const;
  bool is_polynomial() const { return std::holds_alternative<PolyVector>(repr_); }
  bool is_piecewise() const { return std::holds_alternative<Piecewise>(repr_); }
  bool is_sampled() const { return std::holds_alternative<SampledVector>(repr_); }

  const PolyVector& polynomial() const { return std::get<PolyVector>(repr_); }
  const Piecewise& pieces() const { return std::get<Piecewise>(repr_); }
  const SampledVector& sampled() const { return std::get<SampledVector>(repr_); }

  Vector operator()(double t) const;
  std::vector<double> breakpoints(const Interval& span) const;
  /// Polynomial representation on `span` about `origin`. Sampled families
  /// are not supported here (they are never polynomialized directly).
  PolyVector local_polynomial(const Interval& span, double origin) const;

 private:
  std::variant<PolyVector, Piecewise, SampledVector> repr_;
  int dim_;
};

}  // namespace pbs
