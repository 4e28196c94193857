#pragma once

#include <random>
#include <vector>

#include "pbs/poly.hpp"

namespace pbs::testing {

/// Random polynomial family: dim x dim, entry degree <= max_degree,
/// coefficients uniform in [-1, 1], about `origin`.
inline PolyMatrix random_family(std::mt19937_64& rng, int dim, int max_degree, double origin = 0.0) {
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  std::uniform_int_distribution<int> deg(0, max_degree);
  PolyMatrix m(dim, origin);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      std::vector<double> c(static_cast<std::size_t>(deg(rng)) + 1);
      for (double& v : c) v = coef(rng);
      m.set(i, j, Poly(std::move(c), origin));
    }
  return m;
}

inline Poly random_poly(std::mt19937_64& rng, int max_degree, double origin = 0.0) {
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  std::uniform_int_distribution<int> deg(0, max_degree);
  std::vector<double> c(static_cast<std::size_t>(deg(rng)) + 1);
  for (double& v : c) v = coef(rng);
  return Poly(std::move(c), origin);
}

inline std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> g(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) g[static_cast<std::size_t>(i)] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
  return g;
}

inline double max_abs_diff(const Matrix& a, const Matrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace pbs::testing
