#pragma once

#include <vector>

namespace pbs {

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point rule (n >= 1), nodes by Newton iteration on P_n. Cached per n.
const GaussRule& gauss_legendre(int n);

/// Integral of f over [a, b] (b < a allowed) with `panels` equal panels of an
/// n-point rule. F must support `F + F` and `double * F`.
template <typename Fn>
auto integrate_gauss(Fn&& f, double a, double b, int n, int panels = 1) {
  const GaussRule& rule = gauss_legendre(n);
  const double width = (b - a) / panels;
  using Value = decltype(f(a));
  Value acc = 0.0 * f(a);
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * width;
    const double half = 0.5 * width;
    const double mid = lo + half;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) acc += (half * rule.weights[i]) * f(mid + half * rule.nodes[i]);
  }
  return acc;
}

}  // namespace pbs
