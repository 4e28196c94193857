#include <cmath>
#include <random>

#include <doctest.h>

#include "pbs/errors.hpp"
#include "pbs/matrix_function.hpp"
#include "pbs/poly.hpp"
#include "test_support.hpp"

using namespace pbs;
using pbs::testing::linspace;

namespace {

void check_coeffs(const Poly& p, std::vector<double> expected, double tol = 0.0) {
  REQUIRE(p.coeffs().size() == expected.size());
  for (std::size_t k = 0; k < expected.size(); ++k) {
    if (tol == 0.0)
      CHECK(p.coeffs()[k] == expected[k]);
    else
      CHECK(p.coeffs()[k] == doctest::Approx(expected[k]).epsilon(tol));
  }
}

}  // namespace

TEST_CASE("Poly canonical form strips trailing zeros") {
  const Poly p({1.0, 2.0, 0.0, 0.0});
  CHECK(p.degree() == 1);
  const Poly zero({0.0, 0.0});
  CHECK(zero.is_zero());
  CHECK(zero.degree() == -1);
  CHECK(zero.coeffs().empty());
}

TEST_CASE("poly_integrate") {
  SUBCASE("constant") { check_coeffs(poly_integrate(Poly({1.0}), 0.0), {0.0, 1.0}); }
  SUBCASE("linear") { check_coeffs(poly_integrate(Poly({0.0, 1.0}), 0.0), {0.0, 0.0, 0.5}); }
  SUBCASE("lower limit shifts the constant") {
    // antiderivative t + t^2, minus its value 2 at t = 1
    const Poly q = poly_integrate(Poly({1.0, 2.0}), 1.0);
    check_coeffs(q, {-2.0, 1.0, 1.0});
    CHECK(q(1.0) == 0.0);
  }
  SUBCASE("keeps origin and raises degree") {
    const Poly q = poly_integrate(Poly({3.0, -1.0}, 2.5), 0.0);
    CHECK(q.origin() == 2.5);
    CHECK(q.degree() == 2);
  }
}

TEST_CASE("poly_integrate property: derivative recovers p and q(lower) = 0") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double origin = u(rng);
    const Poly p = pbs::testing::random_poly(rng, 6, origin);
    const double lower = u(rng);
    const Poly q = poly_integrate(p, lower);
    CHECK(std::abs(q(lower)) <= 1e-14 * (1.0 + q.abs_bound(std::abs(lower - origin))));
    const Poly dq = q.derivative();
    for (std::size_t k = 0; k < p.coeffs().size(); ++k) CHECK(dq.coeff(k) == doctest::Approx(p.coeff(k)).epsilon(1e-14));
  }
}

TEST_CASE("poly_mul") {
  check_coeffs(poly_mul(Poly({1.0, 1.0}), Poly({0.0, 1.0})), {0.0, 1.0, 1.0});
  CHECK(poly_mul(Poly(), Poly({1.0, 2.0, 3.0})).is_zero());
  check_coeffs(poly_mul(Poly({1.0, -1.0}), Poly({1.0, 1.0})), {1.0, 0.0, -1.0});
  CHECK_THROWS_AS(poly_mul(Poly({1.0}, 0.0), Poly({1.0}, 1.0)), OriginMismatch);
}

TEST_CASE("poly_mul is commutative and associative") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    const Poly a = pbs::testing::random_poly(rng, 5);
    const Poly b = pbs::testing::random_poly(rng, 5);
    const Poly c = pbs::testing::random_poly(rng, 5);
    const Poly ab = poly_mul(a, b);
    const Poly ba = poly_mul(b, a);
    const Poly abc1 = poly_mul(ab, c);
    const Poly abc2 = poly_mul(a, poly_mul(b, c));
    REQUIRE(ab.degree() == ba.degree());
    REQUIRE(abc1.degree() == abc2.degree());
    double scale = 0.0;
    for (double v : abc1.coeffs()) scale = std::max(scale, std::abs(v));
    for (std::size_t k = 0; k < ab.coeffs().size(); ++k) CHECK(std::abs(ab.coeff(k) - ba.coeff(k)) <= 1e-15);
    for (std::size_t k = 0; k < abc1.coeffs().size(); ++k)
      CHECK(std::abs(abc1.coeff(k) - abc2.coeff(k)) <= 1e-13 * std::max(scale, 1.0));
  }
}

TEST_CASE("coefficients below 1e-300 are flushed") {
  const Poly p = poly_mul(Poly({1e-200}), Poly({1e-200}));
  CHECK(p.is_zero());
}

TEST_CASE("recenter") {
  SUBCASE("same origin is the identity") {
    const Poly p({1.0, 2.0, 3.0}, 0.5);
    check_coeffs(recenter(p, 0.5), {1.0, 2.0, 3.0});
  }
  SUBCASE("t about 0 to 1") {
    const Poly q = recenter(Poly({0.0, 1.0}), 1.0);
    check_coeffs(q, {1.0, 1.0});
    CHECK(q.origin() == 1.0);
  }
  SUBCASE("t^2 about 0 to c") {
    const double c = 1.7;
    check_coeffs(recenter(Poly({0.0, 0.0, 1.0}), c), {c * c, 2.0 * c, 1.0}, 1e-15);
  }
}

TEST_CASE("recenter then evaluate equals evaluate") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 100; ++trial) {
    const PolyMatrix m = pbs::testing::random_family(rng, 3, 4, u(rng));
    const PolyMatrix r = recenter(m, u(rng));
    for (double t : linspace(-2.0, 2.0, 21)) {
      const Matrix mt = m(t);
      const Matrix diff = (mt - r(t)).cwiseAbs();
      for (Eigen::Index i = 0; i < diff.size(); ++i) CHECK(diff(i) <= 1e-11 * (1.0 + std::abs(mt(i))));
    }
  }
}

TEST_CASE("bound_sup_norm") {
  CHECK(bound_sup_norm(PolyMatrix(2, 0.0), Interval(0.0, 1.0)) == 0.0);

  Matrix c(2, 2);
  c << 1.0, 2.0, 0.0, 3.0;
  CHECK(bound_sup_norm(PolyMatrix(c, 0.0), Interval(-5.0, 7.0)) == 3.0);

  PolyMatrix m(2, 0.0);
  m.set(0, 0, Poly({1.0}));
  m.set(0, 1, Poly({0.0, 1.0}));
  m.set(1, 1, Poly({2.0}));
  CHECK(bound_sup_norm(m, Interval(0.0, 1.0)) == 2.0);
}

TEST_CASE("bound_sup_norm dominates the sampled sup norm") {
  std::mt19937_64 rng(14);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int trial = 0; trial < 300; ++trial) {
    const PolyMatrix m = pbs::testing::random_family(rng, 4, 3, u(rng));
    const double a = u(rng);
    const double b = u(rng);
    const Interval span = Interval::spanning(a, b);
    const double bound = bound_sup_norm(m, span);
    double sampled = 0.0;
    for (double t : linspace(span.lo, span.hi, 101)) sampled = std::max(sampled, norm_inf(m(t)));
    CHECK(bound >= sampled);
  }
}

TEST_CASE("PolyMatrix arithmetic rejects mixed origins") {
  CHECK_THROWS_AS(poly_mul(PolyMatrix::identity(2, 0.0), PolyMatrix::identity(2, 1.0)), OriginMismatch);
  PolyMatrix m(2, 0.0);
  CHECK_THROWS_AS(m.set(0, 0, Poly({1.0}, 3.0)), OriginMismatch);
  CHECK_THROWS(PolyMatrix(0, 0.0));
}

TEST_CASE("interpolate") {
  SUBCASE("constants are reproduced") {
    Matrix c(2, 2);
    c << 1.0, -2.0, 0.5, 3.0;
    const SampledMatrix f{[c](double) { return c; }, Interval(0.0, 4.0), 2};
    for (int degree : {0, 1, 5, 16}) {
      const PolyMatrix p = interpolate(f, Interval(1.0, 2.0), degree);
      CHECK(p.origin() == 1.5);
      for (double t : linspace(1.0, 2.0, 11)) CHECK(pbs::testing::max_abs_diff(p(t), c) <= 1e-13);
    }
  }
  SUBCASE("the triangular family is recovered exactly") {
    const double a = 0.7;
    const SampledMatrix f{[a](double t) {
                            Matrix m(2, 2);
                            m << 1.0, t, 0.0, a;
                            return m;
                          },
                          Interval(-1.0, 3.0), 2};
    for (int degree : {1, 2, 8}) {
      const PolyMatrix p = recenter(interpolate(f, Interval(0.0, 2.0), degree), 0.0);
      CHECK(p(0, 0).coeff(0) == doctest::Approx(1.0).epsilon(1e-13));
      CHECK(std::abs(p(0, 1).coeff(0)) <= 1e-12);
      CHECK(p(0, 1).coeff(1) == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(p(1, 1).coeff(0) == doctest::Approx(a).epsilon(1e-13));
      for (int k = 2; k <= p.degree(); ++k) CHECK(p.coefficient(k).cwiseAbs().maxCoeff() <= 1e-11);
    }
  }
  SUBCASE("sin on [0,1] at degree 9") {
    const SampledMatrix f{[](double t) { return Matrix::Constant(1, 1, std::sin(t)); }, Interval(0.0, 1.0), 1};
    const PolyMatrix p = interpolate(f, Interval(0.0, 1.0), 9);
    double worst = 0.0;
    for (double t : linspace(0.0, 1.0, 1001)) worst = std::max(worst, std::abs(p(t)(0, 0) - std::sin(t)));
    CHECK(worst < 1e-9);
  }
  SUBCASE("evaluator failure carries the node") {
    const SampledMatrix f{[](double t) -> Matrix {
                            if (t > 0.9) throw std::runtime_error("boom");
                            return Matrix::Identity(1, 1);
                          },
                          Interval(0.0, 1.0), 1};
    try {
      (void)interpolate(f, Interval(0.0, 1.0), 4);
      FAIL("expected EvaluationError");
    } catch (const EvaluationError& e) {
      CHECK(e.node() > 0.9);
    }
  }
  SUBCASE("interval outside the declared domain") {
    const SampledMatrix f{[](double) { return Matrix::Identity(1, 1); }, Interval(0.0, 1.0), 1};
    CHECK_THROWS_AS((void)interpolate(f, Interval(0.5, 1.5), 3), DomainError);
  }
}

TEST_CASE("interpolation is exact for random polynomial families") {
  std::mt19937_64 rng(15);
  for (int trial = 0; trial < 40; ++trial) {
    const PolyMatrix m = pbs::testing::random_family(rng, 3, 5, 0.0);
    const SampledMatrix f{[m](double t) { return m(t); }, Interval(-1.0, 1.0), 3};
    const PolyMatrix p = interpolate(f, Interval(-0.5, 0.75), 5);
    for (double t : linspace(-0.5, 0.75, 41)) CHECK(pbs::testing::max_abs_diff(p(t), m(t)) <= 1e-12);
  }
}

TEST_CASE("MatrixFunction variants") {
  PolyMatrix left(1, 0.0);
  left.set(0, 0, Poly({1.0}));
  PolyMatrix right(1, 1.0);
  right.set(0, 0, Poly({1.0, 2.0}, 1.0));
  const MatrixFunction pw(MatrixFunction::Piecewise{{Interval(0.0, 1.0), left}, {Interval(1.0, 2.0), right}});
  CHECK(pw.domain() == Interval(0.0, 2.0));
  CHECK(pw(0.5)(0, 0) == 1.0);
  CHECK(pw(1.5)(0, 0) == 2.0);
  CHECK(pw.breakpoints(Interval(0.0, 2.0)) == std::vector<double>{1.0});
  CHECK(pw.breakpoints(Interval(0.0, 1.0)).empty());
  CHECK_THROWS_AS((void)pw(2.5), DomainError);
  CHECK_THROWS_AS((void)pw.local_polynomial(Interval(0.5, 1.5), 0.5, 4), DomainError);

  CHECK_THROWS(MatrixFunction(MatrixFunction::Piecewise{{Interval(0.0, 1.0), left}, {Interval(1.5, 2.0), right}}));

  const MatrixFunction nan_eval(SampledMatrix{[](double) { return Matrix::Constant(1, 1, NAN); }, Interval(0.0, 1.0), 1});
  CHECK_THROWS_AS((void)nan_eval(0.5), EvaluationError);
}
