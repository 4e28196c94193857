#include <cmath>

#include <benchmark/benchmark.h>

#include "pbs/cauchy.hpp"
#include "pbs/commuting.hpp"
#include "pbs/series.hpp"
#include "pbs/verify.hpp"

namespace {

// Tolerance as 10^-range(0).
void BM_TransitionAiry(benchmark::State& state) {
  const pbs::MatrixFunction a = pbs::verify::airy_family(1.0);
  const double tol = std::pow(10.0, -static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(pbs::transition(a, 0.0, 3.0, tol).end_value());
}
BENCHMARK(BM_TransitionAiry)->Arg(4)->Arg(8)->Arg(12)->Arg(14);

void BM_TransitionStep(benchmark::State& state) {
  const pbs::PolyMatrix a = pbs::verify::example1_family(0.5);
  for (auto _ : state) benchmark::DoNotOptimize(pbs::transition_step(a, 0.0, 0.5, 1e-12).phi.degree());
}
BENCHMARK(BM_TransitionStep);

void BM_TransitionSampled(benchmark::State& state) {
  const pbs::MatrixFunction a(pbs::SampledMatrix{
      [](double t) {
        pbs::Matrix m(2, 2);
        m << std::cos(t), 1.0, -1.0, std::sin(t);
        return m;
      },
      pbs::Interval(0.0, 4.0), 2});
  for (auto _ : state) benchmark::DoNotOptimize(pbs::transition(a, 0.0, 4.0, 1e-10).end_value());
}
BENCHMARK(BM_TransitionSampled);

void BM_CommutingFastPath(benchmark::State& state) {
  const pbs::PolyMatrix a = pbs::verify::example1_family(1.0);
  for (auto _ : state) benchmark::DoNotOptimize(pbs::transition_commuting(a, 0.0, 2.0));
}
BENCHMARK(BM_CommutingFastPath);

void BM_SolveInhomogeneous(benchmark::State& state) {
  pbs::CauchyProblem p{pbs::verify::airy_family(-1.0), std::nullopt, 0.0, pbs::Vector::Ones(2),
                       pbs::Interval(0.0, 2.0)};
  p.b = pbs::PolyVector{0.0, {pbs::Poly({1.0}), pbs::Poly({0.0, 1.0})}};
  for (auto _ : state) benchmark::DoNotOptimize(pbs::solve(p, 2.0));
}
BENCHMARK(BM_SolveInhomogeneous);

}  // namespace
BENCHMARK_MAIN();
