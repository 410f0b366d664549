#include <benchmark/benchmark.h>

#include "fracmv/analysis.hpp"
#include "fracmv/extension.hpp"
#include "fracmv/fraclap.hpp"
#include "fracmv/mvkernel.hpp"
#include "fracmv/numerics.hpp"
#include "fracmv/profile.hpp"

using namespace fracmv;

namespace {

const RadialKernelTable& table_n1() {
  static const RadialKernelTable t = build_table(Params::from_a(1, 0.0));
  return t;
}

void BM_GaussLegendre(benchmark::State& state) {
  const int count = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(gauss_legendre(count, 0.0, 1.0));
}
BENCHMARK(BM_GaussLegendre)->Arg(8)->Arg(32)->Arg(128);

void BM_GaussEvenWeight(benchmark::State& state) {
  const int count = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(gauss_even_weight(count, -0.5, 1.0));
}
BENCHMARK(BM_GaussEvenWeight)->Arg(8)->Arg(32)->Arg(128);

void BM_IntegrateBallWeighted(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int res = static_cast<int>(state.range(1));
  const auto g = [](const ExtPoint& X) { return std::exp(-X.x.norm2() - X.y * X.y); };
  for (auto _ : state)
    benchmark::DoNotOptimize(integrate_ball_weighted(g, {Point::zero(n), 0.0}, 1.0, -0.5, res));
}
BENCHMARK(BM_IntegrateBallWeighted)->Args({1, 64})->Args({1, 256})->Args({2, 32})->Unit(benchmark::kMillisecond);

void BM_Normalize(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(normalize(1, 0.5));
}
BENCHMARK(BM_Normalize)->Unit(benchmark::kMillisecond);

void BM_KernelRadial(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Params p = Params::from_a(n, 0.0);
  const BumpProfile prof = normalize(n, 0.0);
  const ExtensionKernel k(p);
  for (auto _ : state) benchmark::DoNotOptimize(kernel_radial(prof, k, 0.6));
}
BENCHMARK(BM_KernelRadial)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_TableLookup(benchmark::State& state) {
  const RadialKernelTable& t = table_n1();
  double rho = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(t.phi(rho));
    rho = rho > 20.0 ? 0.0 : rho + 0.013;
  }
}
BENCHMARK(BM_TableLookup);

void BM_PhiRConvolve(benchmark::State& state) {
  const RadialKernelTable& t = table_n1();
  const ScalarField f = ball_poisson_field(1, 0.5, 1);
  for (auto _ : state) benchmark::DoNotOptimize(phi_r_convolve(t, f, Point(0.2), 0.3));
}
BENCHMARK(BM_PhiRConvolve)->Unit(benchmark::kMillisecond);

void BM_GradientOfSolution(benchmark::State& state) {
  const RadialKernelTable& t = table_n1();
  const ScalarField f = ball_poisson_field(1, 0.5, 1);
  for (auto _ : state) benchmark::DoNotOptimize(gradient_of_solution(t, f, Point(0.2), 0.3));
}
BENCHMARK(BM_GradientOfSolution)->Unit(benchmark::kMillisecond);

void BM_Extend(benchmark::State& state) {
  const ExtensionKernel k(Params::from_s(1, 0.5));
  const ScalarField f = ball_poisson_field(1, 0.5, 1);
  for (auto _ : state) benchmark::DoNotOptimize(extend(k, f, Point(0.1), 0.2));
}
BENCHMARK(BM_Extend)->Unit(benchmark::kMicrosecond);

void BM_FracLap(benchmark::State& state) {
  const ScalarField f = ball_poisson_field(1, 0.5, 1);
  for (auto _ : state) benchmark::DoNotOptimize(frac_lap(f, Point(0.1), 0.5, 1e-6));
}
BENCHMARK(BM_FracLap)->Unit(benchmark::kMillisecond);

void BM_SharpMaximal(benchmark::State& state) {
  const ScalarField f = ball_poisson_field(1, 0.5, 1);
  for (auto _ : state) benchmark::DoNotOptimize(sharp_maximal(f, Point(0.1), 0.5));
}
BENCHMARK(BM_SharpMaximal)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
