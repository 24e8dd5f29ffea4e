#include <cmath>
#include <numbers>

#include <benchmark/benchmark.h>

#include "msrimg/forward.hpp"
#include "msrimg/geometry.hpp"
#include "msrimg/imaging.hpp"
#include "msrimg/spectral.hpp"
#include "msrimg/specfun.hpp"

using namespace msrimg;

namespace {

constexpr double kPi = std::numbers::pi;

MsrMatrix sigma1_matrix(int directions, double lambda) {
  const ThinInclusion inc(catalog_curve("sigma1"), 0.015, 5.0, 5.0);
  return assemble_msr(make_directions(directions), 2.0 * kPi / lambda, inc);
}

void bm_bessel_j(benchmark::State& state) {
  const int order = static_cast<int>(state.range(0));
  double x = 0.0;
  for (auto _ : state) {
    x += 0.173;
    if (x > 60.0) x = 0.0;
    benchmark::DoNotOptimize(bessel_j(order, x));
  }
}
BENCHMARK(bm_bessel_j)->Arg(0)->Arg(1)->Arg(5);

void bm_quad_adaptive(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        quad_adaptive([](double w) { return w * std::pow(bessel_j(1, 0.4 * w), 2); }, 12.5, 21.0));
  }
}
BENCHMARK(bm_quad_adaptive);

void bm_assemble_msr(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(sigma1_matrix(n, 0.3));
}
BENCHMARK(bm_assemble_msr)->Arg(48)->Unit(benchmark::kMillisecond);

void bm_svd(benchmark::State& state) {
  const MsrMatrix k = sigma1_matrix(static_cast<int>(state.range(0)), 0.3);
  for (auto _ : state) benchmark::DoNotOptimize(svd(k));
}
BENCHMARK(bm_svd)->Arg(16)->Arg(48)->Unit(benchmark::kMillisecond);

void bm_subspace_terms(benchmark::State& state) {
  const MsrMatrix k = sigma1_matrix(48, 0.3);
  const SvdFactors f = svd(k);
  const ImageGrid grid = ImageGrid::square(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(subspace_terms(k, f, grid, SteeringConfig{}, 0.01));
}
BENCHMARK(bm_subspace_terms)->Arg(51)->Arg(101)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
