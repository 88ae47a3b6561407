#include <benchmark/benchmark.h>

#include "levygen/asymptotics.hpp"

using namespace levygen;

namespace {

Vector v1(double a) {
  Vector v(1);
  v[0] = a;
  return v;
}

LevyMeasureSpec tempered() {
  DensitySpec s;
  s.n = [](const Vector& y) { return std::exp(-std::abs(y[0])) / std::pow(std::abs(y[0]), 1.7); };
  s.singularity = 0.7;
  s.symmetric = true;
  s.description = "tempered 0.7";
  return LevyMeasureSpec::density(1, s);
}

void BM_ClosedFormSymbol(benchmark::State& st) {
  auto q = Symbol::relativistic(3, 1.0, 1.2);
  Vector x = Vector::Zero(3), xi = Vector::Ones(3);
  for (auto _ : st) {
    benchmark::DoNotOptimize(q(x, xi));
    xi[0] += 1e-9;
  }
}
BENCHMARK(BM_ClosedFormSymbol);

void BM_ExponentFromTriplet(benchmark::State& st) {
  auto t = LevyTriplet::pure_jump(LevyMeasureSpec::isotropic_power(1, c_alpha(0.5, 1), 0.5, 4.0));
  const double xi = static_cast<double>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(exponent_from_triplet(t, v1(xi)));
}
BENCHMARK(BM_ExponentFromTriplet)->Arg(1)->Arg(64)->Unit(benchmark::kMicrosecond);

void BM_FractionalLaplacian(benchmark::State& st) {
  auto f = catalog::gaussian(1);
  const double alpha = static_cast<double>(st.range(0)) / 10.0;
  for (auto _ : st) benchmark::DoNotOptimize(fractional_laplacian(f, v1(0.3), alpha));
}
BENCHMARK(BM_FractionalLaplacian)->Arg(5)->Arg(15)->Unit(benchmark::kMicrosecond);

void BM_SampleStable(benchmark::State& st) {
  LevySampler s(LevyTriplet::pure_jump(LevyMeasureSpec::isotropic_power(1, c_alpha(1.3, 1), 1.3)));
  Rng rng(1, 2, 3);
  for (auto _ : st) benchmark::DoNotOptimize(s.sample(0.01, rng));
}
BENCHMARK(BM_SampleStable);

void BM_SampleShells(benchmark::State& st) {
  LevySampler s(LevyTriplet::pure_jump(tempered()));
  Rng rng(1, 2, 3);
  for (auto _ : st) benchmark::DoNotOptimize(s.sample(0.01, rng));
  st.counters["rate"] = s.jump_rate();
}
BENCHMARK(BM_SampleShells);

void BM_SmallTimeMoment(benchmark::State& st) {
  auto model = ProcessModel::stable(1, 0.5);
  auto f = catalog::holder_gaussian(1, 0.8);
  const long n = st.range(0);
  for (auto _ : st) benchmark::DoNotOptimize(small_time_generalized_moment(model, f, v1(0.0), 1e-3, n, SeedPolicy{}, 9));
  st.SetItemsProcessed(st.iterations() * n);
}
BENCHMARK(BM_SmallTimeMoment)->Arg(1 << 14)->Unit(benchmark::kMillisecond);

void BM_StableLikePath(benchmark::State& st) {
  auto grid = std::vector<Vector>{v1(-1.0), v1(0.0), v1(1.0)};
  auto model = ProcessModel::stable_like(1, [](const Vector& x) { return 0.6 + 0.2 * std::sin(x[0]); }, grid);
  std::uint64_t i = 0;
  for (auto _ : st) benchmark::DoNotOptimize(simulate_path(model, v1(0.0), 1e-2, 1e-2 / 64, SeedPolicy{}, i++));
}
BENCHMARK(BM_StableLikePath)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
