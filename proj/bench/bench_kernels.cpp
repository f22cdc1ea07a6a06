// Serial reference kernels against their OpenMP versions. Thread count comes
// from ERGOPT_THREADS or the OpenMP runtime default.

#include <benchmark/benchmark.h>

#include <random>

#include "ergopt/kernels.hpp"
#include "ergopt/potential.hpp"

using namespace ergopt;

namespace {

std::vector<double> uniform(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = u(rng);
  return v;
}

template <bool Parallel>
void karp_step(benchmark::State& state) {
  const WordGraph wg(SubshiftSpec::full_shift(2), static_cast<int>(state.range(0)));
  const auto w = uniform(wg.edge_count(), 1), prev = uniform(wg.vertex_count(), 2);
  std::vector<double> next(wg.vertex_count());
  for (auto _ : state) {
    if constexpr (Parallel)
      kernels::parallel::karp_step(wg.digraph(), w, prev, next);
    else
      kernels::serial::karp_step(wg.digraph(), w, prev, next);
    benchmark::DoNotOptimize(next.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(wg.edge_count()));
}

template <bool Parallel>
void transfer_left(benchmark::State& state) {
  const WordGraph wg(SubshiftSpec::full_shift(2), static_cast<int>(state.range(0)));
  const auto m = uniform(wg.edge_count(), 3), x = uniform(wg.vertex_count(), 4);
  std::vector<double> y(wg.vertex_count());
  for (auto _ : state) {
    if constexpr (Parallel)
      kernels::parallel::transfer_left(wg.digraph(), m, x, y);
    else
      kernels::serial::transfer_left(wg.digraph(), m, x, y);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(wg.edge_count()));
}

template <bool Parallel>
void maxplus_closure(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(5);
  std::vector<double> base(n * n, -std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < n; ++i)
    for (int k = 0; k < 2; ++k) base[i * n + rng() % n] = -static_cast<double>(rng() % 1000) / 100.0;
  for (auto _ : state) {
    auto s = base;
    if constexpr (Parallel)
      kernels::parallel::maxplus_closure(s, n);
    else
      kernels::serial::maxplus_closure(s, n);
    benchmark::DoNotOptimize(s.data());
  }
}

template <bool Parallel>
void scan_period(benchmark::State& state) {
  const auto spec = SubshiftSpec::full_shift(2);
  const auto a = Potential::from_function(spec, 3, [](std::span<const Symbol> w) { return 0.3 * w[0] - 0.7 * w[1] * w[2]; });
  const auto codes = a.values_by_code();
  const kernels::CyclicScanInput in{&spec, 3, codes};
  const int p = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto r = Parallel ? kernels::parallel::scan_period(in, p, 1e-12) : kernels::serial::scan_period(in, p, 1e-12);
    benchmark::DoNotOptimize(r.best_mean);
  }
}

}  // namespace

BENCHMARK(karp_step<false>)->Arg(12)->Arg(16)->Arg(18);
BENCHMARK(karp_step<true>)->Arg(12)->Arg(16)->Arg(18);
BENCHMARK(transfer_left<false>)->Arg(12)->Arg(16)->Arg(18);
BENCHMARK(transfer_left<true>)->Arg(12)->Arg(16)->Arg(18);
BENCHMARK(maxplus_closure<false>)->Arg(128)->Arg(512);
BENCHMARK(maxplus_closure<true>)->Arg(128)->Arg(512);
BENCHMARK(scan_period<false>)->Arg(14)->Arg(18);
BENCHMARK(scan_period<true>)->Arg(14)->Arg(18);

int main(int argc, char** argv) {
  kernels::configure_threads_from_env();
  benchmark::Initialize(&argc, argv);
  if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return 0;
}
