#include <benchmark/benchmark.h>

#include "kentsim/locality.hpp"

namespace {

namespace loc = kentsim::locality;

void BM_Audit(benchmark::State& state) {
  const auto m = loc::random_compliant_model(1, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(loc::audit(m));
  }
}
BENCHMARK(BM_Audit)->Arg(2)->Arg(64)->Arg(1024);

void BM_ObservableStats(benchmark::State& state) {
  const auto m = loc::random_compliant_model(1, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(loc::observable_stats(m));
  }
}
BENCHMARK(BM_ObservableStats)->Arg(2)->Arg(1024);

}  // namespace
