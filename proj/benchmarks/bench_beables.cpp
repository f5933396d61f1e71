#include <benchmark/benchmark.h>

#include "kentsim/beables.hpp"

namespace {

namespace tq = kentsim::toyqm;
namespace bb = kentsim::beables;

void BM_BeableField(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const tq::BranchSet bs =
      tq::build_single_system(tq::ToyConfig::single_system(0.6, 0.8, 0, 4, 5, 100));
  const tq::FinalCondition fc = tq::enumerate_worlds(bs)[0];
  const bb::GridSpec grid{0.5, 99.5, n, -4.0, 8.0, n};
  for (auto _ : state) {
    benchmark::DoNotOptimize(bb::beable_field(bs, fc, grid));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n * n));
}
BENCHMARK(BM_BeableField)->Arg(50)->Arg(200);

void BM_BoostedBeable(benchmark::State& state) {
  const tq::BranchSet bs =
      tq::build_single_system(tq::ToyConfig::single_system(0.6, 0.8, 0, 4, 5, 100));
  const kentsim::spacetime::Boost boost(0.7);
  const tq::BranchSet moved = tq::boosted(bs, boost);
  const tq::FinalCondition fc = tq::boosted(tq::enumerate_worlds(bs)[0], boost);
  const auto y = kentsim::spacetime::boost_event({3.0, 0.0}, boost);
  for (auto _ : state) {
    benchmark::DoNotOptimize(bb::beable_energy_density(moved, fc, y));
  }
}
BENCHMARK(BM_BoostedBeable);

void BM_RegimeTable(benchmark::State& state) {
  const auto cfg = tq::ToyConfig::single_system(0.6, 0.8, 0, 4, 5, 100);
  for (auto _ : state) {
    benchmark::DoNotOptimize(bb::regime_table(cfg, 1));
  }
}
BENCHMARK(BM_RegimeTable);

}  // namespace
