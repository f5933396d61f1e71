#include <benchmark/benchmark.h>

#include "kentsim/pilot_wave.hpp"

namespace {

namespace mdl = kentsim::models;

void BM_GuidanceVelocity(benchmark::State& state) {
  const mdl::PWConfig cfg;
  const auto s = mdl::BellSettings::canonical();
  const mdl::GuidanceField field(cfg, s.a1, s.b1);
  double y = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(field.velocity(y, -0.3, 1.2));
    y += 1e-9;
  }
}
BENCHMARK(BM_GuidanceVelocity);

void BM_PwOutcome(benchmark::State& state) {
  const mdl::PWConfig cfg;
  const auto s = mdl::BellSettings::canonical();
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(mdl::pw_outcome(cfg, mdl::equilibrium_sample(cfg, 0, i++), s.a1, s.b1));
  }
}
BENCHMARK(BM_PwOutcome);

void BM_PwEvolve(benchmark::State& state) {
  const mdl::PWConfig cfg;
  const auto s = mdl::BellSettings::canonical();
  for (auto _ : state) {
    benchmark::DoNotOptimize(mdl::pw_evolve(cfg, {0.4, -0.7, 0.0}, s.a1, s.b1));
  }
}
BENCHMARK(BM_PwEvolve)->Unit(benchmark::kMillisecond);

}  // namespace
