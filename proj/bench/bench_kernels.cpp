// Serial reference vs OpenMP for the batch kernels. Arg 0 = serial, 1 = OpenMP.

#include <benchmark/benchmark.h>

#include "nanostore/kernels.hpp"

using namespace nanostore;

namespace {

kernels::Backend backend_of(const benchmark::State& st) {
  return st.range(0) == 0 ? kernels::Backend::Serial : kernels::Backend::OpenMP;
}

void BM_DrawEvents(benchmark::State& st) {
  const ChannelParams p;
  const MoleculeSpec m = MoleculeSpec::parse("(AC)60");
  for (auto _ : st) {
    benchmark::DoNotOptimize(kernels::draw_events(m, p, 20000, 1, {}, backend_of(st)));
  }
}

void BM_SegmentIntervals(benchmark::State& st) {
  const ChannelParams p;
  Rng rng(2);
  const auto sim = simulate_trace(p, 2.0, MoleculeSpec::parse("A50C100"), rng);
  const double base = estimate_baseline(sim.trace);
  const auto iv = detect_events(sim.trace, base, DetectorConfig{});
  for (auto _ : st) {
    benchmark::DoNotOptimize(
        kernels::segment_intervals(sim.trace, iv, base, DetectorConfig{}, backend_of(st)));
  }
  st.counters["events"] = static_cast<double>(iv.size());
}

void BM_RunTrials(benchmark::State& st) {
  const ChannelParams p;
  const MoleculeSpec m = MoleculeSpec::parse("A50C100");
  for (auto _ : st) {
    benchmark::DoNotOptimize(
        kernels::run_trials(p, std::span(&m, 1), 8, 0.25, 3, {}, DetectorConfig{}, backend_of(st)));
  }
}

void BM_BestSplit(benchmark::State& st) {
  Rng rng(4);
  std::normal_distribution<float> g(60.0f, 5.0f);
  std::vector<float> x(static_cast<std::size_t>(st.range(0)));
  for (auto& v : x) v = g(rng);
  for (auto _ : st) benchmark::DoNotOptimize(best_split(x, 2));
}

void BM_BestSplitReference(benchmark::State& st) {
  Rng rng(4);
  std::normal_distribution<float> g(60.0f, 5.0f);
  std::vector<float> x(static_cast<std::size_t>(st.range(0)));
  for (auto& v : x) v = g(rng);
  for (auto _ : st) benchmark::DoNotOptimize(kernels::best_split_reference(x, 2));
}

}  // namespace

BENCHMARK(BM_DrawEvents)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SegmentIntervals)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RunTrials)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BestSplit)->Arg(75)->Arg(1000);
BENCHMARK(BM_BestSplitReference)->Arg(75)->Arg(1000);

BENCHMARK_MAIN();
