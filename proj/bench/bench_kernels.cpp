// Serial reference paths against the OpenMP kernels.

#include <chrono>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include <benchmark/benchmark.h>
#include <fmt/format.h>

#include "fame/peaks.hpp"
#include "fame/sampler.hpp"
#include "fame/stats.hpp"
#include "fame/synth.hpp"

namespace {

using namespace fame;

Execution exec_of(const benchmark::State& state) {
  return state.range(0) == 0 ? Execution::Serial : Execution::Parallel;
}

void label(benchmark::State& state) { state.SetLabel(state.range(0) == 0 ? "serial" : "parallel"); }

const AnalysisWindow kWindow({1990, 1}, {2000, 1});

const std::vector<Timeline>& timelines() {
  static const std::vector<Timeline> t = [] {
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<int> n(1, 300), when(0, 3600), sec(0, 86399), mult(1, 9);
    std::vector<Timeline> out(20000);
    for (std::size_t i = 0; i < out.size(); ++i) {
      out[i].name = fmt::format("N{}", i);
      for (int k = n(rng); k > 0; --k) {
        out[i].events.push_back({midnight(kWindow.start() + std::chrono::days{when(rng)}) +
                                     std::chrono::seconds{sec(rng)},
                                 mult(rng)});
      }
      normalize(out[i]);
    }
    return out;
  }();
  return t;
}

void BM_DetectPeriods(benchmark::State& state) {
  const auto& t = timelines();
  const auto grid = WeekGrid::for_window(kWindow);
  const auto method = state.range(1) == 0 ? Method::Spike : Method::Continuity;
  for (auto _ : state) benchmark::DoNotOptimize(detect_periods(t, method, grid, exec_of(state)));
  label(state);
}
BENCHMARK(BM_DetectPeriods)->ArgsProduct({{0, 1}, {0, 1}})->ArgNames({"par", "continuity"})
    ->Unit(benchmark::kMillisecond);

std::vector<double> durations(std::size_t n) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> v(n);
  for (auto& d : v) d = std::round(7.0 * std::pow(1.0 - u(rng), -1.0 / 1.4));
  return v;
}

void BM_BootstrapMany(benchmark::State& state) {
  const auto v = durations(static_cast<std::size_t>(state.range(1)));
  const Statistic stats[] = {Statistic::quantile(0.5), Statistic::quantile(0.9), Statistic::quantile(0.99),
                             Statistic::power_law_alpha()};
  const BootstrapConfig cfg{2000, 0.99, 3};
  for (auto _ : state) benchmark::DoNotOptimize(bootstrap_many(v, stats, cfg, exec_of(state)));
  label(state);
}
BENCHMARK(BM_BootstrapMany)->ArgsProduct({{0, 1}, {1000, 20000}})->ArgNames({"par", "n"})
    ->Unit(benchmark::kMillisecond);

void BM_BootstrapReference(benchmark::State& state) {
  const auto v = durations(static_cast<std::size_t>(state.range(0)));
  const BootstrapConfig cfg{2000, 0.99, 3};
  for (auto _ : state) benchmark::DoNotOptimize(bootstrap_reference(v, Statistic::quantile(0.9), cfg));
}
BENCHMARK(BM_BootstrapReference)->Arg(1000)->Arg(20000)->ArgNames({"n"})->Unit(benchmark::kMillisecond);

synth::SynthSpec corpus_spec() {
  synth::SynthSpec spec{{}, {}, kWindow, 4};
  spec.volume.segments.push_back({kWindow.start(), kWindow.end(), 40});
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<int> start(0, 3400), length(2, 200);
  for (int i = 0; i < 2000; ++i) {
    const Date a = kWindow.start() + std::chrono::days{start(rng)};
    spec.profiles.push_back({fmt::format("N{}", i), {{a, a + std::chrono::days{length(rng)}, 0.05}}});
  }
  return spec;
}

void BM_GenerateCorpus(benchmark::State& state) {
  const auto spec = corpus_spec();
  for (auto _ : state) benchmark::DoNotOptimize(synth::generate_corpus(spec, exec_of(state)));
  label(state);
}
BENCHMARK(BM_GenerateCorpus)->Arg(0)->Arg(1)->ArgNames({"par"})->Unit(benchmark::kMillisecond);

void BM_SampleUniform(benchmark::State& state) {
  static const auto docs = synth::generate_corpus(corpus_spec());
  static const auto volumes = month_volumes(docs);
  const SamplerConfig cfg{1000, 5, UnderfullPolicy::DropMonth};
  for (auto _ : state) benchmark::DoNotOptimize(sample_uniform(docs, volumes, cfg, exec_of(state)));
  label(state);
}
BENCHMARK(BM_SampleUniform)->Arg(0)->Arg(1)->ArgNames({"par"})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
