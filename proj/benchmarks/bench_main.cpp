#include <benchmark/benchmark.h>

#include <random>

#include "asyncdfl/engine/config.hpp"
#include "asyncdfl/engine/engine.hpp"
#include "asyncdfl/learning/loss.hpp"
#include "asyncdfl/log.hpp"
#include "asyncdfl/wireless/radio.hpp"
#include "asyncdfl/wireless/schedule.hpp"

using namespace asyncdfl;

namespace {

void BM_SinrMatrix(benchmark::State& state) {
  WirelessConfig w;
  w.interference = InterferenceMode::HexRing;
  const auto env = make_environment(w, static_cast<std::size_t>(state.range(0)), 7);
  for (auto _ : state) benchmark::DoNotOptimize(sinr_matrix(env));
}
BENCHMARK(BM_SinrMatrix)->Arg(5)->Arg(15)->Arg(50);

void BM_AllocateBandwidth(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(3);
  std::lognormal_distribution<double> draw(0.5, 1.5);
  SinrMatrix m(n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t t = 0; t < n; ++t) {
      if (r != t) m.at(r, t) = draw(rng);
    }
  }
  for (auto _ : state) benchmark::DoNotOptimize(allocate_bandwidth(build_schedule(m, 1.0), m, 1e7));
}
BENCHMARK(BM_AllocateBandwidth)->Arg(5)->Arg(15)->Arg(50);

void BM_ProjectL1(benchmark::State& state) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> draw;
  ParameterVector x(static_cast<std::size_t>(state.range(0)));
  for (std::size_t k = 0; k < x.dim(); ++k) x[k] = draw(rng);
  const Regularizer reg{RegularizerKind::L1, 1.0};
  for (auto _ : state) benchmark::DoNotOptimize(project(reg, x));
}
BENCHMARK(BM_ProjectL1)->Arg(11)->Arg(1000)->Arg(100000);

// Whole logistic runs in delay mode; reported per iteration.
void BM_EngineIteration(benchmark::State& state) {
  log::set_quiet(true);
  SimConfig c;
  c.node_count = static_cast<std::size_t>(state.range(0));
  c.iteration_budget = 200;
  c.eta = 0.016;
  c.channel = ChannelMode::Delay;
  c.delay_gamma = 5;
  c.task.loss = LossKind::Logistic;
  for (auto _ : state) benchmark::DoNotOptimize(run(c));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(c.iteration_budget));
}
BENCHMARK(BM_EngineIteration)->Arg(5)->Arg(15)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
