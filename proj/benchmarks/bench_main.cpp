#include <benchmark/benchmark.h>

#include "rmi/config.hpp"
#include "rmi/denoiser.hpp"
#include "rmi/mitigation.hpp"
#include "rmi/rd_chain.hpp"
#include "rmi/sim.hpp"

namespace {

rmi::VictimRadarConfig desk_radar() { return rmi::desk_run_config().radar; }

void BM_FrameSynthesis(benchmark::State& state) {
  const auto cfg = rmi::desk_run_config();
  std::uint64_t seed = 1;
  for (auto _ : state) {
    auto frame = rmi::assemble_frame(rmi::sample_scenario(seed++, cfg.ranges), cfg.radar);
    benchmark::DoNotOptimize(frame.samples.data().data());
  }
}
BENCHMARK(BM_FrameSynthesis)->Unit(benchmark::kMillisecond);

void BM_RdMaps(benchmark::State& state) {
  const auto cfg = rmi::desk_run_config();
  const auto frame = rmi::assemble_frame(rmi::sample_scenario(7, cfg.ranges), cfg.radar);
  for (auto _ : state) {
    auto maps = rmi::rd_maps(frame.samples, frame.cfg);
    benchmark::DoNotOptimize(maps.data());
  }
}
BENCHMARK(BM_RdMaps)->Unit(benchmark::kMillisecond);

void BM_Imat(benchmark::State& state) {
  const auto cfg = rmi::desk_run_config();
  const auto frame = rmi::assemble_frame(rmi::sample_scenario(7, cfg.ranges), cfg.radar);
  for (auto _ : state) {
    auto out = rmi::imat(frame, cfg.imat);
    benchmark::DoNotOptimize(out.samples.data().data());
  }
}
BENCHMARK(BM_Imat)->Unit(benchmark::kMillisecond);

void BM_DenoiserForward(benchmark::State& state) {
  const auto radar = desk_radar();
  const auto spec = rmi::preset(state.range(0) == 0 ? "model-a" : "model-d");
  auto model = rmi::build_model(spec, 1);
  rmi::nn::Tensor x({1, 2, radar.n_fast, radar.m_slow}, 0.5);
  rmi::ForwardCache cache;
  model.forward_train(x, cache);
  for (auto _ : state) {
    auto y = model.forward(x);
    benchmark::DoNotOptimize(y.data().data());
  }
}
BENCHMARK(BM_DenoiserForward)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_DenoiserTrainStep(benchmark::State& state) {
  const auto radar = desk_radar();
  auto model = rmi::build_model(rmi::preset("model-a"), 1);
  rmi::nn::Tensor x({2, 2, radar.n_fast, radar.m_slow}, 0.5);
  std::vector<double> g(x.numel(), 1e-3);
  for (auto _ : state) {
    rmi::ForwardCache cache;
    model.zero_grad();
    auto y = model.forward_train(x, cache);
    model.backward(cache, g);
    benchmark::DoNotOptimize(y.data().data());
  }
}
BENCHMARK(BM_DenoiserTrainStep)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
