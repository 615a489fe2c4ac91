#include <benchmark/benchmark.h>

#include <memory>

#include "davnav/engine.hpp"

namespace {

using namespace davnav;

void BM_EngineStep(benchmark::State& state) {
  EpisodeConfig cfg;
  cfg.map = std::make_shared<const GridMap>(generate_map(5, {}));
  cfg.bank = std::make_shared<const SoundBank>(synthesize_bank(2, 6, 16000, 2.0));
  cfg.target_sound = cfg.bank->assets().front().id;
  for (const auto& a : cfg.bank->assets()) cfg.audio_pool.push_back(a.id);
  cfg.start = {cfg.map->free_cells().front(), Heading::North};
  cfg.scenario.complex_enabled = state.range(0) != 0;
  cfg.step_limit = 1 << 30;
  Engine engine(cfg);
  engine.reset();
  const RawAction cycle[] = {RawAction::Forward, RawAction::RotateLeft, RawAction::Forward,
                             RawAction::RotateRight};
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(engine.step_raw(cycle[i++ % 4]));
}
BENCHMARK(BM_EngineStep)->Arg(0)->Arg(1);

}  // namespace
