#include <benchmark/benchmark.h>

#include "davnav/acoustics.hpp"
#include "davnav/soundbank.hpp"

namespace {

using namespace davnav;

void BM_RenderAndSpectrogram(benchmark::State& state) {
  const int rate = static_cast<int>(state.range(0));
  const auto bank = synthesize_bank(3, 4, rate, 1.0);
  const auto slice = step_slice(bank.assets().front(), 0, rate);
  const AcousticParams params;
  for (auto _ : state) {
    const auto frame = render_source(slice, rate, {0.6, 3.0}, params);
    benchmark::DoNotOptimize(compute_spectrogram(frame));
  }
}
BENCHMARK(BM_RenderAndSpectrogram)->Arg(16000)->Arg(44100);

void BM_SpectrogramOnly(benchmark::State& state) {
  const BinauralFrame frame = silent_frame(16000);
  for (auto _ : state) benchmark::DoNotOptimize(compute_spectrogram(frame));
}
BENCHMARK(BM_SpectrogramOnly);

}  // namespace
