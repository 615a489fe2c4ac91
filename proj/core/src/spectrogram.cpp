#include <fftw3.h>

#include <cmath>
#include <complex>
#include <memory>
#include <mutex>
#include <numbers>

#include "davnav/acoustics.hpp"

namespace davnav {

namespace {

constexpr int kBins = kStftWindow / 2 + 1;

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};
using RealBuffer = std::unique_ptr<double[], FftwFree>;
using ComplexBuffer = std::unique_ptr<fftw_complex[], FftwFree>;

RealBuffer alloc_real(std::size_t n) {
  return RealBuffer(static_cast<double*>(fftw_malloc(sizeof(double) * n)));
}
ComplexBuffer alloc_complex(std::size_t n) {
  return ComplexBuffer(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n)));
}

// The planner is not thread-safe; executing an existing plan on new arrays is.
fftw_plan stft_plan() {
  static std::once_flag once;
  static fftw_plan plan = nullptr;
  std::call_once(once, [] {
    auto in = alloc_real(kStftWindow);
    auto out = alloc_complex(kBins);
    plan = fftw_plan_dft_r2c_1d(kStftWindow, in.get(), out.get(), FFTW_ESTIMATE);
  });
  return plan;
}

const std::vector<double>& hann_window() {
  static const std::vector<double> w = [] {
    std::vector<double> v(kStftWindow);
    for (int n = 0; n < kStftWindow; ++n) {
      v[static_cast<std::size_t>(n)] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * n / kStftWindow);
    }
    return v;
  }();
  return w;
}

// Magnitudes [frame][bin] of the centered STFT.
std::vector<double> stft_magnitude(const std::vector<float>& x, int frames) {
  const int n = static_cast<int>(x.size());
  constexpr int pad = kStftWindow / 2;
  auto reflect = [&](int i) -> double {
    if (i < 0) i = -i;
    if (i >= n) i = 2 * (n - 1) - i;
    return x[static_cast<std::size_t>(i)];
  };

  const auto& window = hann_window();
  auto in = alloc_real(kStftWindow);
  auto out = alloc_complex(kBins);
  std::vector<double> mag(static_cast<std::size_t>(frames) * kBins);
  for (int t = 0; t < frames; ++t) {
    const int start = t * kStftHop - pad;
    for (int k = 0; k < kStftWindow; ++k) {
      in[static_cast<std::size_t>(k)] = reflect(start + k) * window[static_cast<std::size_t>(k)];
    }
    fftw_execute_dft_r2c(stft_plan(), in.get(), out.get());
    for (int b = 0; b < kBins; ++b) {
      const auto& c = out[static_cast<std::size_t>(b)];
      mag[static_cast<std::size_t>(t) * kBins + static_cast<std::size_t>(b)] =
          std::hypot(c[0], c[1]);
    }
  }
  return mag;
}

int reduced(int n) { return (n + kDownsampleFactor - 1) / kDownsampleFactor; }

}  // namespace

std::pair<int, int> spectrogram_shape(int sample_rate) {
  const int frames = 1 + sample_rate / kStftHop;
  return {reduced(kBins), reduced(frames)};
}

Spectrogram compute_spectrogram(const BinauralFrame& frame, Downsample mode) {
  const auto expected = static_cast<std::size_t>(frame.sample_rate);
  if (frame.sample_rate <= kStftWindow || frame.left.size() != expected ||
      frame.right.size() != expected) {
    throw Error("compute_spectrogram: frame must hold exactly one second of audio");
  }
  const int frames = 1 + frame.sample_rate / kStftHop;
  const auto [out_bins, out_frames] = spectrogram_shape(frame.sample_rate);

  Spectrogram spec;
  spec.freq_bins = out_bins;
  spec.time_frames = out_frames;
  spec.sample_rate = frame.sample_rate;
  spec.values.assign(static_cast<std::size_t>(out_bins) * static_cast<std::size_t>(out_frames) *
                         Spectrogram::kChannels, 0.0f);

  for (int ch = 0; ch < Spectrogram::kChannels; ++ch) {
    const auto mag = stft_magnitude(ch == 0 ? frame.left : frame.right, frames);
    auto at = [&](int t, int b) { return mag[static_cast<std::size_t>(t) * kBins + static_cast<std::size_t>(b)]; };
    for (int f = 0; f < out_bins; ++f) {
      for (int t = 0; t < out_frames; ++t) {
        double value = 0.0;
        if (mode == Downsample::Stride) {
          value = at(t * kDownsampleFactor, f * kDownsampleFactor);
        } else {
          int count = 0;
          for (int dt = 0; dt < kDownsampleFactor; ++dt) {
            for (int df = 0; df < kDownsampleFactor; ++df) {
              const int tt = t * kDownsampleFactor + dt;
              const int bb = f * kDownsampleFactor + df;
              if (tt < frames && bb < kBins) {
                value += at(tt, bb);
                ++count;
              }
            }
          }
          value /= count;
        }
        spec.at(f, t, ch) = static_cast<float>(std::log1p(value));
      }
    }
  }
  return spec;
}

}  // namespace davnav
