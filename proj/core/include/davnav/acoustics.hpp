#pragma once

#include <span>
#include <vector>

#include "davnav/geodesic.hpp"
#include "davnav/gridmap.hpp"
#include "davnav/types.hpp"

namespace davnav {

struct DecayTail {
  bool enabled = false;
  double tail_gain = 0.3;
  double time_constant_s = 0.05;
};

// Parametric stand-in for room impulse responses.
struct AcousticParams {
  double reference_gain = 1.0;
  double min_distance = 0.5;       // meters, half a 1 m cell
  double rear_attenuation = 0.5;   // (0, 1]
  double itd_max = 0.0007;         // seconds
  DecayTail tail;

  void validate() const;
};

struct BinauralFrame {
  int sample_rate = 16000;
  std::vector<float> left;
  std::vector<float> right;
};

BinauralFrame silent_frame(int sample_rate);

// Direction of arrival and propagation distance of a source.
struct Arrival {
  double azimuth = 0.0;     // radians in (-pi, pi], positive = left of heading
  double distance_m = 0.0;  // geodesic
};

// Azimuth of the first segment of one shortest path from the listener to
// the source (ahead, left, right, behind preference). `source_field` must
// be rooted at the source cell. Throws Error when unreachable.
Arrival doa_and_distance(const GridMap& map, const GeodesicField& source_field, Pose listener);
Arrival doa_and_distance(const GridMap& map, Pose listener, Cell source);

// Distance gain, equal-power panning, rear attenuation, interaural delay
// and the optional exponential tail.
BinauralFrame render_source(std::span<const float> mono, int sample_rate, Arrival arrival,
                            const AcousticParams& params);

// Elementwise sum; throws Error on rate or length mismatch.
BinauralFrame mix(std::span<const BinauralFrame> frames);

// Log-magnitude binaural spectrogram, laid out [freq][time][channel].
struct Spectrogram {
  int freq_bins = 0;
  int time_frames = 0;
  int sample_rate = 0;
  std::vector<float> values;

  static constexpr int kChannels = 2;

  float at(int f, int t, int ch) const { return values[offset(f, t, ch)]; }
  float& at(int f, int t, int ch) { return values[offset(f, t, ch)]; }
  std::size_t offset(int f, int t, int ch) const {
    return (static_cast<std::size_t>(f) * static_cast<std::size_t>(time_frames) +
            static_cast<std::size_t>(t)) * kChannels + static_cast<std::size_t>(ch);
  }

  friend bool operator==(const Spectrogram&, const Spectrogram&) = default;
};

enum class Downsample { Stride, Average };

inline constexpr int kStftWindow = 512;
inline constexpr int kStftHop = 160;
inline constexpr int kDownsampleFactor = 4;

// Expected (freq_bins, time_frames) for a one-second frame.
std::pair<int, int> spectrogram_shape(int sample_rate);

// Centered STFT (reflect padding of half a window), periodic Hann window of
// 512, hop 160, magnitude, every-4th-bin subsampling on both axes, log(1+x).
// Throws Error when the frame is not exactly one second long.
Spectrogram compute_spectrogram(const BinauralFrame& frame, Downsample mode = Downsample::Stride);

}  // namespace davnav
