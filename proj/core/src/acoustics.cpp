#include "davnav/acoustics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace davnav {

void AcousticParams::validate() const {
  if (!(reference_gain > 0) || !(min_distance > 0) || !(itd_max >= 0)) {
    throw ConfigError("acoustics: gains and distances must be positive");
  }
  if (!(rear_attenuation > 0 && rear_attenuation <= 1)) {
    throw ConfigError("acoustics: rear_attenuation must lie in (0, 1]");
  }
  if (tail.enabled && (!(tail.tail_gain > 0) || !(tail.time_constant_s > 0))) {
    throw ConfigError("acoustics: tail gain and time constant must be positive");
  }
}

BinauralFrame silent_frame(int sample_rate) {
  const auto n = static_cast<std::size_t>(sample_rate);
  return {sample_rate, std::vector<float>(n, 0.0f), std::vector<float>(n, 0.0f)};
}

Arrival doa_and_distance(const GridMap& map, const GeodesicField& source_field, Pose listener) {
  const auto hops = source_field.cells(listener.cell);
  if (!hops) throw Error("doa_and_distance: source unreachable from listener");
  if (*hops == 0) return {0.0, 0.0};

  const Heading h = listener.heading;
  const std::array<std::pair<Heading, double>, 4> order{{
      {h, 0.0},
      {turn_left(h), std::numbers::pi / 2},
      {turn_right(h), -std::numbers::pi / 2},
      {opposite(h), std::numbers::pi},
  }};
  for (const auto& [dir, azimuth] : order) {
    const Cell next = neighbor(listener.cell, dir);
    if (map.is_free(next) && source_field.raw(next) == *hops - 1) {
      return {azimuth, *hops * map.resolution()};
    }
  }
  throw Error("doa_and_distance: inconsistent geodesic field");
}

Arrival doa_and_distance(const GridMap& map, Pose listener, Cell source) {
  return doa_and_distance(map, geodesic_field(map, source), listener);
}

namespace {

// y = x * h with h[n] = tail_gain * a^n for n < taps (a = exp(-1/(tau R))),
// evaluated as an exponential recursion minus the truncated remainder.
std::vector<double> tail_convolve(const std::vector<double>& x, double tail_gain, double a,
                                  std::size_t taps) {
  std::vector<double> y(x.size());
  const double a_taps = std::pow(a, static_cast<double>(taps));
  double state = 0.0;
  for (std::size_t n = 0; n < x.size(); ++n) {
    state = a * state + x[n];
    if (n >= taps) state -= a_taps * x[n - taps];
    y[n] = x[n] + tail_gain * state;
  }
  return y;
}

}  // namespace

BinauralFrame render_source(std::span<const float> mono, int sample_rate, Arrival arrival,
                            const AcousticParams& params) {
  const double theta = arrival.azimuth;
  const double front = std::clamp(theta, -std::numbers::pi / 2, std::numbers::pi / 2);
  double gain = params.reference_gain / std::max(arrival.distance_m, params.min_distance);
  if (std::abs(theta) > std::numbers::pi / 2) gain *= params.rear_attenuation;

  // phi = pi/4 - front/2; left = cos(phi) = sin(pi/4 + front/2), right = sin(phi).
  // Writing both as sines makes the left/right mirror exact in floating point.
  const double left_gain = gain * std::sin(std::numbers::pi / 4 + front / 2);
  const double right_gain = gain * std::sin(std::numbers::pi / 4 - front / 2);

  const long delay = std::lround(sample_rate * params.itd_max * std::abs(std::sin(front)));
  const auto n = mono.size();
  std::vector<double> left(n, 0.0), right(n, 0.0);
  const auto shift = static_cast<std::size_t>(std::min<long>(delay, static_cast<long>(n)));
  // Source on the left (front > 0) delays the right ear and vice versa.
  const std::size_t left_shift = front < 0 ? shift : 0;
  const std::size_t right_shift = front > 0 ? shift : 0;
  for (std::size_t i = left_shift; i < n; ++i) left[i] = left_gain * mono[i - left_shift];
  for (std::size_t i = right_shift; i < n; ++i) right[i] = right_gain * mono[i - right_shift];

  if (params.tail.enabled) {
    const double tau_samples = params.tail.time_constant_s * sample_rate;
    const double a = std::exp(-1.0 / tau_samples);
    const auto taps = static_cast<std::size_t>(std::floor(3.0 * tau_samples)) + 1;
    left = tail_convolve(left, params.tail.tail_gain, a, taps);
    right = tail_convolve(right, params.tail.tail_gain, a, taps);
  }

  BinauralFrame out;
  out.sample_rate = sample_rate;
  out.left.resize(n);
  out.right.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.left[i] = static_cast<float>(left[i]);
    out.right[i] = static_cast<float>(right[i]);
  }
  return out;
}

BinauralFrame mix(std::span<const BinauralFrame> frames) {
  if (frames.empty()) throw Error("mix: no frames");
  BinauralFrame out = frames.front();
  for (std::size_t k = 1; k < frames.size(); ++k) {
    const auto& f = frames[k];
    if (f.sample_rate != out.sample_rate) throw Error("mix: sample rate mismatch");
    if (f.left.size() != out.left.size() || f.right.size() != out.right.size()) {
      throw Error("mix: frame length mismatch");
    }
    for (std::size_t i = 0; i < out.left.size(); ++i) out.left[i] += f.left[i];
    for (std::size_t i = 0; i < out.right.size(); ++i) out.right[i] += f.right[i];
  }
  return out;
}

}  // namespace davnav
