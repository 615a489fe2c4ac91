#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "davnav/acoustics.hpp"
#include "davnav/rng.hpp"
#include "oracles.hpp"

using namespace davnav;
namespace dt = davnav::testing;
constexpr double kPi = std::numbers::pi;

namespace {

std::vector<float> noise(std::uint64_t seed, int n) {
  Rng rng(seed);
  std::vector<float> x(static_cast<std::size_t>(n));
  for (auto& v : x) v = static_cast<float>(2.0 * rng.uniform() - 1.0);
  return x;
}

std::vector<float> sine(double freq, int rate, double amp = 1.0) {
  std::vector<float> x(static_cast<std::size_t>(rate));
  for (int i = 0; i < rate; ++i)
    x[static_cast<std::size_t>(i)] = static_cast<float>(amp * std::sin(2 * kPi * freq * i / rate));
  return x;
}

double rms(const std::vector<float>& x) {
  double s = 0.0;
  for (const float v : x) s += static_cast<double>(v) * v;
  return std::sqrt(s / static_cast<double>(x.size()));
}

AcousticParams no_tail() { return AcousticParams{}; }

}  // namespace

TEST(Doa, SourceInListenerCell) {
  const GridMap m = dt::open_room(3, 3);
  const auto a = doa_and_distance(m, {{2, 2}, Heading::East}, {2, 2});
  EXPECT_EQ(a.azimuth, 0.0);
  EXPECT_EQ(a.distance_m, 0.0);
}

TEST(Doa, StraightCorridorAhead) {
  const GridMap m = dt::map_from_rows({"#######", "#.....#", "#######"}, 0.5);
  const auto a = doa_and_distance(m, {{1, 1}, Heading::East}, {1, 5});
  EXPECT_EQ(a.azimuth, 0.0);
  EXPECT_DOUBLE_EQ(a.distance_m, 4 * 0.5);
}

TEST(Doa, LCorridorDepartsLeft) {
  const GridMap m = dt::map_from_rows({"#######", "#.....#", "#.#####", "#.#####", "#######"});
  const Pose listener{{1, 5}, Heading::North};
  const auto a = doa_and_distance(m, listener, {3, 1});
  // The only path leaves westwards, which is left of North.
  EXPECT_DOUBLE_EQ(a.azimuth, kPi / 2);
  EXPECT_DOUBLE_EQ(a.distance_m, 6.0);
  EXPECT_DOUBLE_EQ(doa_and_distance(m, {{1, 5}, Heading::South}, {3, 1}).azimuth, -kPi / 2);
  EXPECT_DOUBLE_EQ(doa_and_distance(m, {{1, 5}, Heading::East}, {3, 1}).azimuth, kPi);
  EXPECT_DOUBLE_EQ(doa_and_distance(m, {{1, 5}, Heading::West}, {3, 1}).azimuth, 0.0);
}

TEST(Doa, AzimuthFollowsFirstSegmentOfABfsPath) {
  // Whatever the tie-break, the chosen neighbor must lie one hop closer.
  const GridMap m = dt::random_map(17, 14, 14, 0.25);
  const auto fw = dt::floyd_warshall(m);
  const auto& cells = m.free_cells();
  for (std::size_t s = 0; s < cells.size(); s += 3) {
    for (std::size_t l = 0; l < cells.size(); l += 2) {
      if (fw[l][s] <= 0) continue;
      const Pose pose{cells[l], Heading::East};
      const auto a = doa_and_distance(m, pose, cells[s]);
      EXPECT_DOUBLE_EQ(a.distance_m, fw[l][s]);
      Heading dir = Heading::East;
      if (a.azimuth == kPi / 2) dir = Heading::North;
      else if (a.azimuth == -kPi / 2) dir = Heading::South;
      else if (a.azimuth == kPi) dir = Heading::West;
      const Cell next = neighbor(cells[l], dir);
      ASSERT_TRUE(m.is_free(next));
      std::size_t ni = 0;
      while (cells[ni] != next) ++ni;
      EXPECT_EQ(fw[ni][s], fw[l][s] - 1);
    }
  }
}

TEST(Doa, UnreachableThrows) {
  const GridMap m = dt::map_from_rows({"#####", "#.#.#", "#####"});
  EXPECT_THROW(doa_and_distance(m, {{1, 1}, Heading::North}, {1, 3}), Error);
}

TEST(Render, FrontalSourceIsBalancedWithoutDelay) {
  const auto x = noise(1, 16000);
  const auto f = render_source(x, 16000, {0.0, 2.0}, no_tail());
  EXPECT_EQ(f.left, f.right);
  const double g = 1.0 / 2.0 * std::sin(kPi / 4);
  for (std::size_t i = 0; i < 50; ++i) EXPECT_NEAR(f.left[i], g * x[i], 1e-6);
}

TEST(Render, HardLeftSilencesRightEar) {
  const auto x = noise(2, 16000);
  const auto f = render_source(x, 16000, {kPi / 2, 1.0}, no_tail());
  for (const float v : f.right) ASSERT_EQ(v, 0.0f);
  // Left ear leads, so it carries the undelayed signal at full pan gain.
  for (std::size_t i = 0; i < 100; ++i) EXPECT_NEAR(f.left[i], x[i], 1e-6);
}

TEST(Render, LaggingEarIsDelayed) {
  const auto x = noise(3, 16000);
  AcousticParams p;
  // Left-front source at 45 degrees: the right ear lags by round(R itd sin).
  const auto f = render_source(x, 16000, {kPi / 4, 1.0}, p);
  const auto lag = static_cast<std::size_t>(std::lround(16000 * p.itd_max * std::sin(kPi / 4)));
  EXPECT_EQ(lag, 8u);
  const double rg = std::sin(kPi / 4 - kPi / 8);
  for (std::size_t i = 0; i < lag; ++i) EXPECT_EQ(f.right[i], 0.0f);
  for (std::size_t i = lag; i < 200; ++i) EXPECT_NEAR(f.right[i], rg * x[i - lag], 1e-6);
  EXPECT_NEAR(f.left[0], std::sin(kPi / 4 + kPi / 8) * x[0], 1e-6);
  // A right-front source delays the left ear instead.
  const auto g = render_source(x, 16000, {-kPi / 4, 1.0}, p);
  for (std::size_t i = 0; i < lag; ++i) EXPECT_EQ(g.left[i], 0.0f);
  EXPECT_NEAR(g.left[lag], rg * x[0], 1e-6);
  EXPECT_NEAR(g.right[0], std::sin(kPi / 4 + kPi / 8) * x[0], 1e-6);
}

TEST(Render, RmsHalvesWhenDistanceDoubles) {
  const auto x = noise(4, 16000);
  for (const double theta : {0.0, 0.6, -1.2, 2.5}) {
    for (const double d : {0.5, 1.0, 3.0}) {
      const auto near = render_source(x, 16000, {theta, d}, no_tail());
      const auto far = render_source(x, 16000, {theta, 2 * d}, no_tail());
      EXPECT_NEAR(rms(far.left) / rms(near.left), 0.5, 1e-6);
      if (rms(near.right) > 0) {
        EXPECT_NEAR(rms(far.right) / rms(near.right), 0.5, 1e-6);
      }
    }
  }
  // Inside min_distance the gain saturates.
  const auto a = render_source(x, 16000, {0.0, 0.1}, no_tail());
  const auto b = render_source(x, 16000, {0.0, 0.3}, no_tail());
  EXPECT_EQ(a.left, b.left);
}

TEST(Render, MonotoneInDistance) {
  const auto x = noise(5, 16000);
  double last = 1e300;
  for (double d = 0.0; d < 10.0; d += 0.25) {
    const double r = rms(render_source(x, 16000, {0.3, d}, no_tail()).left);
    EXPECT_LE(r, last);
    last = r;
  }
}

TEST(Render, MirrorSymmetry) {
  const auto x = noise(6, 16000);
  AcousticParams p;
  p.tail.enabled = true;
  for (const double theta : {0.1, 0.7, kPi / 2, 2.0, kPi}) {
    const auto a = render_source(x, 16000, {theta, 1.5}, p);
    const auto b = render_source(x, 16000, {-theta, 1.5}, p);
    if (theta == kPi) continue;  // -pi lies outside the azimuth range
    EXPECT_EQ(a.left, b.right);
    EXPECT_EQ(a.right, b.left);
  }
}

TEST(Render, RearAttenuation) {
  const auto x = noise(7, 16000);
  AcousticParams p;
  p.rear_attenuation = 0.25;
  const auto rear = render_source(x, 16000, {kPi, 1.0}, p);
  const auto side = render_source(x, 16000, {kPi / 2, 1.0}, p);
  EXPECT_NEAR(rms(rear.left), 0.25 * rms(side.left), 1e-7);
}

TEST(Render, TailMatchesDirectConvolution) {
  const auto x = noise(8, 16000);
  AcousticParams p;
  p.tail.enabled = true;
  p.tail.tail_gain = 0.3;
  p.tail.time_constant_s = 0.01;
  const auto wet = render_source(x, 16000, {0.4, 1.3}, p);
  p.tail.enabled = false;
  const auto dry = render_source(x, 16000, {0.4, 1.3}, p);

  const double tau = 0.01 * 16000;
  const auto taps = static_cast<std::size_t>(std::floor(3 * tau));
  std::vector<double> h(taps + 1);
  h[0] = 1.0 + 0.3;
  for (std::size_t n = 1; n <= taps; ++n) h[n] = 0.3 * std::exp(-static_cast<double>(n) / tau);
  for (const auto* pair : {&dry.left, &dry.right}) {
    const auto& in = *pair;
    const auto& out = pair == &dry.left ? wet.left : wet.right;
    for (std::size_t i = 0; i < in.size(); i += 37) {
      double acc = 0.0;
      for (std::size_t k = 0; k <= taps && k <= i; ++k) acc += h[k] * in[i - k];
      ASSERT_NEAR(out[i], acc, 1e-4) << "sample " << i;
    }
  }
}

TEST(Mix, IdentitySilenceLinearity) {
  const auto f = render_source(noise(9, 16000), 16000, {0.2, 1.0}, no_tail());
  const std::vector<BinauralFrame> one{f};
  EXPECT_EQ(mix(one).left, f.left);
  const std::vector<BinauralFrame> with_silence{f, silent_frame(16000)};
  EXPECT_EQ(mix(with_silence).left, f.left);
  EXPECT_EQ(mix(with_silence).right, f.right);
  const std::vector<BinauralFrame> twice{f, f};
  const auto d = mix(twice);
  for (std::size_t i = 0; i < f.left.size(); ++i) {
    ASSERT_EQ(d.left[i], 2.0f * f.left[i]);
    ASSERT_EQ(d.right[i], 2.0f * f.right[i]);
  }
}

TEST(Mix, Errors) {
  const std::vector<BinauralFrame> rates{silent_frame(16000), silent_frame(44100)};
  EXPECT_THROW(mix(rates), Error);
  EXPECT_THROW(mix(std::vector<BinauralFrame>{}), Error);
  auto shorter = silent_frame(16000);
  shorter.left.pop_back();
  shorter.right.pop_back();
  const std::vector<BinauralFrame> lengths{silent_frame(16000), shorter};
  EXPECT_THROW(mix(lengths), Error);
}

TEST(Spectrogram, Shapes) {
  EXPECT_EQ(spectrogram_shape(16000), (std::pair<int, int>{65, 26}));
  EXPECT_EQ(spectrogram_shape(44100), (std::pair<int, int>{65, 69}));
  for (const int rate : {16000, 44100}) {
    BinauralFrame f{rate, noise(10, rate), noise(11, rate)};
    const auto s = compute_spectrogram(f);
    EXPECT_EQ(s.freq_bins, 65);
    EXPECT_EQ(s.time_frames, rate == 16000 ? 26 : 69);
    EXPECT_EQ(s.values.size(), static_cast<std::size_t>(65 * s.time_frames * 2));
    for (const float v : s.values) ASSERT_GE(v, 0.0f);
    const auto avg = compute_spectrogram(f, Downsample::Average);
    EXPECT_EQ(avg.values.size(), s.values.size());
  }
}

TEST(Spectrogram, SilenceIsExactlyZero) {
  const auto s = compute_spectrogram(silent_frame(16000));
  for (const float v : s.values) ASSERT_EQ(v, 0.0f);
}

TEST(Spectrogram, WrongLengthThrows) {
  BinauralFrame f{16000, std::vector<float>(15999), std::vector<float>(15999)};
  EXPECT_THROW(compute_spectrogram(f), Error);
}

namespace {

// Full reference spectrogram of one channel via the direct DFT, with the
// reflect padding spelled out.
std::vector<std::vector<double>> reference_channel(const std::vector<float>& x) {
  const int n = static_cast<int>(x.size());
  std::vector<double> padded;
  for (int i = 256; i >= 1; --i) padded.push_back(x[static_cast<std::size_t>(i)]);
  for (const float v : x) padded.push_back(v);
  for (int i = n - 2; i >= n - 257; --i) padded.push_back(x[static_cast<std::size_t>(i)]);
  const int frames = 1 + n / 160;
  std::vector<std::vector<double>> out;  // [frame/4][bin/4]
  for (int t = 0; t < frames; t += 4) {
    std::vector<double> seg(512);
    for (int k = 0; k < 512; ++k)
      seg[static_cast<std::size_t>(k)] =
          padded[static_cast<std::size_t>(t * 160 + k)] * (0.5 - 0.5 * std::cos(2 * kPi * k / 512));
    const auto mag = dt::direct_dft_magnitude(seg);
    std::vector<double> row;
    for (int b = 0; b <= 256; b += 4) row.push_back(std::log1p(mag[static_cast<std::size_t>(b)]));
    out.push_back(row);
  }
  return out;
}

}  // namespace

TEST(Spectrogram, OneKilohertzPeaksInRowEight) {
  const auto x = sine(1000.0, 16000, 0.8);
  const auto s = compute_spectrogram({16000, x, x});
  std::vector<double> row_energy(65, 0.0);
  for (int f = 0; f < 65; ++f)
    for (int t = 0; t < 26; ++t) row_energy[static_cast<std::size_t>(f)] += s.at(f, t, 0);
  const auto best = std::max_element(row_energy.begin(), row_energy.end()) - row_energy.begin();
  EXPECT_EQ(best, 8);

  const auto ref = reference_channel(x);
  std::vector<double> ref_energy(65, 0.0);
  for (const auto& frame : ref)
    for (std::size_t f = 0; f < 65; ++f) ref_energy[f] += frame[f];
  EXPECT_EQ(std::max_element(ref_energy.begin(), ref_energy.end()) - ref_energy.begin(), 8);
}

TEST(Spectrogram, MatchesDirectDftOracle) {
  for (const int rate : {16000, 44100}) {
    const auto l = noise(20, rate);
    const auto r = sine(3100.0, rate, 0.5);
    const auto s = compute_spectrogram({rate, l, r});
    const auto ref_l = reference_channel(l);
    const auto ref_r = reference_channel(r);
    ASSERT_EQ(static_cast<int>(ref_l.size()), s.time_frames);
    for (int t = 0; t < s.time_frames; ++t) {
      for (int f = 0; f < 65; ++f) {
        ASSERT_NEAR(s.at(f, t, 0), ref_l[static_cast<std::size_t>(t)][static_cast<std::size_t>(f)], 1e-4);
        ASSERT_NEAR(s.at(f, t, 1), ref_r[static_cast<std::size_t>(t)][static_cast<std::size_t>(f)], 1e-4);
      }
    }
  }
}

TEST(Spectrogram, SignFlipInvariantAndSilentMixExact) {
  const auto x = noise(30, 16000);
  auto neg = x;
  for (auto& v : neg) v = -v;
  EXPECT_EQ(compute_spectrogram({16000, x, x}), compute_spectrogram({16000, neg, neg}));

  const BinauralFrame f{16000, x, noise(31, 16000)};
  const std::vector<BinauralFrame> pair{f, silent_frame(16000)};
  EXPECT_EQ(compute_spectrogram(mix(pair)), compute_spectrogram(f));
}
