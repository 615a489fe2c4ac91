#include "davnav/soundbank.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include "davnav/rng.hpp"

namespace davnav {

std::string_view to_string(Split s) {
  switch (s) {
    case Split::Train: return "train";
    case Split::Val: return "val";
    case Split::Test: return "test";
  }
  return "?";
}

std::optional<Split> split_from_string(std::string_view s) {
  if (s == "train") return Split::Train;
  if (s == "val") return Split::Val;
  if (s == "test") return Split::Test;
  return std::nullopt;
}

bool supported_sample_rate(int rate) { return rate == 16000 || rate == 44100; }

SplitSizes split_sizes(int count) {
  SplitSizes sizes;
  sizes.val = static_cast<int>(std::lround(count * 11.0 / 102.0));
  sizes.test = static_cast<int>(std::lround(count * 18.0 / 102.0));
  sizes.train = count - sizes.val - sizes.test;
  return sizes;
}

namespace {

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

SoundSplit assign_splits(const std::vector<std::string>& ids) {
  std::vector<std::string> ranked = ids;
  std::sort(ranked.begin(), ranked.end(), [](const std::string& a, const std::string& b) {
    const auto ha = fnv1a(a);
    const auto hb = fnv1a(b);
    return ha != hb ? ha < hb : a < b;
  });
  const auto sizes = split_sizes(static_cast<int>(ranked.size()));
  SoundSplit split;
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    if (i < static_cast<std::size_t>(sizes.train)) {
      split.train.push_back(ranked[i]);
    } else if (i < static_cast<std::size_t>(sizes.train + sizes.val)) {
      split.val.push_back(ranked[i]);
    } else {
      split.test.push_back(ranked[i]);
    }
  }
  for (auto* list : {&split.train, &split.val, &split.test}) std::sort(list->begin(), list->end());
  return split;
}

SoundBank::SoundBank(int sample_rate, std::vector<SoundAsset> assets)
    : sample_rate_(sample_rate), assets_(std::move(assets)) {
  if (!supported_sample_rate(sample_rate_)) {
    throw ConfigError("unsupported sample rate " + std::to_string(sample_rate_));
  }
  std::map<std::string, int> seen;
  for (const auto& a : assets_) {
    if (a.samples.empty()) throw Error("sound '" + a.id + "' has no samples");
    if (a.sample_rate != sample_rate_) throw Error("sound '" + a.id + "': rate mismatch");
    if (++seen[a.id] > 1) throw Error("duplicate sound id '" + a.id + "'");
    for (const float x : a.samples) {
      if (!(std::abs(x) <= 1.0f)) throw Error("sound '" + a.id + "' exceeds [-1, 1]");
    }
  }
}

const SoundAsset* SoundBank::find(std::string_view id) const {
  for (const auto& a : assets_) {
    if (a.id == id) return &a;
  }
  return nullptr;
}

const SoundAsset& SoundBank::get(std::string_view id) const {
  if (const auto* a = find(id)) return *a;
  throw Error("unknown sound id '" + std::string(id) + "'");
}

std::vector<std::string> SoundBank::ids(Split split) const {
  std::vector<std::string> out;
  for (const auto& a : assets_) {
    if (a.split == split) out.push_back(a.id);
  }
  std::sort(out.begin(), out.end());
  return out;
}

SoundSplit SoundBank::split() const {
  return {ids(Split::Train), ids(Split::Val), ids(Split::Test)};
}

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::vector<double> harmonic_tone(Rng& rng, std::size_t n, double rate) {
  const double f0 = 150.0 + 650.0 * rng.uniform();
  const int harmonics = 4 + static_cast<int>(rng.index(5));
  std::vector<double> x(n, 0.0);
  for (int k = 1; k <= harmonics; ++k) {
    const double f = f0 * k;
    if (f >= 0.45 * rate) break;
    const double amp = 1.0 / k;
    const double phase = kTwoPi * rng.uniform();
    for (std::size_t i = 0; i < n; ++i) x[i] += amp * std::sin(kTwoPi * f * i / rate + phase);
  }
  return x;
}

std::vector<double> chirp(Rng& rng, std::size_t n, double rate) {
  const double f_start = 200.0 + 800.0 * rng.uniform();
  const double f_end = 1500.0 + 4000.0 * rng.uniform();
  const double period = 0.25 + 0.75 * rng.uniform();  // seconds per sweep
  std::vector<double> x(n);
  double phase = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = std::fmod(i / rate, period) / period;
    const double f = f_start + (f_end - f_start) * t;
    phase += kTwoPi * f / rate;
    x[i] = std::sin(phase);
  }
  return x;
}

std::vector<double> band_noise(Rng& rng, std::size_t n, double rate) {
  const double lo = 200.0 + 1500.0 * rng.uniform();
  const double hi = lo + 500.0 + 2500.0 * rng.uniform();
  constexpr int kPartials = 48;
  std::vector<double> x(n, 0.0);
  for (int k = 0; k < kPartials; ++k) {
    const double f = lo + (hi - lo) * rng.uniform();
    const double phase = kTwoPi * rng.uniform();
    for (std::size_t i = 0; i < n; ++i) x[i] += std::sin(kTwoPi * f * i / rate + phase);
  }
  return x;
}

std::vector<double> am_tone(Rng& rng, std::size_t n, double rate) {
  auto x = harmonic_tone(rng, n, rate);
  const double fm = 2.0 + 6.0 * rng.uniform();
  const double depth = 0.5 + 0.4 * rng.uniform();
  for (std::size_t i = 0; i < n; ++i) {
    x[i] *= 1.0 - depth * 0.5 * (1.0 + std::cos(kTwoPi * fm * i / rate));
  }
  return x;
}

}  // namespace

SoundBank synthesize_bank(std::uint64_t seed, int count, int sample_rate, double duration_s) {
  if (!supported_sample_rate(sample_rate)) {
    throw ConfigError("unsupported sample rate " + std::to_string(sample_rate));
  }
  if (count < 3) throw ConfigError("synthesize_bank: count must be at least 3");
  if (!(duration_s >= 1.0)) throw ConfigError("synthesize_bank: duration must be at least 1 s");

  const auto n = static_cast<std::size_t>(std::llround(duration_s * sample_rate));
  std::vector<SoundAsset> assets;
  std::vector<std::string> ids;
  for (int i = 0; i < count; ++i) {
    Rng rng(Rng::derive(seed, static_cast<std::uint64_t>(i)));
    std::vector<double> x;
    switch (i % 4) {
      case 0: x = harmonic_tone(rng, n, sample_rate); break;
      case 1: x = chirp(rng, n, sample_rate); break;
      case 2: x = band_noise(rng, n, sample_rate); break;
      default: x = am_tone(rng, n, sample_rate); break;
    }
    double peak = 0.0;
    for (const double v : x) peak = std::max(peak, std::abs(v));
    SoundAsset asset;
    char id[32];
    std::snprintf(id, sizeof id, "snd%03d", i);
    asset.id = id;
    asset.sample_rate = sample_rate;
    asset.samples.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
      asset.samples[k] = static_cast<float>(std::clamp(peak > 0 ? x[k] / peak : 0.0, -1.0, 1.0));
    }
    ids.push_back(asset.id);
    assets.push_back(std::move(asset));
  }

  const auto split = assign_splits(ids);
  for (auto& a : assets) {
    if (std::binary_search(split.val.begin(), split.val.end(), a.id)) a.split = Split::Val;
    else if (std::binary_search(split.test.begin(), split.test.end(), a.id)) a.split = Split::Test;
    else a.split = Split::Train;
  }
  return SoundBank(sample_rate, std::move(assets));
}

void save_bank(const SoundBank& bank, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::ofstream manifest(dir / "splits.txt", std::ios::binary);
  if (!manifest) throw Error("cannot write " + (dir / "splits.txt").string());
  for (const auto& a : bank.assets()) {
    save_wav(a, dir / (a.id + ".wav"));
    manifest << a.id << ' ' << to_string(a.split) << '\n';
  }
}

SoundBank load_bank(const std::filesystem::path& dir, int sample_rate) {
  std::ifstream manifest(dir / "splits.txt");
  if (!manifest) throw Error("missing split manifest " + (dir / "splits.txt").string());
  std::vector<SoundAsset> assets;
  std::string line;
  int line_no = 0;
  while (std::getline(manifest, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string id, split_name, extra;
    if (!(fields >> id >> split_name) || (fields >> extra)) {
      throw ParseError("splits.txt line " + std::to_string(line_no) + ": expected '<id> <split>'");
    }
    const auto split = split_from_string(split_name);
    if (!split) {
      throw ParseError("splits.txt line " + std::to_string(line_no) + ": unknown split '" +
                       split_name + "'");
    }
    auto asset = load_wav(dir / (id + ".wav"), sample_rate);
    asset.id = id;
    asset.split = *split;
    assets.push_back(std::move(asset));
  }
  return SoundBank(sample_rate, std::move(assets));
}

std::vector<float> step_slice(const SoundAsset& asset, int step_index, int sample_rate) {
  const auto rate = static_cast<std::size_t>(sample_rate);
  const auto len = asset.samples.size();
  std::vector<float> out(rate);
  if (len == 0) return out;
  const auto wrapped = (static_cast<long long>(step_index) * static_cast<long long>(rate)) %
                       static_cast<long long>(len);
  auto pos = static_cast<std::size_t>(wrapped < 0 ? wrapped + static_cast<long long>(len) : wrapped);
  for (std::size_t i = 0; i < rate; ++i) {
    out[i] = asset.samples[pos];
    if (++pos == len) pos = 0;
  }
  return out;
}

}  // namespace davnav
