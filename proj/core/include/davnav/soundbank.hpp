#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "davnav/types.hpp"

namespace davnav {

enum class Split : std::uint8_t { Train, Val, Test };

std::string_view to_string(Split s);
std::optional<Split> split_from_string(std::string_view s);

struct SoundAsset {
  std::string id;
  std::vector<float> samples;  // mono, within [-1, 1]
  int sample_rate = 16000;
  Split split = Split::Train;
};

struct SoundSplit {
  std::vector<std::string> train;
  std::vector<std::string> val;
  std::vector<std::string> test;
};

// Split sizes proportional to 73/11/18: val and test rounded to nearest,
// the remainder goes to train.
struct SplitSizes {
  int train = 0;
  int val = 0;
  int test = 0;
};
SplitSizes split_sizes(int count);

// Assigns splits by ranking ids on a fixed hash, so membership depends on
// the id set only.
SoundSplit assign_splits(const std::vector<std::string>& ids);

bool supported_sample_rate(int rate);

// Immutable collection of assets sharing one sample rate.
class SoundBank {
 public:
  SoundBank(int sample_rate, std::vector<SoundAsset> assets);

  int sample_rate() const { return sample_rate_; }
  const std::vector<SoundAsset>& assets() const { return assets_; }
  std::size_t size() const { return assets_.size(); }

  const SoundAsset& get(std::string_view id) const;
  const SoundAsset* find(std::string_view id) const;
  std::vector<std::string> ids(Split split) const;
  SoundSplit split() const;

 private:
  int sample_rate_;
  std::vector<SoundAsset> assets_;
};

// Procedural family: harmonic tones, linear chirps, band-limited noise and
// amplitude-modulated tones, each peak-normalized to 1.
SoundBank synthesize_bank(std::uint64_t seed, int count, int sample_rate, double duration_s);

// PCM-16 mono WAV. load_wav throws ParseError with "mono required",
// "rate mismatch" or "truncated" on bad input.
SoundAsset load_wav(const std::filesystem::path& path, int expected_rate);
void save_wav(const SoundAsset& asset, const std::filesystem::path& path);

// Bank directory: one <id>.wav per asset plus splits.txt ("<id> <split>").
void save_bank(const SoundBank& bank, const std::filesystem::path& dir);
SoundBank load_bank(const std::filesystem::path& dir, int sample_rate);

// Samples [step*R, (step+1)*R) of the asset, wrapping cyclically.
std::vector<float> step_slice(const SoundAsset& asset, int step_index, int sample_rate);

}  // namespace davnav
