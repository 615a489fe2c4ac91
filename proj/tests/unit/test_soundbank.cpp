#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <set>

#include "davnav/soundbank.hpp"

using namespace davnav;
namespace fs = std::filesystem;

namespace {

fs::path temp_path(const std::string& name) { return fs::temp_directory_path() / ("davnav_" + name); }

// Hand-rolled PCM-16 WAV writer so the reader is tested against bytes it
// did not produce.
void write_raw_wav(const fs::path& p, int channels, int rate, int frames, bool truncate = false) {
  auto le32 = [](std::ofstream& o, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) o.put(static_cast<char>((v >> (8 * i)) & 0xff));
  };
  auto le16 = [](std::ofstream& o, std::uint16_t v) {
    o.put(static_cast<char>(v & 0xff));
    o.put(static_cast<char>(v >> 8));
  };
  const std::uint32_t data_bytes = static_cast<std::uint32_t>(frames * channels * 2);
  std::ofstream o(p, std::ios::binary);
  o.write("RIFF", 4);
  le32(o, 36 + data_bytes);
  o.write("WAVEfmt ", 8);
  le32(o, 16);
  le16(o, 1);
  le16(o, static_cast<std::uint16_t>(channels));
  le32(o, static_cast<std::uint32_t>(rate));
  le32(o, static_cast<std::uint32_t>(rate * channels * 2));
  le16(o, static_cast<std::uint16_t>(channels * 2));
  le16(o, 16);
  o.write("data", 4);
  le32(o, data_bytes);
  const int written = truncate ? frames * channels / 2 : frames * channels;
  for (int i = 0; i < written; ++i) le16(o, static_cast<std::uint16_t>(i * 37));
}

std::string load_error(const fs::path& p, int rate) {
  try {
    load_wav(p, rate);
  } catch (const ParseError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(SplitSizes, PaperProportions) {
  const auto a = split_sizes(102);
  EXPECT_EQ(a.train, 73);
  EXPECT_EQ(a.val, 11);
  EXPECT_EQ(a.test, 18);
  const auto b = split_sizes(10);
  EXPECT_EQ(b.train, 7);
  EXPECT_EQ(b.val, 1);
  EXPECT_EQ(b.test, 2);
}

TEST(SynthesizeBank, SplitsDisjointAndComplete) {
  const auto bank = synthesize_bank(3, 102, 16000, 1.0);
  const auto s = bank.split();
  EXPECT_EQ(s.train.size(), 73u);
  EXPECT_EQ(s.val.size(), 11u);
  EXPECT_EQ(s.test.size(), 18u);
  std::set<std::string> all;
  for (const auto* l : {&s.train, &s.val, &s.test})
    for (const auto& id : *l) EXPECT_TRUE(all.insert(id).second) << "duplicate " << id;
  EXPECT_EQ(all.size(), 102u);
}

TEST(SynthesizeBank, DeterministicAndNormalized) {
  const auto a = synthesize_bank(11, 8, 16000, 1.5);
  const auto b = synthesize_bank(11, 8, 16000, 1.5);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a.assets()[i].samples, b.assets()[i].samples);
    EXPECT_EQ(a.assets()[i].samples.size(), 24000u);
    float peak = 0.0f;
    for (const float x : a.assets()[i].samples) peak = std::max(peak, std::abs(x));
    EXPECT_LE(peak, 1.0f);
    EXPECT_GT(peak, 0.99f);
  }
  const auto c = synthesize_bank(12, 8, 16000, 1.5);
  EXPECT_NE(a.assets()[0].samples, c.assets()[0].samples);
}

TEST(SynthesizeBank, SplitMembershipIndependentOfSeed) {
  const auto a = synthesize_bank(1, 20, 16000, 1.0);
  const auto b = synthesize_bank(999, 20, 16000, 1.0);
  EXPECT_EQ(a.split().train, b.split().train);
  EXPECT_EQ(a.split().test, b.split().test);
}

TEST(SynthesizeBank, RejectsBadParameters) {
  EXPECT_THROW(synthesize_bank(1, 10, 22050, 1.0), ConfigError);
  EXPECT_THROW(synthesize_bank(1, 2, 16000, 1.0), ConfigError);
  EXPECT_THROW(synthesize_bank(1, 10, 16000, 0.5), ConfigError);
}

TEST(Wav, SineRoundTripWithinOneLsb) {
  SoundAsset a;
  a.id = "sine";
  a.sample_rate = 16000;
  a.samples.resize(16000);
  for (std::size_t i = 0; i < a.samples.size(); ++i)
    a.samples[i] = static_cast<float>(0.9 * std::sin(2 * std::numbers::pi * 440.0 * static_cast<double>(i) / 16000.0));
  const auto p = temp_path("sine.wav");
  save_wav(a, p);
  const auto b = load_wav(p, 16000);
  ASSERT_EQ(b.samples.size(), a.samples.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < a.samples.size(); ++i)
    worst = std::max(worst, static_cast<double>(std::abs(a.samples[i] - b.samples[i])));
  EXPECT_LE(worst, std::ldexp(1.0, -15));
  fs::remove(p);
}

TEST(Wav, ErrorMessages) {
  const auto stereo = temp_path("stereo.wav");
  write_raw_wav(stereo, 2, 16000, 100);
  EXPECT_NE(load_error(stereo, 16000).find("mono required"), std::string::npos);

  const auto low = temp_path("low.wav");
  write_raw_wav(low, 1, 8000, 100);
  EXPECT_NE(load_error(low, 16000).find("rate mismatch"), std::string::npos);

  const auto cut = temp_path("cut.wav");
  write_raw_wav(cut, 1, 16000, 100, true);
  EXPECT_NE(load_error(cut, 16000).find("truncated"), std::string::npos);

  const auto ok = temp_path("ok.wav");
  write_raw_wav(ok, 1, 16000, 100);
  EXPECT_EQ(load_wav(ok, 16000).samples.size(), 100u);
  for (const auto& p : {stereo, low, cut, ok}) fs::remove(p);
}

TEST(Bank, DirectoryRoundTrip) {
  const auto bank = synthesize_bank(5, 6, 16000, 1.0);
  const auto dir = temp_path("bankdir");
  fs::remove_all(dir);
  save_bank(bank, dir);
  const auto back = load_bank(dir, 16000);
  ASSERT_EQ(back.size(), bank.size());
  EXPECT_EQ(back.split().train, bank.split().train);
  EXPECT_EQ(back.split().test, bank.split().test);
  for (const auto& a : bank.assets()) {
    const auto& b = back.get(a.id);
    for (std::size_t i = 0; i < a.samples.size(); ++i)
      ASSERT_LE(std::abs(a.samples[i] - b.samples[i]), std::ldexp(1.0f, -15));
  }
  fs::remove_all(dir);
}

TEST(StepSlice, CyclicIndexing) {
  SoundAsset three;
  three.samples.resize(3 * 100);
  for (std::size_t i = 0; i < three.samples.size(); ++i) three.samples[i] = static_cast<float>(i) / 300.0f;
  const auto s0 = step_slice(three, 0, 100);
  EXPECT_EQ(s0, std::vector<float>(three.samples.begin(), three.samples.begin() + 100));
  EXPECT_EQ(step_slice(three, 3, 100), s0);

  SoundAsset half;
  half.samples.resize(150);
  for (std::size_t i = 0; i < 150; ++i) half.samples[i] = static_cast<float>(i);
  const auto s1 = step_slice(half, 1, 100);
  ASSERT_EQ(s1.size(), 100u);
  // Samples 100..199 modulo 150: second half, then the start again.
  for (std::size_t i = 0; i < 100; ++i) EXPECT_EQ(s1[i], static_cast<float>((100 + i) % 150));

  SoundAsset tiny;
  tiny.samples = {1.0f, 2.0f, 3.0f};
  EXPECT_EQ(step_slice(tiny, 7, 5).size(), 5u);
}
