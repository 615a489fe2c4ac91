#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

#include "davnav/soundbank.hpp"

namespace davnav {

namespace {

std::uint32_t read_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint16_t read_u16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_u16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
}

}  // namespace

SoundAsset load_wav(const std::filesystem::path& path, int expected_rate) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  const std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                         std::istreambuf_iterator<char>());
  const auto where = path.filename().string() + ": ";
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw ParseError(where + "not a RIFF/WAVE file (truncated)");
  }

  bool have_fmt = false;
  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  const unsigned char* data = nullptr;
  std::size_t data_size = 0;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const auto* chunk = bytes.data() + pos;
    const std::uint32_t size = read_u32(chunk + 4);
    const std::size_t body = pos + 8;
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (size < 16 || body + 16 > bytes.size()) throw ParseError(where + "truncated fmt chunk");
      format = read_u16(bytes.data() + body);
      channels = read_u16(bytes.data() + body + 2);
      rate = read_u32(bytes.data() + body + 4);
      bits = read_u16(bytes.data() + body + 14);
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      if (body + size > bytes.size()) throw ParseError(where + "truncated data chunk");
      data = bytes.data() + body;
      data_size = size;
      break;
    }
    pos = body + size + (size & 1u);
  }
  if (!have_fmt) throw ParseError(where + "missing fmt chunk (truncated)");
  if (format != 1 || bits != 16) throw ParseError(where + "PCM 16-bit required");
  if (channels != 1) throw ParseError(where + "mono required");
  if (static_cast<int>(rate) != expected_rate) {
    throw ParseError(where + "rate mismatch (" + std::to_string(rate) + " Hz, bank " +
                     std::to_string(expected_rate) + " Hz)");
  }
  if (data == nullptr) throw ParseError(where + "missing data chunk (truncated)");
  if (data_size % 2 != 0 || data_size == 0) throw ParseError(where + "truncated sample data");

  SoundAsset asset;
  asset.id = path.stem().string();
  asset.sample_rate = expected_rate;
  asset.samples.resize(data_size / 2);
  for (std::size_t i = 0; i < asset.samples.size(); ++i) {
    const auto raw = static_cast<std::int16_t>(read_u16(data + 2 * i));
    asset.samples[i] = static_cast<float>(raw) / 32768.0f;
  }
  return asset;
}

void save_wav(const SoundAsset& asset, const std::filesystem::path& path) {
  const auto n = static_cast<std::uint32_t>(asset.samples.size());
  std::string out;
  out.reserve(44 + 2 * static_cast<std::size_t>(n));
  out += "RIFF";
  put_u32(out, 36 + 2 * n);
  out += "WAVEfmt ";
  put_u32(out, 16);
  put_u16(out, 1);
  put_u16(out, 1);
  put_u32(out, static_cast<std::uint32_t>(asset.sample_rate));
  put_u32(out, static_cast<std::uint32_t>(asset.sample_rate) * 2);
  put_u16(out, 2);
  put_u16(out, 16);
  out += "data";
  put_u32(out, 2 * n);
  for (const float x : asset.samples) {
    const long q = std::lround(static_cast<double>(x) * 32768.0);
    put_u16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(std::clamp(q, -32768L, 32767L))));
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error("cannot write " + path.string());
  file.write(out.data(), static_cast<std::streamsize>(out.size()));
}

}  // namespace davnav
