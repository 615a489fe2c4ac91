#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace davnav {

// Seeded generator with platform-independent draws. The standard
// distributions are implementation-defined, so every draw used by the
// simulator goes through the helpers below.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform on [0, 1) with 53 bits of resolution.
  double uniform();

  // Uniform on [0, n); n must be positive.
  std::size_t index(std::size_t n);

  // Uniform on [lo, hi], inclusive.
  int uniform_int(int lo, int hi);

  bool bernoulli(double p) { return uniform() < p; }

  // Independent stream seed for (seed, stream) via splitmix64.
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream);

 private:
  std::mt19937_64 engine_;
};

}  // namespace davnav
