#pragma once

#include <memory>
#include <string>
#include <vector>

#include "davnav/engine.hpp"
#include "davnav/soundbank.hpp"
#include "oracles.hpp"

namespace davnav::testing {

inline std::shared_ptr<const SoundBank> small_bank(int rate = 16000) {
  static std::shared_ptr<const SoundBank> b16 =
      std::make_shared<const SoundBank>(synthesize_bank(7, 8, 16000, 2.0));
  static std::shared_ptr<const SoundBank> b44 =
      std::make_shared<const SoundBank>(synthesize_bank(7, 4, 44100, 1.0));
  return rate == 16000 ? b16 : b44;
}

// Static-target episode on `map` with the target pinned at `target`.
inline EpisodeConfig static_episode(std::shared_ptr<const GridMap> map, Pose start, Cell target,
                                    std::uint64_t seed = 1) {
  EpisodeConfig c;
  c.episode_id = "test";
  c.seed = seed;
  c.map = std::move(map);
  c.bank = small_bank();
  c.target_sound = c.bank->assets().front().id;
  for (const auto& a : c.bank->assets()) c.audio_pool.push_back(a.id);
  c.start = start;
  c.target_start = target;
  c.move_prob = 0.0;
  return c;
}

inline std::shared_ptr<const GridMap> shared(GridMap m) {
  return std::make_shared<const GridMap>(std::move(m));
}

}  // namespace davnav::testing
