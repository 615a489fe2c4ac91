#include "davnav/scenario.hpp"

#include <algorithm>

namespace davnav {

void ScenarioConfig::validate() const {
  for (const double p : {p_second_sound, p_distractor_episode, p_distractor_step}) {
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("scenario: probabilities must lie in [0, 1]");
  }
  if (time_mask_param < 0 || freq_mask_param < 0) {
    throw ConfigError("scenario: mask parameters must be non-negative");
  }
}

std::string_view to_string(Augmentation a) {
  switch (a) {
    case Augmentation::None: return "none";
    case Augmentation::TimeMask: return "time_mask";
    case Augmentation::FreqMask: return "freq_mask";
    case Augmentation::Both: return "both";
  }
  return "?";
}

std::optional<Augmentation> augmentation_from_string(std::string_view s) {
  for (const auto a : {Augmentation::None, Augmentation::TimeMask, Augmentation::FreqMask,
                       Augmentation::Both}) {
    if (to_string(a) == s) return a;
  }
  return std::nullopt;
}

namespace {

std::vector<std::string> others(const std::vector<std::string>& pool, std::string_view target) {
  std::vector<std::string> out;
  for (const auto& id : pool) {
    if (id != target) out.push_back(id);
  }
  return out;
}

}  // namespace

EpisodeAudioPlan plan_episode(Rng& rng, const ScenarioConfig& config, std::string_view target_id,
                              const std::vector<std::string>& pool) {
  EpisodeAudioPlan plan;
  if (!config.complex_enabled) return plan;
  const auto candidates = others(pool, target_id);
  if (candidates.empty() || pool.size() < 2) {
    throw ConfigError("scenario: complex audio needs at least two sounds in the pool");
  }
  if (rng.bernoulli(config.p_second_sound)) {
    plan.second_sound_id = candidates[rng.index(candidates.size())];
  }
  plan.distractor_enabled = rng.bernoulli(config.p_distractor_episode);
  return plan;
}

StepAudioEvents plan_step(Rng& rng, const ScenarioConfig& config, const EpisodeAudioPlan& plan,
                          std::string_view target_id, const std::vector<std::string>& pool,
                          const GridMap& map) {
  StepAudioEvents events;
  if (!config.complex_enabled) return events;
  if (plan.distractor_enabled && rng.bernoulli(config.p_distractor_step)) {
    const auto candidates = others(pool, target_id);
    if (candidates.empty()) throw ConfigError("scenario: no distractor candidates");
    events.distractor_active = true;
    events.distractor_id = candidates[rng.index(candidates.size())];
    const auto& cells = map.free_cells();
    events.distractor_cell = cells[rng.index(cells.size())];
  }
  if (rng.bernoulli(0.5)) {
    constexpr Augmentation kinds[] = {Augmentation::TimeMask, Augmentation::FreqMask,
                                      Augmentation::Both};
    events.augmentation = kinds[rng.index(3)];
  }
  return events;
}

namespace {

void mask_frames(Spectrogram& spec, Rng& rng, int param) {
  const int width = rng.uniform_int(0, param);
  const int t0 = rng.uniform_int(0, spec.time_frames - width);
  for (int f = 0; f < spec.freq_bins; ++f) {
    for (int t = t0; t < t0 + width; ++t) {
      for (int ch = 0; ch < Spectrogram::kChannels; ++ch) spec.at(f, t, ch) = 0.0f;
    }
  }
}

void mask_bins(Spectrogram& spec, Rng& rng, int param) {
  const int width = rng.uniform_int(0, param);
  const int f0 = rng.uniform_int(0, spec.freq_bins - width);
  for (int f = f0; f < f0 + width; ++f) {
    for (int t = 0; t < spec.time_frames; ++t) {
      for (int ch = 0; ch < Spectrogram::kChannels; ++ch) spec.at(f, t, ch) = 0.0f;
    }
  }
}

}  // namespace

Spectrogram apply_spec_augment(Spectrogram spec, Augmentation kind, Rng& rng,
                               const ScenarioConfig& config) {
  if (config.time_mask_param > spec.time_frames) {
    throw ConfigError("spec augment: time mask parameter exceeds frame count");
  }
  if (config.freq_mask_param > spec.freq_bins) {
    throw ConfigError("spec augment: frequency mask parameter exceeds bin count");
  }
  if (kind == Augmentation::TimeMask || kind == Augmentation::Both) {
    mask_frames(spec, rng, config.time_mask_param);
  }
  if (kind == Augmentation::FreqMask || kind == Augmentation::Both) {
    mask_bins(spec, rng, config.freq_mask_param);
  }
  return spec;
}

}  // namespace davnav
