#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "davnav/engine.hpp"
#include "davnav/metrics.hpp"

namespace davnav {

// Line-delimited log: a header record, one record per raw step and an end
// record carrying the outcome, the scores and a checksum over every
// preceding byte.
struct LoggedEpisode {
  EpisodeLog log;
  std::optional<EpisodeScore> score;
  std::optional<InterceptResult> oracle;
};

std::string serialize_log(const LoggedEpisode& episode);

// Throws ParseError on malformed input or a checksum mismatch.
LoggedEpisode parse_log(std::string_view text);
LoggedEpisode load_log(const std::filesystem::path& path);

// 64-bit FNV-1a, rendered as 16 lowercase hex digits.
std::string checksum_hex(std::string_view bytes);

// Writes to a sibling temporary file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);
std::string read_file(const std::filesystem::path& path);

}  // namespace davnav
