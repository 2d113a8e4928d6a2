#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace gazeode {

/// One eye-tracker reading in screen pixels.
struct GazeSample {
  double t = 0.0;  // seconds since session start
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const GazeSample&, const GazeSample&) = default;
};

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend bool operator==(const Vec3&, const Vec3&) = default;
};

/// A bullet impact on a character. goodness: 1 = bad, 0 = good.
struct ShotEvent {
  double t = 0.0;
  int character_id = 0;
  int goodness = 0;
  Vec3 shot_pos;
  Vec3 player_pos;
  double distance = 0.0;  // meters at shot time

  friend bool operator==(const ShotEvent&, const ShotEvent&) = default;
};

struct CharacterTrackSample {
  double t = 0.0;
  int character_id = 0;
  double distance_to_player = 0.0;
  double speed_rel_player = 0.0;
  int goodness = 0;

  friend bool operator==(const CharacterTrackSample&, const CharacterTrackSample&) = default;
};

/// Per-character time-sorted tracks, keyed by character_id.
using TrackMap = std::map<int, std::vector<CharacterTrackSample>>;

inline const std::vector<std::string> kGazeHeader{"t", "x", "y"};
inline const std::vector<std::string> kShotHeader{
    "t", "character_id", "goodness", "shot_x", "shot_y", "shot_z",
    "player_x", "player_y", "player_z", "distance"};
inline const std::vector<std::string> kTrackHeader{"t", "character_id", "distance", "speed",
                                                   "goodness"};

// Loaders validate instead of repairing: out-of-order or duplicate times are
// errors, never silently sorted.
std::vector<GazeSample> load_gaze(const std::filesystem::path& path);
std::vector<ShotEvent> load_shots(const std::filesystem::path& path);
TrackMap load_tracks(const std::filesystem::path& path);

std::string gaze_to_csv(std::span<const GazeSample> samples);
std::string shots_to_csv(std::span<const ShotEvent> shots);
/// Rows are written in the given order, which need not be grouped.
std::string tracks_to_csv(std::span<const CharacterTrackSample> samples);

void write_gaze(const std::filesystem::path& path, std::span<const GazeSample> samples);
void write_shots(const std::filesystem::path& path, std::span<const ShotEvent> shots);
void write_tracks(const std::filesystem::path& path,
                  std::span<const CharacterTrackSample> samples);

}  // namespace gazeode
