#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gazeode/gaze_ingest.hpp"

namespace gazeode {

/// A row of the "fix" matrix.
struct FixationRecord {
  int index = 0;  // 1-based
  double t_start = 0.0;
  double t_end = 0.0;
  double duration = 0.0;  // t_end - t_start
  double mean_x = 0.0;
  double mean_y = 0.0;
  std::optional<double> gap_to_next;  // absent for the last fixation

  friend bool operator==(const FixationRecord&, const FixationRecord&) = default;
};

/// A row of the "unityfile" matrix: a shot together with the fixation covering it.
struct ShotFixationRecord {
  int fixation_index = 0;
  double shot_time = 0.0;
  double t_start = 0.0;
  double t_end = 0.0;
  double duration = 0.0;
  int goodness = 0;
  int character_id = 0;

  friend bool operator==(const ShotFixationRecord&, const ShotFixationRecord&) = default;
};

/// A row of the "learn" matrix.
struct LearnRecord {
  int fixation_count = 0;
  double gaze_duration = 0.0;  // seconds
  double distance = 0.0;       // meters at shot time
  double speed = 0.0;          // m/s at shot time
  int goodness = 0;            // 1 = bad, 0 = good

  friend bool operator==(const LearnRecord&, const LearnRecord&) = default;
};

struct FixationThresholds {
  double distance_px = 5.0;
  double time_s = 0.1;
};

double euclidean_distance(const GazeSample& a, const GazeSample& b) noexcept;

/// Chains consecutive samples while both the step distance and the step time
/// stay strictly below the thresholds. Every maximal chain of two or more
/// samples becomes one fixation.
std::vector<FixationRecord> detect_fixations(std::span<const GazeSample> samples,
                                             FixationThresholds thresholds = {});

/// Pairs each shot with the fixation whose [t_start, t_end] contains it.
/// Shots with no covering fixation are chance shots and are dropped.
std::vector<ShotFixationRecord> match_shots(std::span<const FixationRecord> fixations,
                                            std::span<const ShotEvent> shots);

/// Index (into `fixations`) of the matched shot each fixation is attributed
/// to: the earliest shot at or after the fixation's start. -1 if none.
std::vector<int> assign_fixations(std::span<const FixationRecord> fixations,
                                  std::span<const ShotFixationRecord> shot_fixations);

/// Linear interpolation of a character track at time t. Throws MissingTrack
/// outside the track's time coverage.
CharacterTrackSample sample_track(const std::vector<CharacterTrackSample>& track, double t);

/// One record per matched shot. A fixation counts toward every character shot
/// during it; a fixation with no shot during it counts toward the character of
/// the next matched shot, and toward nobody if there is none.
std::vector<LearnRecord> build_learn(std::span<const ShotFixationRecord> shot_fixations,
                                     std::span<const FixationRecord> fixations,
                                     const TrackMap& tracks);

inline const std::vector<std::string> kFixHeader{"index",  "t_start", "t_end",      "duration",
                                                 "mean_x", "mean_y",  "gap_to_next"};
inline const std::vector<std::string> kUnityHeader{"fixation_index", "shot_time", "t_start",
                                                   "t_end",          "duration",  "goodness",
                                                   "character_id"};
inline const std::vector<std::string> kLearnHeader{"fixation_count", "gaze_duration", "distance",
                                                   "speed", "goodness"};

std::string fixations_to_csv(std::span<const FixationRecord> fixations);
std::string shot_fixations_to_csv(std::span<const ShotFixationRecord> records);
std::string learn_to_csv(std::span<const LearnRecord> records);

std::vector<FixationRecord> load_fixations(const std::filesystem::path& path);
std::vector<ShotFixationRecord> load_shot_fixations(const std::filesystem::path& path);
std::vector<LearnRecord> load_learn(const std::filesystem::path& path);

}  // namespace gazeode
