#pragma once

#include <cstdint>
#include <vector>

#include "gazeode/gaze_ingest.hpp"

namespace gazeode {

/// Shape of a synthetic play session. The generator lays out fixations and
/// shots so the learn matrix derived from the session has exactly `records`
/// rows, one bad row per entry of `ending_durations` (with that gaze
/// duration), and `transitions` good-to-bad changes in shot order.
struct GeneratorConfig {
  std::uint64_t seed = 0;
  int records = 36;
  std::vector<double> ending_durations{14.7407, 1.3207, 1.3207, 0.367, 0.1745, 1.0003};
  int transitions = 5;
  int chance_shots = 4;  // shots that land during saccades
  int characters = 20;
  int trailing_fixations = 2;  // fixations after the last shot, owned by nobody
  double gaze_rate_hz = 30.0;
  double track_rate_hz = 10.0;
};

struct Session {
  std::vector<GazeSample> gaze;
  std::vector<ShotEvent> shots;
  std::vector<CharacterTrackSample> tracks;  // grouped by character, then time
};

/// Goodness of each record in shot order. Bad records come in runs; the
/// number of runs is `transitions`, plus one when the first record is bad.
/// Throws InvalidArgument if the counts cannot be realized.
std::vector<int> goodness_sequence(int records, int bad, int transitions, std::uint64_t seed);

/// Deterministic for a given config. Throws InvalidArgument on infeasible targets.
Session generate_session(const GeneratorConfig& config);

}  // namespace gazeode
