#include "gazeode/fixation.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "gazeode/csv.hpp"
#include "gazeode/errors.hpp"

namespace gazeode {

double euclidean_distance(const GazeSample& a, const GazeSample& b) noexcept {
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  return std::sqrt(dx * dx + dy * dy);
}

std::vector<FixationRecord> detect_fixations(std::span<const GazeSample> samples,
                                             FixationThresholds thresholds) {
  if (!(thresholds.distance_px > 0.0) || !(thresholds.time_s > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "fixation thresholds must be positive");
  }
  std::vector<FixationRecord> out;
  const std::size_t n = samples.size();
  std::size_t begin = 0;
  while (begin < n) {
    std::size_t end = begin;  // inclusive
    while (end + 1 < n) {
      const auto& a = samples[end];
      const auto& b = samples[end + 1];
      if (euclidean_distance(a, b) < thresholds.distance_px && b.t - a.t < thresholds.time_s) {
        ++end;
      } else {
        break;
      }
    }
    if (end > begin) {
      double sx = 0.0;
      double sy = 0.0;
      for (std::size_t i = begin; i <= end; ++i) {
        sx += samples[i].x;
        sy += samples[i].y;
      }
      const double count = static_cast<double>(end - begin + 1);
      FixationRecord f;
      f.index = static_cast<int>(out.size()) + 1;
      f.t_start = samples[begin].t;
      f.t_end = samples[end].t;
      f.duration = f.t_end - f.t_start;
      f.mean_x = sx / count;
      f.mean_y = sy / count;
      out.push_back(f);
    }
    begin = end + 1;
  }
  for (std::size_t i = 0; i + 1 < out.size(); ++i) {
    out[i].gap_to_next = out[i + 1].t_start - out[i].t_end;
  }
  return out;
}

std::vector<ShotFixationRecord> match_shots(std::span<const FixationRecord> fixations,
                                            std::span<const ShotEvent> shots) {
  std::vector<ShotFixationRecord> out;
  for (const auto& shot : shots) {
    // fixations are sorted by start; only those starting at or before the shot can cover it
    const auto last = std::upper_bound(
        fixations.begin(), fixations.end(), shot.t,
        [](double t, const FixationRecord& f) { return t < f.t_start; });
    const FixationRecord* cover = nullptr;
    for (auto it = fixations.begin(); it != last; ++it) {
      if (shot.t <= it->t_end) {
        if (cover != nullptr) {
          throw Error(ErrorKind::AmbiguousMatch,
                      "shot at t=" + csv::format_double(shot.t) + " lies in fixations " +
                          std::to_string(cover->index) + " and " + std::to_string(it->index));
        }
        cover = &*it;
      }
    }
    if (cover == nullptr) continue;  // chance shot
    out.push_back({cover->index, shot.t, cover->t_start, cover->t_end, cover->duration,
                   shot.goodness, shot.character_id});
  }
  return out;
}

std::vector<int> assign_fixations(std::span<const FixationRecord> fixations,
                                  std::span<const ShotFixationRecord> shot_fixations) {
  std::vector<int> owner(fixations.size(), -1);
  std::size_t s = 0;
  for (std::size_t f = 0; f < fixations.size(); ++f) {
    while (s < shot_fixations.size() && shot_fixations[s].shot_time < fixations[f].t_start) ++s;
    if (s < shot_fixations.size()) owner[f] = static_cast<int>(s);
  }
  return owner;
}

CharacterTrackSample sample_track(const std::vector<CharacterTrackSample>& track, double t) {
  if (track.empty() || t < track.front().t || t > track.back().t) {
    throw Error(ErrorKind::MissingTrack,
                "no track coverage at t=" + csv::format_double(t) +
                    (track.empty() ? std::string{} : " for character " +
                                                         std::to_string(track.front().character_id)));
  }
  const auto hi = std::lower_bound(track.begin(), track.end(), t,
                                   [](const CharacterTrackSample& s, double v) { return s.t < v; });
  if (hi->t == t) return *hi;
  const auto lo = hi - 1;
  const double w = (t - lo->t) / (hi->t - lo->t);
  CharacterTrackSample out = *lo;
  out.t = t;
  out.distance_to_player = lo->distance_to_player + w * (hi->distance_to_player - lo->distance_to_player);
  out.speed_rel_player = lo->speed_rel_player + w * (hi->speed_rel_player - lo->speed_rel_player);
  return out;
}

std::vector<LearnRecord> build_learn(std::span<const ShotFixationRecord> shot_fixations,
                                     std::span<const FixationRecord> fixations,
                                     const TrackMap& tracks) {
  const auto owner = assign_fixations(fixations, shot_fixations);
  // Characters shot during each fixation. A fixation belongs to all of them,
  // or, when nothing was shot during it, to the character of the next shot.
  std::vector<std::vector<int>> shot_during(fixations.size());
  std::map<int, std::size_t> position;
  for (std::size_t f = 0; f < fixations.size(); ++f) position[fixations[f].index] = f;
  for (const auto& s : shot_fixations) {
    if (const auto it = position.find(s.fixation_index); it != position.end()) {
      shot_during[it->second].push_back(s.character_id);
    }
  }
  auto belongs = [&](std::size_t f, int character) {
    if (shot_during[f].empty()) {
      return owner[f] >= 0 && shot_fixations[static_cast<std::size_t>(owner[f])].character_id == character;
    }
    return std::find(shot_during[f].begin(), shot_during[f].end(), character) != shot_during[f].end();
  };

  std::vector<LearnRecord> out;
  out.reserve(shot_fixations.size());
  for (const auto& shot : shot_fixations) {
    const auto track = tracks.find(shot.character_id);
    if (track == tracks.end()) {
      throw Error(ErrorKind::MissingTrack,
                  "character " + std::to_string(shot.character_id) + " has no track data");
    }
    LearnRecord rec;
    for (std::size_t f = 0; f < fixations.size(); ++f) {
      if (fixations[f].t_start > shot.shot_time) break;
      if (!belongs(f, shot.character_id)) continue;
      ++rec.fixation_count;
      rec.gaze_duration += fixations[f].duration;
    }
    const auto at = sample_track(track->second, shot.shot_time);
    rec.distance = at.distance_to_player;
    rec.speed = at.speed_rel_player;
    rec.goodness = shot.goodness;
    out.push_back(rec);
  }
  return out;
}

std::string fixations_to_csv(std::span<const FixationRecord> fixations) {
  std::string out = csv::join(kFixHeader) + "\n";
  for (const auto& f : fixations) {
    out += csv::join({std::to_string(f.index), csv::format_double(f.t_start),
                      csv::format_double(f.t_end), csv::format_double(f.duration),
                      csv::format_double(f.mean_x), csv::format_double(f.mean_y),
                      f.gap_to_next ? csv::format_double(*f.gap_to_next) : std::string{}});
    out += '\n';
  }
  return out;
}

std::string shot_fixations_to_csv(std::span<const ShotFixationRecord> records) {
  std::string out = csv::join(kUnityHeader) + "\n";
  for (const auto& r : records) {
    out += csv::join({std::to_string(r.fixation_index), csv::format_double(r.shot_time),
                      csv::format_double(r.t_start), csv::format_double(r.t_end),
                      csv::format_double(r.duration), std::to_string(r.goodness),
                      std::to_string(r.character_id)});
    out += '\n';
  }
  return out;
}

std::string learn_to_csv(std::span<const LearnRecord> records) {
  std::string out = csv::join(kLearnHeader) + "\n";
  for (const auto& r : records) {
    out += csv::join({std::to_string(r.fixation_count), csv::format_double(r.gaze_duration),
                      csv::format_double(r.distance), csv::format_double(r.speed),
                      std::to_string(r.goodness)});
    out += '\n';
  }
  return out;
}

std::vector<FixationRecord> load_fixations(const std::filesystem::path& path) {
  const auto table = csv::read(path);
  if (table.header.empty()) return {};
  csv::expect_header(table, kFixHeader, path);
  std::vector<FixationRecord> out;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const csv::RowReader row(path, table, r);
    FixationRecord f{row.integer(0), row.real(1),  row.real(2),
                     row.real(3),    row.real(4),  row.real(5),
                     row.optional_real(6)};
    if (f.index != static_cast<int>(out.size()) + 1) row.fail("fixation indices must be consecutive from 1");
    if (f.t_end < f.t_start) row.fail("t_end precedes t_start", ErrorKind::InvalidValue);
    if (!out.empty() && !(f.t_start > out.back().t_end)) {
      row.fail("fixations overlap or are out of order", ErrorKind::NonMonotonicTime);
    }
    out.push_back(f);
  }
  return out;
}

std::vector<ShotFixationRecord> load_shot_fixations(const std::filesystem::path& path) {
  const auto table = csv::read(path);
  if (table.header.empty()) return {};
  csv::expect_header(table, kUnityHeader, path);
  std::vector<ShotFixationRecord> out;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const csv::RowReader row(path, table, r);
    out.push_back({row.integer(0), row.real(1), row.real(2), row.real(3), row.real(4),
                   row.binary(5), row.integer(6)});
  }
  return out;
}

std::vector<LearnRecord> load_learn(const std::filesystem::path& path) {
  const auto table = csv::read(path);
  if (table.header.empty()) return {};
  csv::expect_header(table, kLearnHeader, path);
  std::vector<LearnRecord> out;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const csv::RowReader row(path, table, r);
    LearnRecord rec{row.integer(0), row.real(1), row.real(2), row.real(3), row.binary(4)};
    if (rec.fixation_count < 1) row.fail("fixation_count must be at least 1", ErrorKind::InvalidValue);
    if (!(rec.gaze_duration > 0.0)) row.fail("gaze_duration must be positive", ErrorKind::InvalidValue);
    out.push_back(rec);
  }
  return out;
}

}  // namespace gazeode
