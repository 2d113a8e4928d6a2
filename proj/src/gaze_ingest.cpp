#include "gazeode/gaze_ingest.hpp"

#include <string>

#include "gazeode/csv.hpp"
#include "gazeode/errors.hpp"

namespace gazeode {

std::vector<GazeSample> load_gaze(const std::filesystem::path& path) {
  const auto table = csv::read(path);
  if (table.header.empty() || table.rows.empty()) {
    throw Error(ErrorKind::EmptyFile, path.string() + " contains no gaze samples");
  }
  csv::expect_header(table, kGazeHeader, path);

  std::vector<GazeSample> out;
  out.reserve(table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const csv::RowReader row(path, table, r);
    GazeSample s{row.real(0), row.real(1), row.real(2)};
    if (s.t < 0.0) row.fail("negative time", ErrorKind::InvalidValue);
    if (!out.empty() && !(s.t > out.back().t)) {
      row.fail("time " + csv::format_double(s.t) + " does not increase", ErrorKind::NonMonotonicTime);
    }
    out.push_back(s);
  }
  return out;
}

std::vector<ShotEvent> load_shots(const std::filesystem::path& path) {
  const auto table = csv::read(path);
  if (table.header.empty()) return {};
  csv::expect_header(table, kShotHeader, path);

  std::vector<ShotEvent> out;
  out.reserve(table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const csv::RowReader row(path, table, r);
    ShotEvent s;
    s.t = row.real(0);
    s.character_id = row.integer(1);
    s.goodness = row.binary(2);
    s.shot_pos = {row.real(3), row.real(4), row.real(5)};
    s.player_pos = {row.real(6), row.real(7), row.real(8)};
    s.distance = row.real(9);
    if (s.t < 0.0) row.fail("negative time", ErrorKind::InvalidValue);
    if (s.distance < 0.0) row.fail("negative distance", ErrorKind::InvalidValue);
    if (!out.empty() && !(s.t > out.back().t)) {
      row.fail("time " + csv::format_double(s.t) + " does not increase", ErrorKind::NonMonotonicTime);
    }
    out.push_back(s);
  }
  return out;
}

TrackMap load_tracks(const std::filesystem::path& path) {
  const auto table = csv::read(path);
  if (table.header.empty()) return {};
  csv::expect_header(table, kTrackHeader, path);

  TrackMap out;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const csv::RowReader row(path, table, r);
    CharacterTrackSample s;
    s.t = row.real(0);
    s.character_id = row.integer(1);
    s.distance_to_player = row.real(2);
    s.speed_rel_player = row.real(3);
    s.goodness = row.binary(4);
    if (s.distance_to_player < 0.0) row.fail("negative distance", ErrorKind::InvalidValue);
    auto& group = out[s.character_id];
    if (!group.empty() && !(s.t > group.back().t)) {
      row.fail("time " + csv::format_double(s.t) + " does not increase for character " +
                   std::to_string(s.character_id),
               ErrorKind::NonMonotonicTime);
    }
    group.push_back(s);
  }
  return out;
}

std::string gaze_to_csv(std::span<const GazeSample> samples) {
  std::string out = csv::join(kGazeHeader) + "\n";
  for (const auto& s : samples) {
    out += csv::format_double(s.t) + ',' + csv::format_double(s.x) + ',' +
           csv::format_double(s.y) + '\n';
  }
  return out;
}

std::string shots_to_csv(std::span<const ShotEvent> shots) {
  std::string out = csv::join(kShotHeader) + "\n";
  for (const auto& s : shots) {
    out += csv::join({csv::format_double(s.t), std::to_string(s.character_id),
                      std::to_string(s.goodness), csv::format_double(s.shot_pos.x),
                      csv::format_double(s.shot_pos.y), csv::format_double(s.shot_pos.z),
                      csv::format_double(s.player_pos.x), csv::format_double(s.player_pos.y),
                      csv::format_double(s.player_pos.z), csv::format_double(s.distance)});
    out += '\n';
  }
  return out;
}

std::string tracks_to_csv(std::span<const CharacterTrackSample> samples) {
  std::string out = csv::join(kTrackHeader) + "\n";
  for (const auto& s : samples) {
    out += csv::join({csv::format_double(s.t), std::to_string(s.character_id),
                      csv::format_double(s.distance_to_player),
                      csv::format_double(s.speed_rel_player), std::to_string(s.goodness)});
    out += '\n';
  }
  return out;
}

void write_gaze(const std::filesystem::path& path, std::span<const GazeSample> samples) {
  csv::write_text(path, gaze_to_csv(samples));
}

void write_shots(const std::filesystem::path& path, std::span<const ShotEvent> shots) {
  csv::write_text(path, shots_to_csv(shots));
}

void write_tracks(const std::filesystem::path& path,
                  std::span<const CharacterTrackSample> samples) {
  csv::write_text(path, tracks_to_csv(samples));
}

}  // namespace gazeode
