#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "gazeode/fixation.hpp"
#include "gazeode/generator.hpp"
#include "gazeode/hlstm.hpp"
#include "gazeode/ode.hpp"
#include "gazeode/params.hpp"

namespace gazeode {

/// Everything one pipeline run depends on. Unset input paths resolve to the
/// canonical file names inside `out`.
struct RunConfig {
  std::filesystem::path out{"run"};
  std::optional<std::filesystem::path> gaze;
  std::optional<std::filesystem::path> shots;
  std::optional<std::filesystem::path> tracks;

  std::uint64_t seed = 0;
  GeneratorConfig generator;
  FixationThresholds thresholds;

  // Replace individual estimates; unset ones come from the learn matrix.
  std::optional<double> lambda;
  std::optional<double> mu;
  std::optional<double> m;
  std::optional<double> k;
  KReferences k_refs;

  InitialConditions initial;
  double t0 = 0.0;
  double t1 = 10.0;
  int intervals = 2025;

  hlstm::TrainConfig train;

  std::filesystem::path gaze_path() const { return gaze.value_or(out / "gaze.csv"); }
  std::filesystem::path shots_path() const { return shots.value_or(out / "shots.csv"); }
  std::filesystem::path tracks_path() const { return tracks.value_or(out / "tracks.csv"); }

  /// Sets one field from its text form. Throws InvalidArgument for unknown
  /// keys or unparsable values.
  void set(const std::string& key, const std::string& value);
};

/// Recognized keys, in the order they are documented and echoed.
const std::vector<std::string>& config_keys();

/// Flat "key = value" text; '#' starts a comment, blank lines are ignored.
/// Applies the file on top of `base`.
RunConfig load_config(const std::filesystem::path& path, RunConfig base = {});

/// Inverse of load_config for every key that has a value.
std::string config_to_text(const RunConfig& config);

}  // namespace gazeode
