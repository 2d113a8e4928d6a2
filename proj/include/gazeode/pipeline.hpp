#pragma once

#include <functional>
#include <string>
#include <string_view>

#include "gazeode/config.hpp"

namespace gazeode::pipeline {

// Each stage reads its inputs from files, validates them, and writes its
// outputs into config.out. Stages share no in-memory state, so any of them
// can be rerun on its own.

using Log = std::function<void(std::string_view)>;

void generate(const RunConfig& config, const Log& log = {});  // gaze.csv shots.csv tracks.csv
void detect(const RunConfig& config, const Log& log = {});    // fix.csv
void fuse(const RunConfig& config, const Log& log = {});      // unityfile.csv learn.csv
void estimate(const RunConfig& config, const Log& log = {});  // params.csv
void simulate(const RunConfig& config, const Log& log = {});  // trajectory.csv
void train(const RunConfig& config, const Log& log = {});     // model.json model.bin loss.csv
void report(const RunConfig& config, const Log& log = {});    // predictions.csv errors.csv summary.txt
void all(const RunConfig& config, const Log& log = {});

/// Applies the config's parameter overrides on top of `params`.
OdeParams with_overrides(OdeParams params, const RunConfig& config);

}  // namespace gazeode::pipeline
