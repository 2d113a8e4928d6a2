#include "gazeode/pipeline.hpp"

#include <algorithm>
#include <filesystem>

#include "gazeode/csv.hpp"
#include "gazeode/errors.hpp"
#include "gazeode/fixation.hpp"
#include "gazeode/gaze_ingest.hpp"
#include "gazeode/generator.hpp"
#include "gazeode/hlstm.hpp"
#include "gazeode/ode.hpp"
#include "gazeode/params.hpp"
#include "gazeode/report.hpp"

namespace gazeode::pipeline {

namespace fs = std::filesystem;

namespace {

void say(const Log& log, const std::string& msg) {
  if (log) log(msg);
}

void prepare_out(const RunConfig& config) {
  std::error_code ec;
  fs::create_directories(config.out, ec);
  if (ec || !fs::is_directory(config.out)) {
    throw Error(ErrorKind::Io, "cannot create output directory " + config.out.string());
  }
}

fs::path out_file(const RunConfig& config, const char* name) { return config.out / name; }

}  // namespace

OdeParams with_overrides(OdeParams params, const RunConfig& config) {
  if (config.lambda) params.lambda = *config.lambda;
  if (config.mu) params.mu = *config.mu;
  if (config.m) params.m = *config.m;
  if (config.k) params.k = *config.k;
  return params;
}

void generate(const RunConfig& config, const Log& log) {
  prepare_out(config);
  GeneratorConfig gen = config.generator;
  gen.seed = config.seed;
  const Session session = generate_session(gen);
  write_gaze(out_file(config, "gaze.csv"), session.gaze);
  write_shots(out_file(config, "shots.csv"), session.shots);
  write_tracks(out_file(config, "tracks.csv"), session.tracks);
  say(log, "generate: " + std::to_string(session.gaze.size()) + " gaze samples, " +
               std::to_string(session.shots.size()) + " shots");
}

void detect(const RunConfig& config, const Log& log) {
  const auto gaze = load_gaze(config.gaze_path());
  const auto fixations = detect_fixations(gaze, config.thresholds);
  prepare_out(config);
  csv::write_text(out_file(config, "fix.csv"), fixations_to_csv(fixations));
  say(log, "detect: " + std::to_string(fixations.size()) + " fixations");
}

void fuse(const RunConfig& config, const Log& log) {
  const auto fixations = load_fixations(out_file(config, "fix.csv"));
  const auto shots = load_shots(config.shots_path());
  const auto tracks = load_tracks(config.tracks_path());
  const auto matched = match_shots(fixations, shots);
  const auto learn = build_learn(matched, fixations, tracks);
  prepare_out(config);
  csv::write_text(out_file(config, "unityfile.csv"), shot_fixations_to_csv(matched));
  csv::write_text(out_file(config, "learn.csv"), learn_to_csv(learn));
  say(log, "fuse: " + std::to_string(matched.size()) + " of " + std::to_string(shots.size()) +
               " shots matched");
}

void estimate(const RunConfig& config, const Log& log) {
  OdeParams params;
  if (!(config.lambda && config.mu && config.m && config.k)) {
    const auto learn = load_learn(out_file(config, "learn.csv"));
    if (learn.empty()) throw Error(ErrorKind::EmptyInput, "learn matrix has no records");
    params.lambda = config.lambda ? *config.lambda : estimate_lambda(learn);
    params.mu = config.mu ? *config.mu : estimate_mu(learn);
    params.m = config.m ? *config.m : estimate_m(learn);
    params.k = config.k ? *config.k
                        : estimate_k(learn, config.k_refs.min_distance, config.k_refs.max_speed);
  }
  params = with_overrides(params, config);
  validate(params);
  prepare_out(config);
  csv::write_text(out_file(config, "params.csv"), params_to_csv(params));
  say(log, "estimate: lambda=" + csv::format_double(params.lambda, 9) +
               " mu=" + csv::format_double(params.mu, 9) + " m=" + csv::format_double(params.m, 9) +
               " k=" + csv::format_double(params.k, 9));
}

void simulate(const RunConfig& config, const Log& log) {
  const OdeParams params = with_overrides(load_params(out_file(config, "params.csv")), config);
  validate(params);
  const Trajectory traj = integrate_rk4(config.initial, params, config.t0, config.t1, config.intervals);
  prepare_out(config);
  csv::write_text(out_file(config, "trajectory.csv"), trajectory_to_csv(traj));
  say(log, "simulate: " + std::to_string(traj.size()) + " grid points");
}

void train(const RunConfig& config, const Log& log) {
  const Trajectory traj = load_trajectory(out_file(config, "trajectory.csv"));
  hlstm::TrainConfig tc = config.train;
  tc.seed = config.seed;
  const int every = std::max(1, tc.epochs / 10);
  const auto result = hlstm::train(hlstm::dataset_from(traj), tc, [&](int epoch, double loss) {
    if (epoch % every == 0) say(log, "train: epoch " + std::to_string(epoch) + " mse " + csv::format_double(loss, 6));
  });
  prepare_out(config);
  hlstm::save_model(config.out, {result.net, result.input_norm, result.target_norm, tc, result.final_mse});
  csv::write_text(out_file(config, "loss.csv"), hlstm::loss_to_csv(result.loss_history));
  say(log, "train: final mse " + csv::format_double(result.final_mse, 6));
}

void report(const RunConfig& config, const Log& log) {
  const auto model = hlstm::load_model(config.out);
  const Trajectory traj = load_trajectory(out_file(config, "trajectory.csv"));
  const OdeParams params = load_params(out_file(config, "params.csv"));
  const PredictionReport rep = predict_report(model, traj);

  std::string summary;
  auto line = [&](const std::string& key, const std::string& value) { summary += key + " = " + value + "\n"; };
  line("lambda", csv::format_double(params.lambda, 9));
  line("mu", csv::format_double(params.mu, 9));
  line("m", csv::format_double(params.m, 9));
  line("k", csv::format_double(params.k, 9));
  line("seed", std::to_string(model.config.seed));
  line("epochs", std::to_string(model.config.epochs));
  line("final_mse", csv::format_double(model.final_mse));
  line("report_mse", csv::format_double(rep.normalized_mse));
  for (std::size_t c = 0; c < 3; ++c) {
    const std::string name = kChannelNames[c];
    line(name + "_residual_mean", csv::format_double(rep.summary[c].mean));
    line(name + "_residual_std", csv::format_double(rep.summary[c].stddev));
    line(name + "_residual_max_abs", csv::format_double(rep.summary[c].max_abs));
  }

  prepare_out(config);
  csv::write_text(out_file(config, "predictions.csv"), predictions_to_csv(rep));
  csv::write_text(out_file(config, "errors.csv"), errors_to_csv(rep));
  csv::write_text(out_file(config, "summary.txt"), summary);
  say(log, "report: normalized mse " + csv::format_double(rep.normalized_mse, 6));
}

void all(const RunConfig& config, const Log& log) {
  // Explicit input files replace the synthetic session.
  if (!config.gaze && !config.shots && !config.tracks) generate(config, log);
  detect(config, log);
  fuse(config, log);
  estimate(config, log);
  simulate(config, log);
  train(config, log);
  report(config, log);
}

}  // namespace gazeode::pipeline
