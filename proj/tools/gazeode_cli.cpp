// Command-line driver for the gaze -> parameters -> ODE -> HLSTM pipeline.
//
//   gazeode all --seed 0 --out run
//   gazeode simulate --config run.cfg --v0 1
//
// Settings come from defaults, then --config, then individual flags.
// Exit codes: 0 ok, 1 I/O, 2 invalid input or arguments, 3 numerical failure.

#include <filesystem>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"

#include "gazeode/config.hpp"
#include "gazeode/csv.hpp"
#include "gazeode/errors.hpp"
#include "gazeode/pipeline.hpp"

namespace {

using Stage = void (*)(const gazeode::RunConfig&, const gazeode::pipeline::Log&);

std::string flag_name(std::string key) {
  for (char& ch : key) {
    if (ch == '_') ch = '-';
  }
  return "--" + key;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gaze fixation pipeline, ODE simulation and HLSTM training"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  bool quiet = false;
  app.add_option("--config", config_path, "Flat key = value config file")->check(CLI::ExistingFile);
  app.add_flag("-q,--quiet", quiet, "Suppress progress lines on stderr");

  std::map<std::string, std::string> overrides;
  for (const auto& key : gazeode::config_keys()) {
    app.add_option_function<std::string>(
        flag_name(key), [&overrides, key](const std::string& v) { overrides[key] = v; },
        "Override config key '" + key + "'");
  }

  const std::vector<std::pair<const char*, Stage>> stages{
      {"generate", gazeode::pipeline::generate}, {"detect", gazeode::pipeline::detect},
      {"fuse", gazeode::pipeline::fuse},         {"estimate", gazeode::pipeline::estimate},
      {"simulate", gazeode::pipeline::simulate}, {"train", gazeode::pipeline::train},
      {"report", gazeode::pipeline::report},     {"all", gazeode::pipeline::all},
  };
  const std::map<std::string, std::string> help{
      {"generate", "Write a synthetic session (gaze.csv, shots.csv, tracks.csv)"},
      {"detect", "Detect fixations (fix.csv)"},
      {"fuse", "Match shots to fixations and build the learn matrix"},
      {"estimate", "Estimate lambda, mu, m, k (params.csv)"},
      {"simulate", "Integrate the ODE system with RK4 (trajectory.csv)"},
      {"train", "Train the HLSTM on the trajectory (model.json, model.bin, loss.csv)"},
      {"report", "Predictions, residual histograms and run summary"},
      {"all", "Run every stage in order"},
  };
  std::vector<CLI::App*> subs;
  for (const auto& [name, fn] : stages) subs.push_back(app.add_subcommand(name, help.at(name)));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const auto log = [quiet](std::string_view msg) {
    if (!quiet) std::cerr << msg << '\n';
  };
  try {
    gazeode::RunConfig config;
    if (!config_path.empty()) config = gazeode::load_config(config_path);
    for (const auto& [key, value] : overrides) config.set(key, value);

    for (std::size_t i = 0; i < stages.size(); ++i) {
      if (!subs[i]->parsed()) continue;
      stages[i].second(config, log);
      gazeode::csv::write_text(config.out / "config.txt", gazeode::config_to_text(config));
    }
  } catch (const gazeode::Error& e) {
    std::cerr << "gazeode: error: " << e.what() << '\n';
    return static_cast<int>(e.category());
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "gazeode: error: " << e.what() << '\n';
    return static_cast<int>(gazeode::ErrorCategory::Io);
  } catch (const std::exception& e) {
    std::cerr << "gazeode: error: " << e.what() << '\n';
    return static_cast<int>(gazeode::ErrorCategory::Io);
  }
  return 0;
}
