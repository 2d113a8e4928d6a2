// Acceptance checks. Prints one PASS/FAIL line per criterion; exit status is
// the number of failures.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <string>

#include "cli_runner.hpp"
#include "gazeode/fixation.hpp"
#include "gazeode/generator.hpp"
#include "gazeode/hermite.hpp"
#include "gazeode/hlstm.hpp"
#include "gazeode/ode.hpp"
#include "gazeode/params.hpp"
#include "gazeode/random.hpp"
#include "oracles.hpp"

using namespace gazeode;
namespace fs = std::filesystem;

namespace {

const OdeParams kDefaults{1.90236, 0.3170, 0.1389, 2.0};

struct Outcome {
  bool pass = true;
  std::string detail;

  void check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

Outcome parameter_reproduction() {
  Outcome o;
  const double ending[] = {14.7407, 1.3207, 1.3207, 0.367, 0.1745, 1.0003};
  const int bad_at[] = {0, 4, 11, 17, 25, 33};
  std::vector<LearnRecord> r(36);
  for (int i = 0; i < 36; ++i) r[i] = {1, 0.4 + 0.02 * i, 12.0 + 0.5 * i, 0.8 + 0.05 * i, 0};
  for (int b = 0; b < 6; ++b) r[bad_at[b]] = {1, ending[b], 12.0 + 0.5 * bad_at[b], 0.8 + 0.05 * bad_at[b], 1};
  const OdeParams p = estimate_params(r);
  o.check(std::abs(p.mu - 0.31706) < 5e-4, "mu " + num(p.mu));
  o.check(std::abs(p.m - 0.13889) < 5e-4, "m " + num(p.m));
  o.check(p.k == 2.0, "k " + num(p.k));
  o.check(std::abs(p.lambda - 36.0 / 18.9239) < 5e-4 && std::abs(p.lambda - 1.90236) < 5e-4,
          "lambda " + num(p.lambda));
  o.detail = o.pass ? "lambda=" + num(p.lambda) + " mu=" + num(p.mu) + " m=" + num(p.m) + " k=" + num(p.k)
                    : o.detail;
  return o;
}

double exp_error(int steps) {
  OdeParams p = kDefaults;
  p.lambda = 0.0;
  const auto traj = integrate_rk4({}, p, 0.0, 10.0, steps);
  return std::abs(traj.states.back().n - 70.0 * std::exp(-p.mu * 10.0));
}

Outcome ode_oracles() {
  Outcome o;
  const auto traj = integrate_rk4({}, kDefaults, 0.0, 10.0, 2025);
  const double rv = analytic_residual_v(traj, kDefaults, {});
  const double rg = analytic_residual_g(traj, kDefaults, {});
  o.check(rv < 1e-8, "V invariant " + num(rv));
  o.check(rg < 1e-8, "G invariant " + num(rg));

  OdeParams decoupled = kDefaults;
  decoupled.lambda = 0.0;
  const auto d = integrate_rk4({}, decoupled, 0.0, 10.0, 2025);
  double worst = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double exact = 70.0 * std::exp(-decoupled.mu * d.times[i]);
    worst = std::max(worst, std::abs(d.states[i].n - exact) / exact);
  }
  o.check(worst < 1e-8, "decoupled N rel " + num(worst));

  const double ratio = exp_error(25) / exp_error(50);
  o.check(std::abs(ratio - 16.0) <= 2.0, "convergence ratio " + num(ratio));
  if (o.pass) o.detail = "invariants " + num(rv) + "/" + num(rg) + ", ratio " + num(ratio);
  return o;
}

Outcome hermite_identities() {
  Outcome o;
  const double sqrt_pi = std::sqrt(M_PI);
  const auto g = hermite::orthogonality_gram(10, 2001);
  const auto dg = hermite::derivative_gram(10, 2001);
  double worst = 0.0;
  double worst_d = 0.0;
  for (int n = 0; n <= 10; ++n) {
    for (int m = 0; m <= 10; ++m) {
      worst = std::max(worst, std::abs(g(n, m) - (n == m ? sqrt_pi : 0.0)));
      double e = 0.0;
      if (m == n) e = (n + 0.5) * sqrt_pi;
      if (m == n - 2) e = -std::sqrt(M_PI * n * (n - 1)) / 2;
      if (m == n + 2) e = -std::sqrt(M_PI * (n + 1) * (n + 2)) / 2;
      worst_d = std::max(worst_d, std::abs(dg(n, m) - e));
    }
  }
  o.check(worst < 1e-6, "Gram " + num(worst));
  o.check(worst_d < 1e-6, "derivative Gram " + num(worst_d));

  double rel = 0.0;
  for (int n = 0; n <= 12; ++n) {
    for (int i = 0; i <= 1000; ++i) {
      const double x = -5.0 + 0.01 * i + 0.001;
      const long double ref = oracle::hermite_direct(n, x);
      rel = std::max(rel, static_cast<double>(std::abs(hermite::hermite_fn(n, x) - ref) / std::abs(ref)));
    }
  }
  o.check(rel < 1e-10, "recurrence rel " + num(rel));
  if (o.pass) o.detail = "Gram " + num(worst) + ", derivative Gram " + num(worst_d) + ", recurrence " + num(rel);
  return o;
}

Outcome gradient_fidelity() {
  Outcome o;
  hlstm::Architecture arch;
  arch.hidden_size = 2;
  Rng rng(2024);
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const auto net = hlstm::Network::random(arch, seed, 0.5);
    hlstm::Matrix x(1, 3);
    hlstm::Matrix y(3, 3);
    for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = rng.uniform(-1.5, 1.5);
    for (Eigen::Index i = 0; i < y.size(); ++i) y.data()[i] = rng.uniform(-1.5, 1.5);
    const auto analytic = hlstm::backward(net, hlstm::network_forward(net, x), y);
    worst = std::max(worst, oracle::max_relative_error(analytic, oracle::numerical_gradient(net, x, y)));
  }
  o.check(worst < 1e-4, "max relative error " + num(worst));
  if (o.pass) o.detail = "max relative error " + num(worst);
  return o;
}

Outcome training_behavior() {
  Outcome o;
  const auto data = hlstm::dataset_from(integrate_rk4({}, kDefaults, 0.0, 10.0, 2025));
  hlstm::TrainConfig cfg;
  cfg.seed = 0;
  const auto a = hlstm::train(data, cfg);
  const auto b = hlstm::train(data, cfg);
  o.check(a.loss_history == b.loss_history, "same-seed histories differ");

  const auto s = hlstm::smooth(a.loss_history, 50);
  int rises = 0;
  std::size_t first = 0;
  double largest = 0.0;
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (s[i] > s[i - 1]) {
      if (rises++ == 0) first = i;
      largest = std::max(largest, s[i] / s[i - 1] - 1.0);
    }
  }
  o.check(rises == 0, std::to_string(rises) + " rises in the smoothed curve, first at window " +
                          std::to_string(first) + ", largest +" + num(100 * largest) + "%");
  o.check(a.final_mse < 1e-2, "final mse " + num(a.final_mse));
  o.detail = (o.pass ? "" : o.detail + "; ") + "final mse " + num(a.final_mse);
  return o;
}

Outcome fixation_equivalence() {
  Outcome o;
  Rng rng(6);
  int mismatches = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto s = oracle::random_stream(rng);
    if (detect_fixations(s) != oracle::maximal_chains(s, {})) ++mismatches;
  }
  o.check(mismatches == 0, std::to_string(mismatches) + " of 1000 streams differ from the oracle");

  int leaked = 0;
  int chance_total = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    GeneratorConfig gc;
    gc.seed = seed;
    const auto session = generate_session(gc);
    const auto fix = detect_fixations(session.gaze);
    const auto matched = match_shots(fix, session.shots);
    TrackMap tracks;
    for (const auto& t : session.tracks) tracks[t.character_id].push_back(t);
    const auto learn = build_learn(matched, fix, tracks);
    for (const auto& shot : session.shots) {
      const bool covered = std::any_of(fix.begin(), fix.end(), [&](const FixationRecord& f) {
        return f.t_start <= shot.t && shot.t <= f.t_end;
      });
      if (covered) continue;
      ++chance_total;
      leaked += static_cast<int>(std::count_if(matched.begin(), matched.end(),
                                               [&](const ShotFixationRecord& m) { return m.shot_time == shot.t; }));
    }
    if (learn.size() != matched.size()) ++leaked;
  }
  o.check(chance_total == 80, std::to_string(chance_total) + " chance shots generated, expected 80");
  o.check(leaked == 0, std::to_string(leaked) + " chance shots reached the learn matrix");
  if (o.pass) o.detail = "1000 streams, " + std::to_string(chance_total) + " chance shots dropped";
  return o;
}

std::map<std::string, std::string> read_tree(const fs::path& root) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (!e.is_regular_file()) continue;
    std::ifstream in(e.path(), std::ios::binary);
    files[fs::relative(e.path(), root).string()] =
        std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  }
  return files;
}

Outcome end_to_end_determinism() {
  Outcome o;
  const fs::path base = fs::temp_directory_path() / "gazeode_acceptance";
  fs::remove_all(base);
  fs::create_directories(base);
  // the same command line twice, each from its own working directory
  for (const char* name : {"a", "b"}) {
    fs::create_directories(base / name);
    const auto r = cli::run("all -q --seed 0", base / name);
    o.check(r.code == 0, std::string("run ") + name + " exited " + std::to_string(r.code) + ": " + r.err);
  }
  if (!o.pass) return o;
  const auto a = read_tree(base / "a" / "run");
  const auto b = read_tree(base / "b" / "run");
  o.check(!a.empty(), "empty artifact tree");
  std::vector<std::string> differ;
  for (const auto& [name, bytes] : a) {
    const auto it = b.find(name);
    if (it == b.end() || it->second != bytes) differ.push_back(name);
  }
  for (const auto& [name, bytes] : b) {
    if (!a.contains(name)) differ.push_back(name);
  }
  o.check(differ.empty(), std::to_string(differ.size()) + " files differ" + (differ.empty() ? "" : ", e.g. " + differ[0]));
  if (o.pass) o.detail = std::to_string(a.size()) + " files byte-identical";
  fs::remove_all(base);
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"parameter reproduction", parameter_reproduction},
      {"ODE oracle correctness", ode_oracles},
      {"Hermite identities", hermite_identities},
      {"gradient fidelity", gradient_fidelity},
      {"training behavior", training_behavior},
      {"fixation pipeline equivalence", fixation_equivalence},
      {"end-to-end determinism", end_to_end_determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failures += !o.pass;
    std::printf("%s criterion %zu (%s): %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return failures;
}
