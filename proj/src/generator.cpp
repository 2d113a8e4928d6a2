#include "gazeode/generator.hpp"

#include <cmath>
#include <numbers>

#include "gazeode/errors.hpp"
#include "gazeode/fixation.hpp"
#include "gazeode/random.hpp"

namespace gazeode {

namespace {

constexpr double kScreenWidth = 1920.0;
constexpr double kScreenHeight = 1080.0;
constexpr double kMargin = 100.0;
constexpr double kMinCenterSeparation = 200.0;  // keeps every saccade step above 50 px
constexpr double kJitter = 0.35;                // per axis, so steps stay under 1 px
constexpr double kSessionStart = 0.25;

void require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorKind::InvalidArgument, what);
}

std::vector<int> goodness_sequence(int records, int bad, int transitions, Rng& rng) {
  require(records >= 0 && bad >= 0 && transitions >= 0, "generator counts must be non-negative");
  require(bad <= records, "more ending records than records");
  if (bad == 0) {
    require(transitions == 0, "transitions need at least one ending record");
    return std::vector<int>(static_cast<std::size_t>(records), 0);
  }
  require(transitions <= bad, "every transition needs its own ending record");
  const bool first_bad = transitions < bad;
  const int runs = first_bad ? transitions + 1 : transitions;
  const int good = records - bad;
  const int needed = (runs - 1) + (first_bad ? 0 : 1);
  require(good >= needed, "not enough good records to separate the ending runs");

  std::vector<int> run_len(static_cast<std::size_t>(runs), 1);
  for (int extra = bad - runs; extra > 0; --extra) run_len[rng.index(run_len.size())]++;

  // gap[0] precedes the first run, gap[runs] follows the last
  std::vector<int> gap(static_cast<std::size_t>(runs) + 1, 0);
  for (int r = 1; r < runs; ++r) gap[static_cast<std::size_t>(r)] = 1;
  if (!first_bad) gap[0] = 1;
  for (int extra = good - needed; extra > 0; --extra) {
    const std::size_t lo = first_bad ? 1 : 0;
    gap[lo + rng.index(gap.size() - lo)]++;
  }

  std::vector<int> seq;
  seq.reserve(static_cast<std::size_t>(records));
  for (int r = 0; r <= runs; ++r) {
    seq.insert(seq.end(), static_cast<std::size_t>(gap[static_cast<std::size_t>(r)]), 0);
    if (r < runs) seq.insert(seq.end(), static_cast<std::size_t>(run_len[static_cast<std::size_t>(r)]), 1);
  }
  return seq;
}

struct PlannedFixation {
  double duration = 0.0;
  int record = -1;  // record whose shot lands in this fixation, else -1
  int chance_after = 0;
};

struct TrackShape {
  double distance_base, distance_amp, distance_freq, distance_phase;
  double speed_base, speed_amp, speed_freq, speed_phase;
};

std::vector<double> split_duration(double total, Rng& rng) {
  auto count = static_cast<int>(1 + rng.index(3));
  if (total / count < 0.15) count = 1;
  std::vector<double> w(static_cast<std::size_t>(count));
  double sum = 0.0;
  for (double& x : w) sum += (x = rng.uniform(0.6, 1.4));
  std::vector<double> pieces;
  double used = 0.0;
  for (int i = 0; i + 1 < count; ++i) {
    pieces.push_back(total * w[static_cast<std::size_t>(i)] / sum);
    used += pieces.back();
  }
  pieces.push_back(total - used);
  return pieces;
}

struct Point {
  double x, y;
};

Point random_center(Rng& rng, const Point* avoid) {
  for (;;) {
    const Point p{rng.uniform(kMargin, kScreenWidth - kMargin),
                  rng.uniform(kMargin, kScreenHeight - kMargin)};
    if (avoid == nullptr || std::hypot(p.x - avoid->x, p.y - avoid->y) >= kMinCenterSeparation) {
      return p;
    }
  }
}

}  // namespace

std::vector<int> goodness_sequence(int records, int bad, int transitions, std::uint64_t seed) {
  Rng rng(seed);
  return goodness_sequence(records, bad, transitions, rng);
}

Session generate_session(const GeneratorConfig& config) {
  const int bad = static_cast<int>(config.ending_durations.size());
  require(config.characters >= 1, "need at least one character");
  require(bad <= config.characters && (bad < config.characters || bad == config.records),
          "each ending record needs its own character, plus one good character");
  require(config.chance_shots >= 0 && config.trailing_fixations >= 0, "counts must be non-negative");
  require(config.gaze_rate_hz >= 15.0, "gaze rate must be at least 15 Hz");
  require(config.track_rate_hz > 0.0, "track rate must be positive");
  for (double d : config.ending_durations) require(d > 0.0, "ending durations must be positive");

  Rng rng(config.seed);
  const std::vector<int> goodness =
      goodness_sequence(config.records, bad, config.transitions, rng);

  std::vector<int> ids(static_cast<std::size_t>(config.characters));
  for (int c = 0; c < config.characters; ++c) ids[static_cast<std::size_t>(c)] = c + 1;
  rng.shuffle(ids);
  const std::vector<int> bad_ids(ids.begin(), ids.begin() + bad);
  const std::vector<int> good_ids(ids.begin() + bad, ids.end());
  std::vector<int> char_goodness(static_cast<std::size_t>(config.characters) + 1, 0);
  for (int id : bad_ids) char_goodness[static_cast<std::size_t>(id)] = 1;

  // Record plan: character and gaze duration of each matched shot.
  std::vector<int> record_char(goodness.size());
  std::vector<PlannedFixation> plan;
  int next_bad = 0;
  for (std::size_t r = 0; r < goodness.size(); ++r) {
    double duration = 0.0;
    if (goodness[r] == 1) {
      record_char[r] = bad_ids[static_cast<std::size_t>(next_bad)];
      duration = config.ending_durations[static_cast<std::size_t>(next_bad)];
      ++next_bad;
    } else {
      record_char[r] = good_ids[rng.index(good_ids.size())];
      duration = rng.uniform(0.3, 2.5);
    }
    const auto pieces = split_duration(duration, rng);
    for (std::size_t p = 0; p < pieces.size(); ++p) {
      plan.push_back({pieces[p], p + 1 == pieces.size() ? static_cast<int>(r) : -1, 0});
    }
  }
  for (int i = 0; i < config.trailing_fixations; ++i) plan.push_back({rng.uniform(0.3, 1.0), -1, 0});
  if (config.chance_shots > 0) {
    require(plan.size() >= 2, "chance shots need a gap between two fixations");
    for (int i = 0; i < config.chance_shots; ++i) plan[rng.index(plan.size() - 1)].chance_after++;
  }

  std::vector<TrackShape> shapes(static_cast<std::size_t>(config.characters) + 1);
  for (int c = 1; c <= config.characters; ++c) {
    shapes[static_cast<std::size_t>(c)] = {
        rng.uniform(15.0, 45.0), rng.uniform(2.0, 8.0), rng.uniform(0.01, 0.05),
        rng.uniform(0.0, 2.0 * std::numbers::pi), rng.uniform(1.5, 4.0), rng.uniform(0.2, 1.0),
        rng.uniform(0.02, 0.08), rng.uniform(0.0, 2.0 * std::numbers::pi)};
  }
  auto distance_at = [&](int c, double t) {
    const auto& s = shapes[static_cast<std::size_t>(c)];
    return s.distance_base + s.distance_amp * std::sin(2.0 * std::numbers::pi * s.distance_freq * t + s.distance_phase);
  };
  auto speed_at = [&](int c, double t) {
    const auto& s = shapes[static_cast<std::size_t>(c)];
    return s.speed_base + s.speed_amp * std::sin(2.0 * std::numbers::pi * s.speed_freq * t + s.speed_phase);
  };

  Session session;
  // Shot times are collected first; positions need the finished tracks.
  struct PendingShot {
    double t;
    int character;
  };
  std::vector<PendingShot> pending;

  const double dt = 1.0 / config.gaze_rate_hz;
  double t = kSessionStart;
  Point center{};
  bool have_center = false;
  auto jitter = [&](Point c) {
    return GazeSample{t, c.x + rng.uniform(-kJitter, kJitter), c.y + rng.uniform(-kJitter, kJitter)};
  };

  for (const auto& fix : plan) {
    const Point next = random_center(rng, have_center ? &center : nullptr);
    if (have_center) {
      const int saccade = static_cast<int>(1 + rng.index(2));
      for (int k = 1; k <= saccade; ++k) {
        const double a = static_cast<double>(k) / (saccade + 1);
        session.gaze.push_back(jitter({center.x + a * (next.x - center.x), center.y + a * (next.y - center.y)}));
        t += dt;
      }
    }
    center = next;
    have_center = true;

    const double t_start = t;
    const double t_end = t_start + fix.duration;
    for (int j = 0; t_start + j * dt < t_end - 0.25 * dt; ++j) {
      t = t_start + j * dt;
      session.gaze.push_back(jitter(center));
    }
    t = t_end;
    session.gaze.push_back(jitter(center));

    if (fix.record >= 0) {
      pending.push_back({0.5 * (t_start + t_end), record_char[static_cast<std::size_t>(fix.record)]});
    }
    for (int k = 1; k <= fix.chance_after; ++k) {
      const int who = static_cast<int>(1 + rng.index(static_cast<std::size_t>(config.characters)));
      pending.push_back({t_end + dt * k / (fix.chance_after + 1), who});
    }
    t = t_end + dt;
  }

  const double session_end = (session.gaze.empty() ? kSessionStart : session.gaze.back().t) + 1.0;
  const auto track_points = static_cast<int>(std::ceil(session_end * config.track_rate_hz));
  for (int c = 1; c <= config.characters; ++c) {
    for (int i = 0; i <= track_points; ++i) {
      const double tt = i / config.track_rate_hz;
      session.tracks.push_back({tt, c, distance_at(c, tt), speed_at(c, tt),
                                char_goodness[static_cast<std::size_t>(c)]});
    }
  }

  const auto per_char = static_cast<std::size_t>(track_points) + 1;
  for (const auto& p : pending) {
    const std::vector<CharacterTrackSample> track(
        session.tracks.begin() + static_cast<std::ptrdiff_t>((p.character - 1) * per_char),
        session.tracks.begin() + static_cast<std::ptrdiff_t>(p.character * per_char));
    const double d = sample_track(track, p.t).distance_to_player;
    const Vec3 player{rng.uniform(-20.0, 20.0), 1.7, rng.uniform(-20.0, 20.0)};
    const double yaw = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const double pitch = rng.uniform(-0.1, 0.1);
    const Vec3 hit{player.x + d * std::cos(pitch) * std::cos(yaw), player.y + d * std::sin(pitch),
                   player.z + d * std::cos(pitch) * std::sin(yaw)};
    session.shots.push_back({p.t, p.character, char_goodness[static_cast<std::size_t>(p.character)],
                             hit, player, d});
  }
  return session;
}

}  // namespace gazeode
