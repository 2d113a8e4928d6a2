#include "gazeode/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>

#include "gazeode/csv.hpp"
#include "gazeode/errors.hpp"

namespace gazeode {

namespace {

[[noreturn]] void bad_value(const std::string& key, const std::string& value, const char* expected) {
  throw Error(ErrorKind::InvalidArgument,
              "config key '" + key + "': expected " + expected + ", got '" + value + "'");
}

double to_real(const std::string& key, const std::string& v) {
  const auto d = csv::parse_double(v);
  if (!d) bad_value(key, v, "a finite number");
  return *d;
}

int to_int(const std::string& key, const std::string& v) {
  const auto i = csv::parse_int(v);
  if (!i || *i < std::numeric_limits<int>::min() || *i > std::numeric_limits<int>::max()) {
    bad_value(key, v, "an integer");
  }
  return static_cast<int>(*i);
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size() || v.empty()) {
    bad_value(key, v, "a non-negative integer");
  }
  return out;
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> parts;
  if (v.empty()) return parts;
  std::string item;
  std::istringstream in(v);
  while (std::getline(in, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    parts.push_back(b == std::string::npos ? std::string{} : item.substr(b, e - b + 1));
  }
  return parts;
}

template <typename T, typename Fmt>
std::string join_list(const std::vector<T>& values, Fmt fmt) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += fmt(values[i]);
  }
  return out;
}

std::string real_text(double v) { return csv::format_double(v); }

struct Entry {
  std::string key;
  std::function<void(RunConfig&, const std::string&, const std::string&)> set;
  std::function<std::optional<std::string>(const RunConfig&)> get;
};

Entry real(std::string key, double RunConfig::*member) {
  return {key, [member](RunConfig& c, const std::string& k, const std::string& v) { c.*member = to_real(k, v); },
          [member](const RunConfig& c) -> std::optional<std::string> { return real_text(c.*member); }};
}

Entry optional_real(std::string key, std::optional<double> RunConfig::*member) {
  return {key,
          [member](RunConfig& c, const std::string& k, const std::string& v) {
            if (v.empty()) {
              (c.*member).reset();
            } else {
              c.*member = to_real(k, v);
            }
          },
          [member](const RunConfig& c) -> std::optional<std::string> {
            if (!(c.*member)) return std::nullopt;
            return real_text(*(c.*member));
          }};
}

template <typename Get>
Entry nested_real(std::string key, Get field) {
  return {key, [field](RunConfig& c, const std::string& k, const std::string& v) { field(c) = to_real(k, v); },
          [field](const RunConfig& c) -> std::optional<std::string> {
            return real_text(field(c));
          }};
}

template <typename Get>
Entry nested_int(std::string key, Get field) {
  return {key, [field](RunConfig& c, const std::string& k, const std::string& v) { field(c) = to_int(k, v); },
          [field](const RunConfig& c) -> std::optional<std::string> {
            return std::to_string(field(c));
          }};
}

Entry optional_path(std::string key, std::optional<std::filesystem::path> RunConfig::*member) {
  return {key,
          [member](RunConfig& c, const std::string&, const std::string& v) {
            if (v.empty()) {
              (c.*member).reset();
            } else {
              c.*member = v;
            }
          },
          [member](const RunConfig& c) -> std::optional<std::string> {
            if (!(c.*member)) return std::nullopt;
            return (c.*member)->string();
          }};
}

const std::vector<Entry>& entries() {
  static const std::vector<Entry> table = [] {
    std::vector<Entry> t;
    t.push_back({"out", [](RunConfig& c, const std::string&, const std::string& v) { c.out = v; },
                 [](const RunConfig& c) -> std::optional<std::string> { return c.out.string(); }});
    t.push_back(optional_path("gaze", &RunConfig::gaze));
    t.push_back(optional_path("shots", &RunConfig::shots));
    t.push_back(optional_path("tracks", &RunConfig::tracks));
    t.push_back({"seed",
                 [](RunConfig& c, const std::string& k, const std::string& v) { c.seed = to_u64(k, v); },
                 [](const RunConfig& c) -> std::optional<std::string> { return std::to_string(c.seed); }});

    t.push_back(nested_int("records", [](auto& c) -> auto& { return c.generator.records; }));
    t.push_back({"ending_durations",
                 [](RunConfig& c, const std::string& k, const std::string& v) {
                   c.generator.ending_durations.clear();
                   for (const auto& item : split_list(v)) c.generator.ending_durations.push_back(to_real(k, item));
                 },
                 [](const RunConfig& c) -> std::optional<std::string> {
                   return join_list(c.generator.ending_durations, real_text);
                 }});
    t.push_back(nested_int("transitions", [](auto& c) -> auto& { return c.generator.transitions; }));
    t.push_back(nested_int("chance_shots", [](auto& c) -> auto& { return c.generator.chance_shots; }));
    t.push_back(nested_int("characters", [](auto& c) -> auto& { return c.generator.characters; }));
    t.push_back(nested_int("trailing_fixations",
                           [](auto& c) -> auto& { return c.generator.trailing_fixations; }));
    t.push_back(nested_real("gaze_rate_hz", [](auto& c) -> auto& { return c.generator.gaze_rate_hz; }));
    t.push_back(nested_real("track_rate_hz", [](auto& c) -> auto& { return c.generator.track_rate_hz; }));

    t.push_back(nested_real("distance_px", [](auto& c) -> auto& { return c.thresholds.distance_px; }));
    t.push_back(nested_real("time_s", [](auto& c) -> auto& { return c.thresholds.time_s; }));

    t.push_back(optional_real("lambda", &RunConfig::lambda));
    t.push_back(optional_real("mu", &RunConfig::mu));
    t.push_back(optional_real("m", &RunConfig::m));
    t.push_back(optional_real("k", &RunConfig::k));
    t.push_back({"k_ref_min_distance",
                 [](RunConfig& c, const std::string& k, const std::string& v) {
                   if (v.empty()) c.k_refs.min_distance.reset(); else c.k_refs.min_distance = to_real(k, v);
                 },
                 [](const RunConfig& c) -> std::optional<std::string> {
                   if (!c.k_refs.min_distance) return std::nullopt;
                   return real_text(*c.k_refs.min_distance);
                 }});
    t.push_back({"k_ref_max_speed",
                 [](RunConfig& c, const std::string& k, const std::string& v) {
                   if (v.empty()) c.k_refs.max_speed.reset(); else c.k_refs.max_speed = to_real(k, v);
                 },
                 [](const RunConfig& c) -> std::optional<std::string> {
                   if (!c.k_refs.max_speed) return std::nullopt;
                   return real_text(*c.k_refs.max_speed);
                 }});

    t.push_back(nested_real("n0", [](auto& c) -> auto& { return c.initial.n0; }));
    t.push_back(nested_real("v0", [](auto& c) -> auto& { return c.initial.v0; }));
    t.push_back(nested_real("d0", [](auto& c) -> auto& { return c.initial.d0; }));
    t.push_back(nested_real("g0", [](auto& c) -> auto& { return c.initial.g0; }));
    t.push_back(real("t0", &RunConfig::t0));
    t.push_back(real("t1", &RunConfig::t1));
    t.push_back(nested_int("intervals", [](auto& c) -> auto& { return c.intervals; }));

    t.push_back(nested_int("hidden_size", [](auto& c) -> auto& { return c.train.arch.hidden_size; }));
    t.push_back({"dense_sizes",
                 [](RunConfig& c, const std::string& k, const std::string& v) {
                   c.train.arch.dense_sizes.clear();
                   for (const auto& item : split_list(v)) c.train.arch.dense_sizes.push_back(to_int(k, item));
                 },
                 [](const RunConfig& c) -> std::optional<std::string> {
                   return join_list(c.train.arch.dense_sizes, [](int i) { return std::to_string(i); });
                 }});
    t.push_back(nested_int("epochs", [](auto& c) -> auto& { return c.train.epochs; }));
    t.push_back(nested_real("learning_rate", [](auto& c) -> auto& { return c.train.adam.learning_rate; }));
    t.push_back(nested_real("beta1", [](auto& c) -> auto& { return c.train.adam.beta1; }));
    t.push_back(nested_real("beta2", [](auto& c) -> auto& { return c.train.adam.beta2; }));
    t.push_back(nested_real("epsilon", [](auto& c) -> auto& { return c.train.adam.epsilon; }));
    t.push_back(nested_real("clip_norm", [](auto& c) -> auto& { return c.train.clip_norm; }));
    t.push_back(nested_real("init_scale", [](auto& c) -> auto& { return c.train.init_scale; }));
    return t;
  }();
  return table;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

void RunConfig::set(const std::string& key, const std::string& value) {
  for (const auto& e : entries()) {
    if (e.key == key) {
      e.set(*this, key, value);
      return;
    }
  }
  throw Error(ErrorKind::InvalidArgument, "unknown config key '" + key + "'");
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& e : entries()) k.push_back(e.key);
    return k;
  }();
  return keys;
}

RunConfig load_config(const std::filesystem::path& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open config " + path.string());
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorKind::InvalidArgument,
                  path.string() + ":" + std::to_string(number) + ": expected key = value");
    }
    base.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return base;
}

std::string config_to_text(const RunConfig& config) {
  std::string out;
  for (const auto& e : entries()) {
    if (const auto v = e.get(config)) out += e.key + " = " + *v + "\n";
  }
  return out;
}

}  // namespace gazeode
