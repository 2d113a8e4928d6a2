#include "gazeode/params.hpp"

#include <algorithm>
#include <cmath>

#include "gazeode/csv.hpp"
#include "gazeode/errors.hpp"

namespace gazeode {

void validate(const OdeParams& p) {
  const bool finite = std::isfinite(p.lambda) && std::isfinite(p.mu) && std::isfinite(p.m) &&
                      std::isfinite(p.k);
  if (!finite || p.lambda < 0.0 || p.mu < 0.0 || p.m < 0.0 || p.m > 1.0 || !(p.k > 0.0)) {
    throw Error(ErrorKind::InvalidValue,
                "parameters out of range (lambda=" + csv::format_double(p.lambda) +
                    ", mu=" + csv::format_double(p.mu) + ", m=" + csv::format_double(p.m) +
                    ", k=" + csv::format_double(p.k) + ")");
  }
}

double total_fixation_period(std::span<const LearnRecord> records) {
  double period = 0.0;
  for (const auto& r : records) {
    if (r.goodness == 1) period += r.gaze_duration;
  }
  return period;
}

double estimate_mu(std::span<const LearnRecord> records) {
  const auto ending = std::count_if(records.begin(), records.end(),
                                    [](const LearnRecord& r) { return r.goodness == 1; });
  if (ending == 0) {
    throw Error(ErrorKind::NoEndingFixations, "no record has goodness = 1");
  }
  const double period = total_fixation_period(records);
  if (!(period > 0.0)) {
    throw Error(ErrorKind::ZeroPeriod, "total fixation period is zero");
  }
  return static_cast<double>(ending) / period;
}

double estimate_lambda(std::span<const LearnRecord> records) {
  const double period = total_fixation_period(records);
  if (!(period > 0.0)) {
    throw Error(ErrorKind::ZeroPeriod, "total fixation period is zero");
  }
  return static_cast<double>(records.size()) / period;
}

double estimate_m(std::span<const LearnRecord> records) {
  if (records.empty()) {
    throw Error(ErrorKind::EmptyInput, "learn matrix is empty");
  }
  std::size_t transitions = 0;
  for (std::size_t i = 1; i < records.size(); ++i) {
    if (records[i - 1].goodness == 0 && records[i].goodness == 1) ++transitions;
  }
  return static_cast<double>(transitions) / static_cast<double>(records.size());
}

double estimate_k(std::span<const LearnRecord> records, std::optional<double> reference_min_distance,
                  std::optional<double> reference_max_speed) {
  if (records.empty()) {
    throw Error(ErrorKind::EmptyInput, "learn matrix is empty");
  }
  const auto dmin = std::min_element(
      records.begin(), records.end(),
      [](const LearnRecord& a, const LearnRecord& b) { return a.distance < b.distance; });
  const auto vmax = std::max_element(
      records.begin(), records.end(),
      [](const LearnRecord& a, const LearnRecord& b) { return a.speed < b.speed; });
  const double min_distance = dmin->distance;
  const double max_speed = vmax->speed;
  if (!(min_distance > 0.0) || !(max_speed > 0.0)) {
    throw Error(ErrorKind::DegenerateData,
                "k needs positive minimum distance and maximum speed (got " +
                    csv::format_double(min_distance) + ", " + csv::format_double(max_speed) + ")");
  }
  return reference_min_distance.value_or(min_distance) / min_distance +
         reference_max_speed.value_or(max_speed) / max_speed;
}

OdeParams estimate_params(std::span<const LearnRecord> records, KReferences refs) {
  if (records.empty()) {
    throw Error(ErrorKind::EmptyInput, "learn matrix is empty");
  }
  OdeParams p;
  p.mu = estimate_mu(records);
  p.lambda = estimate_lambda(records);
  p.m = estimate_m(records);
  p.k = estimate_k(records, refs.min_distance, refs.max_speed);
  return p;
}

std::string params_to_csv(const OdeParams& p) {
  return csv::join(kParamsHeader) + "\n" +
         csv::join({csv::format_double(p.lambda, 9), csv::format_double(p.mu, 9),
                    csv::format_double(p.m, 9), csv::format_double(p.k, 9)}) +
         "\n";
}

OdeParams load_params(const std::filesystem::path& path) {
  const auto table = csv::read(path);
  csv::expect_header(table, kParamsHeader, path);
  if (table.rows.size() != 1) {
    throw Error(ErrorKind::MalformedRow, path.string() + ": expected exactly one parameter row");
  }
  const csv::RowReader row(path, table, 0);
  OdeParams p{row.real(0), row.real(1), row.real(2), row.real(3)};
  validate(p);
  return p;
}

}  // namespace gazeode
