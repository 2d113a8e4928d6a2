#include "gazeode/report.hpp"

#include <algorithm>
#include <cmath>

#include "gazeode/csv.hpp"
#include "gazeode/errors.hpp"

namespace gazeode {

Histogram histogram(const std::vector<double>& values) {
  Histogram h;
  if (values.empty()) {
    h.left = -0.5;
    h.right = 0.5;
    return h;
  }
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  h.left = *lo;
  h.right = *hi;
  if (!(h.right > h.left)) {
    h.left -= 0.5;
    h.right += 0.5;
  }
  const double width = h.right - h.left;
  for (double v : values) {
    auto b = static_cast<int>(std::floor((v - h.left) / width * kHistogramBins));
    h.counts[static_cast<std::size_t>(std::clamp(b, 0, kHistogramBins - 1))]++;
  }
  return h;
}

std::vector<double> PredictionReport::residuals(int channel) const {
  std::vector<double> r(static_cast<std::size_t>(actual.cols()));
  for (Eigen::Index t = 0; t < actual.cols(); ++t) {
    r[static_cast<std::size_t>(t)] = predicted(channel, t) - actual(channel, t);
  }
  return r;
}

namespace {

ResidualSummary summarize(const std::vector<double>& r) {
  ResidualSummary s;
  if (r.empty()) return s;
  const double n = static_cast<double>(r.size());
  for (double v : r) {
    s.mean += v;
    s.max_abs = std::max(s.max_abs, std::abs(v));
  }
  s.mean /= n;
  double var = 0.0;
  for (double v : r) var += (v - s.mean) * (v - s.mean);
  s.stddev = std::sqrt(var / n);
  return s;
}

void fill_tables(PredictionReport& report) {
  for (int c = 0; c < 3; ++c) {
    const auto r = report.residuals(c);
    report.summary[static_cast<std::size_t>(c)] = summarize(r);
    report.histograms[static_cast<std::size_t>(c)] = histogram(r);
  }
}

void check_shapes(const std::vector<double>& times, const hlstm::Matrix& actual,
                  const hlstm::Matrix& predicted) {
  if (actual.rows() != 3 || predicted.rows() != 3 || actual.cols() != predicted.cols() ||
      static_cast<std::size_t>(actual.cols()) != times.size()) {
    throw Error(ErrorKind::ShapeMismatch, "report needs 3 x T actual and predicted series");
  }
}

}  // namespace

PredictionReport build_report(std::vector<double> times, hlstm::Matrix actual,
                              hlstm::Matrix predicted, const hlstm::Normalizer& target_norm) {
  check_shapes(times, actual, predicted);
  PredictionReport report;
  report.times = std::move(times);
  report.actual = std::move(actual);
  report.predicted = std::move(predicted);
  report.normalized_mse =
      hlstm::mse(target_norm.normalize(report.predicted), target_norm.normalize(report.actual));
  fill_tables(report);
  return report;
}

PredictionReport predict_report(const hlstm::ModelArchive& model, const Trajectory& traj) {
  const hlstm::Dataset data = hlstm::dataset_from(traj);
  const hlstm::Matrix y = model.target_norm.normalize(data.targets);
  const hlstm::Matrix out = hlstm::predict(model.net, model.input_norm.normalize(data.inputs));

  PredictionReport report;
  report.times = data.times;
  report.actual = data.targets;
  report.predicted = model.target_norm.denormalize(out);
  check_shapes(report.times, report.actual, report.predicted);
  // Same arithmetic as the training loop's final evaluation, so the two agree exactly.
  report.normalized_mse = hlstm::mse(out, y);
  fill_tables(report);
  return report;
}

std::string predictions_to_csv(const PredictionReport& report) {
  std::string out = csv::join(kPredictionsHeader) + "\n";
  for (std::size_t t = 0; t < report.times.size(); ++t) {
    const auto col = static_cast<Eigen::Index>(t);
    std::vector<std::string> row{csv::format_double(report.times[t])};
    for (int c = 0; c < 3; ++c) {
      row.push_back(csv::format_double(report.actual(c, col)));
      row.push_back(csv::format_double(report.predicted(c, col)));
    }
    out += csv::join(row) + "\n";
  }
  return out;
}

std::string errors_to_csv(const PredictionReport& report) {
  std::string out = csv::join(kErrorsHeader) + "\n";
  for (std::size_t c = 0; c < 3; ++c) {
    const Histogram& h = report.histograms[c];
    for (int b = 0; b < kHistogramBins; ++b) {
      out += csv::join({kChannelNames[c], csv::format_double(h.bin_left(b)),
                        csv::format_double(h.bin_right(b)),
                        std::to_string(h.counts[static_cast<std::size_t>(b)])});
      out += '\n';
    }
  }
  return out;
}

}  // namespace gazeode
