#pragma once

#include <array>
#include <string>
#include <vector>

#include "gazeode/hlstm.hpp"
#include "gazeode/ode.hpp"

namespace gazeode {

inline constexpr int kHistogramBins = 20;
inline constexpr std::array<const char*, 3> kChannelNames{"n", "v", "g"};

struct Histogram {
  double left = 0.0;   // lower edge of the first bin
  double right = 0.0;  // upper edge of the last bin
  std::array<long long, kHistogramBins> counts{};

  double bin_left(int b) const { return left + (right - left) * b / kHistogramBins; }
  double bin_right(int b) const {
    return b + 1 == kHistogramBins ? right : left + (right - left) * (b + 1) / kHistogramBins;
  }
};

/// Equal-width bins over [min, max] of the values; the maximum falls in the
/// last bin. If every value equals r the range becomes [r - 0.5, r + 0.5].
Histogram histogram(const std::vector<double>& values);

struct ResidualSummary {
  double mean = 0.0;
  double stddev = 0.0;  // population
  double max_abs = 0.0;
};

/// Predicted against actual (N, V, G) on the trajectory grid, in raw units.
/// Residuals are predicted minus actual.
struct PredictionReport {
  std::vector<double> times;
  hlstm::Matrix actual;     // 3 x T
  hlstm::Matrix predicted;  // 3 x T
  std::array<ResidualSummary, 3> summary;
  std::array<Histogram, 3> histograms;
  double normalized_mse = 0.0;  // on the z-scored scale the network was trained on

  std::vector<double> residuals(int channel) const;
};

/// Builds the residual tables from raw series. normalized_mse uses the given
/// target statistics.
PredictionReport build_report(std::vector<double> times, hlstm::Matrix actual,
                              hlstm::Matrix predicted, const hlstm::Normalizer& target_norm);

PredictionReport predict_report(const hlstm::ModelArchive& model, const Trajectory& traj);

inline const std::vector<std::string> kPredictionsHeader{"t",      "n_true", "n_pred", "v_true",
                                                         "v_pred", "g_true", "g_pred"};
inline const std::vector<std::string> kErrorsHeader{"channel", "bin_left", "bin_right", "count"};

std::string predictions_to_csv(const PredictionReport& report);
std::string errors_to_csv(const PredictionReport& report);

}  // namespace gazeode
