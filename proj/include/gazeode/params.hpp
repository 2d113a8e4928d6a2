#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>

#include "gazeode/fixation.hpp"

namespace gazeode {

/// Rates of the coupled fixation/speed/distance/goodness system.
struct OdeParams {
  double lambda = 0.0;  // fixation rate
  double mu = 0.0;      // separation rate
  double m = 0.0;       // goodness rate
  double k = 1.0;       // speed damping constant

  friend bool operator==(const OdeParams&, const OdeParams&) = default;
};

/// Throws InvalidValue unless all four are finite, lambda, mu >= 0,
/// m in [0, 1] and k > 0.
void validate(const OdeParams& params);

/// Sum of gaze_duration over ending (goodness == 1) records. Shared
/// denominator of estimate_mu and estimate_lambda.
double total_fixation_period(std::span<const LearnRecord> records);

double estimate_mu(std::span<const LearnRecord> records);
double estimate_lambda(std::span<const LearnRecord> records);
/// Fraction of records entered by a good-to-bad (0 -> 1) transition from the
/// previous record, in shot order.
double estimate_m(std::span<const LearnRecord> records);
/// reference_min_distance / min(distance) + reference_max_speed / max(speed).
/// Missing references default to the data's own extrema, giving exactly 2.
double estimate_k(std::span<const LearnRecord> records,
                  std::optional<double> reference_min_distance = std::nullopt,
                  std::optional<double> reference_max_speed = std::nullopt);

struct KReferences {
  std::optional<double> min_distance;
  std::optional<double> max_speed;
};

OdeParams estimate_params(std::span<const LearnRecord> records, KReferences refs = {});

inline const std::vector<std::string> kParamsHeader{"lambda", "mu", "m", "k"};

std::string params_to_csv(const OdeParams& params);
OdeParams load_params(const std::filesystem::path& path);

}  // namespace gazeode
