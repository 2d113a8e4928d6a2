#pragma once

#include <cmath>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace gazeode::hermite {

/// Normalized Hermite functions
///   h_n(x) = exp(-x^2/2) H_n(x) / sqrt(2^n n!)
/// evaluated through the three-term recurrence on the normalized values, so
/// no intermediate overflows for large n or |x|.
class HermiteEvaluator {
 public:
  explicit HermiteEvaluator(int max_degree);

  int max_degree() const noexcept { return max_degree_; }

  /// h_0(x) .. h_N(x). The span refers to internal storage and is invalidated
  /// by the next call.
  std::span<const double> values(double x);
  /// h'_0(x) .. h'_N(x), from h'_n = sqrt(n/2) h_{n-1} - sqrt((n+1)/2) h_{n+1}.
  std::span<const double> derivatives(double x);

 private:
  void fill(double x, int degree);

  int max_degree_;
  std::vector<double> work_;  // degrees 0..N+1
  std::vector<double> deriv_;
};

double hermite_fn(int n, double x);
double hermite_fn_derivative(int n, double x);

/// Simpson-rule integration domain; integrands decay like exp(-x^2).
inline constexpr double kQuadratureHalfWidth = 12.0;

/// G(i, j) = integral of h_i h_j over the real line, i, j <= max_n.
/// `quadrature_points` is the node count (rounded up to odd). Throws
/// InsufficientQuadrature if fewer than 20*max_n nodes are requested or if
/// doubling the resolution moves any entry by more than `tolerance`.
Eigen::MatrixXd orthogonality_gram(int max_n, int quadrature_points, double tolerance = 1e-9);
/// Same for the derivatives h'_i h'_j.
Eigen::MatrixXd derivative_gram(int max_n, int quadrature_points, double tolerance = 1e-9);

/// Bell-shaped activation exp(-x^2/2) (1 - x^2). Range [-2 exp(-1.5), 1].
inline double activation(double x) noexcept {
  const double x2 = x * x;
  if (x2 > 1500.0) return 0.0;  // exp underflows first; avoids 0 * inf
  return std::exp(-0.5 * x2) * (1.0 - x2);
}

/// d/dx activation = -x exp(-x^2/2) (3 - x^2).
inline double activation_grad(double x) noexcept {
  const double x2 = x * x;
  if (x2 > 1500.0) return 0.0;
  return -x * std::exp(-0.5 * x2) * (3.0 - x2);
}

inline constexpr double kActivationMin = -0.44626032029685964;  // -2 exp(-1.5)
inline constexpr double kActivationMax = 1.0;

}  // namespace gazeode::hermite

