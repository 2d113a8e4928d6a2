#include "gazeode/hermite.hpp"

#include <cmath>

#include "gazeode/errors.hpp"

namespace gazeode::hermite {

HermiteEvaluator::HermiteEvaluator(int max_degree) : max_degree_(max_degree) {
  if (max_degree < 0) {
    throw Error(ErrorKind::InvalidArgument, "Hermite degree must be non-negative");
  }
  work_.resize(static_cast<std::size_t>(max_degree) + 2);
  deriv_.resize(static_cast<std::size_t>(max_degree) + 1);
}

void HermiteEvaluator::fill(double x, int degree) {
  const double w = std::exp(-0.5 * x * x);
  work_[0] = w;
  if (degree >= 1) work_[1] = std::sqrt(2.0) * x * w;
  for (int n = 1; n < degree; ++n) {
    const double np1 = n + 1.0;
    work_[n + 1] = x * std::sqrt(2.0 / np1) * work_[n] - std::sqrt(n / np1) * work_[n - 1];
  }
}

std::span<const double> HermiteEvaluator::values(double x) {
  fill(x, max_degree_);
  return {work_.data(), static_cast<std::size_t>(max_degree_) + 1};
}

std::span<const double> HermiteEvaluator::derivatives(double x) {
  fill(x, max_degree_ + 1);
  for (int n = 0; n <= max_degree_; ++n) {
    const double lower = n > 0 ? std::sqrt(n / 2.0) * work_[n - 1] : 0.0;
    deriv_[n] = lower - std::sqrt((n + 1) / 2.0) * work_[n + 1];
  }
  return deriv_;
}

double hermite_fn(int n, double x) {
  HermiteEvaluator eval(n);
  return eval.values(x)[static_cast<std::size_t>(n)];
}

double hermite_fn_derivative(int n, double x) {
  HermiteEvaluator eval(n);
  return eval.derivatives(x)[static_cast<std::size_t>(n)];
}

namespace {

template <typename Basis>
Eigen::MatrixXd simpson_gram(int max_n, int nodes, Basis basis) {
  const int intervals = nodes - 1;
  const double a = -kQuadratureHalfWidth;
  const double h = 2.0 * kQuadratureHalfWidth / intervals;
  HermiteEvaluator eval(max_n);
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(max_n + 1, max_n + 1);
  for (int i = 0; i <= intervals; ++i) {
    const double weight = (i == 0 || i == intervals) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    const auto vals = basis(eval, a + i * h);
    const Eigen::Map<const Eigen::VectorXd> v(vals.data(), max_n + 1);
    gram.noalias() += weight * v * v.transpose();
  }
  return gram * (h / 3.0);
}

template <typename Basis>
Eigen::MatrixXd checked_gram(int max_n, int quadrature_points, double tolerance, Basis basis) {
  if (max_n < 0) throw Error(ErrorKind::InvalidArgument, "degree must be non-negative");
  if (quadrature_points < 20 * max_n || quadrature_points < 3) {
    throw Error(ErrorKind::InsufficientQuadrature,
                std::to_string(quadrature_points) + " nodes is too few for degree " +
                    std::to_string(max_n));
  }
  const int nodes = quadrature_points % 2 == 1 ? quadrature_points : quadrature_points + 1;
  Eigen::MatrixXd gram = simpson_gram(max_n, nodes, basis);
  const Eigen::MatrixXd refined = simpson_gram(max_n, 2 * nodes - 1, basis);
  const double change = (refined - gram).cwiseAbs().maxCoeff();
  if (change > tolerance) {
    throw Error(ErrorKind::InsufficientQuadrature,
                "doubling the quadrature resolution moved an entry by " + std::to_string(change));
  }
  return gram;
}

}  // namespace

Eigen::MatrixXd orthogonality_gram(int max_n, int quadrature_points, double tolerance) {
  return checked_gram(max_n, quadrature_points, tolerance,
                      [](HermiteEvaluator& e, double x) { return e.values(x); });
}

Eigen::MatrixXd derivative_gram(int max_n, int quadrature_points, double tolerance) {
  return checked_gram(max_n, quadrature_points, tolerance,
                      [](HermiteEvaluator& e, double x) { return e.derivatives(x); });
}

}  // namespace gazeode::hermite
