#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gazeode/ode.hpp"

namespace gazeode::hlstm {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

enum class Gate { Input = 0, Forget = 1, Output = 2, Candidate = 3 };

/// LSTM cell whose four gates all use the Hermite activation. Gate weights
/// are stacked row-wise in the order input, forget, output, candidate; the
/// columns are the concatenation [h_{t-1}, x_t].
struct HlstmCell {
  int hidden_size = 0;
  int input_size = 0;
  Matrix w;  // 4H x (H + I)
  Vector b;  // 4H

  HlstmCell() = default;
  HlstmCell(int hidden, int input);

  auto gate_weights(Gate g) { return w.middleRows(static_cast<int>(g) * hidden_size, hidden_size); }
  auto gate_bias(Gate g) { return b.segment(static_cast<int>(g) * hidden_size, hidden_size); }
};

struct DenseLayer {
  Matrix w;
  Vector b;
  bool hermite = true;  // false: linear
};

/// Hermite-activated hidden layers followed by a linear output layer.
struct DenseHead {
  std::vector<DenseLayer> layers;
};

struct Architecture {
  int input_size = 1;
  int hidden_size = 71;
  std::vector<int> dense_sizes{20, 26};
  int output_size = 3;
};

/// Parameters of the full model. Gradients and optimizer moments reuse the
/// same type so every parameter tensor has a twin with identical shape.
struct Network {
  HlstmCell cell;
  DenseHead head;

  /// All parameters zero.
  static Network zeros(const Architecture& arch);
  /// Uniform in [-scale, scale] from a seeded 64-bit Mersenne twister.
  static Network random(const Architecture& arch, std::uint64_t seed, double scale = 0.08);

  Architecture architecture() const;
  std::size_t parameter_count() const;
};

/// Calls fn(name, tensor_a, tensor_b, ...) for every parameter tensor of
/// networks with identical architecture, in a fixed order.
template <typename Fn, typename... Nets>
void for_each_parameter(Fn&& fn, Nets&... nets) {
  fn("cell.w", nets.cell.w...);
  fn("cell.b", nets.cell.b...);
  const auto n_layers = std::get<0>(std::forward_as_tuple(nets...)).head.layers.size();
  for (std::size_t l = 0; l < n_layers; ++l) {
    const std::string prefix = "dense" + std::to_string(l);
    fn(prefix + ".w", nets.head.layers[l].w...);
    fn(prefix + ".b", nets.head.layers[l].b...);
  }
}

struct CellCache {
  Vector h_prev;
  Vector c_prev;
  Vector x;
  Vector z;      // 4H pre-activations
  Vector gates;  // 4H activations i, f, o, g
  Vector c;
  Vector h;
};

/// One step: gates = H(W [h_prev, x] + b); c = f*c_prev + i*g; h = o*H(c).
/// Throws ShapeMismatch or NonFinite.
CellCache cell_forward(const HlstmCell& cell, const Vector& h_prev, const Vector& c_prev,
                       const Vector& x);

/// Everything the backward pass needs from a forward run over one sequence.
struct ForwardCache {
  Matrix inputs;  // I x T
  Matrix h;       // H x (T+1), column 0 is the zero initial state
  Matrix c;       // H x (T+1)
  Matrix hc;      // H(c), H x (T+1)
  Matrix z;       // 4H x T
  Matrix gates;   // 4H x T
  std::vector<Matrix> head_z;  // per dense layer, size x T
  std::vector<Matrix> head_a;  // per dense layer, size x T; last is the output
  const Matrix& output() const { return head_a.back(); }
};

/// Runs the sequence (columns of `inputs`, already normalized) through the
/// cell with state carried across steps, and maps each h_t through the head.
ForwardCache network_forward(const Network& net, const Matrix& inputs);
Matrix predict(const Network& net, const Matrix& inputs);

/// Mean over all entries of (prediction - target)^2.
double mse(const Matrix& prediction, const Matrix& target);

/// Exact BPTT gradient of loss_scale * mse(output, targets) with respect to
/// every parameter. Unclipped.
Network backward(const Network& net, const ForwardCache& cache, const Matrix& targets,
                 double loss_scale = 1.0);

double global_norm(const Network& grads);
/// Rescales so the global L2 norm is at most max_norm; returns the pre-clip norm.
double clip_global_norm(Network& grads, double max_norm);

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

class Adam {
 public:
  Adam(const Network& like, AdamConfig config);
  void step(Network& params, const Network& grads);
  long long steps() const noexcept { return t_; }

 private:
  AdamConfig config_;
  Network m_;
  Network v_;
  long long t_ = 0;
};

/// Per-channel z-score statistics. A channel with zero spread keeps std = 1.
struct Normalizer {
  Vector mean;
  Vector stddev;

  static Normalizer fit(const Matrix& data);  // channels x samples
  Matrix normalize(const Matrix& data) const;
  Matrix denormalize(const Matrix& data) const;
};

struct TrainConfig {
  Architecture arch;
  int epochs = 2505;
  AdamConfig adam;
  double clip_norm = 5.0;
  double init_scale = 0.08;
  std::uint64_t seed = 0;
};

/// Training data drawn from a trajectory: time as the single input channel,
/// (N, V, G) as the three targets. D is not a network target.
struct Dataset {
  std::vector<double> times;
  Matrix inputs;   // 1 x T raw times
  Matrix targets;  // 3 x T raw N, V, G
};

Dataset dataset_from(const Trajectory& traj);

struct TrainResult {
  Network net;
  Normalizer input_norm;
  Normalizer target_norm;
  std::vector<double> loss_history;  // normalized MSE before each update
  double final_mse = 0.0;            // normalized MSE of the returned network
};

using EpochCallback = std::function<void(int epoch, double loss)>;

/// Full-batch Adam on the normalized sequence. Deterministic for a given
/// seed. Throws DivergedTraining if the loss becomes non-finite.
TrainResult train(const Dataset& data, const TrainConfig& config,
                  const EpochCallback& on_epoch = {});
/// Same, starting from the given parameters instead of a seeded init.
TrainResult train(Network net, const Dataset& data, const TrainConfig& config,
                  const EpochCallback& on_epoch = {});

/// Means of every complete run of `window` consecutive values;
/// values.size() - window + 1 entries, element i covering [i, i + window).
std::vector<double> smooth(const std::vector<double>& values, int window);

struct ModelArchive {
  Network net;
  Normalizer input_norm;
  Normalizer target_norm;
  TrainConfig config;
  double final_mse = 0.0;
};

/// Writes <stem>.json (config echo, normalization stats and an index of named
/// arrays with shapes) and <stem>.bin (row-major little-endian float64
/// payload) into `dir`.
void save_model(const std::filesystem::path& dir, const ModelArchive& model,
                const std::string& stem = "model");
ModelArchive load_model(const std::filesystem::path& dir, const std::string& stem = "model");

std::string loss_to_csv(const std::vector<double>& loss_history);

}  // namespace gazeode::hlstm
