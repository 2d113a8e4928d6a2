#include "gazeode/hlstm.hpp"

#include <bit>
#include <cassert>
#include <cmath>
#include <fstream>

#if defined(__SSE2__)
#include <pmmintrin.h>
#include <xmmintrin.h>
#endif

#include "json.hpp"

#include "gazeode/csv.hpp"
#include "gazeode/errors.hpp"
#include "gazeode/hermite.hpp"
#include "gazeode/random.hpp"

namespace gazeode::hlstm {

namespace {

// Expression forms of the Hermite activation and its derivative, so they can
// be assigned into preallocated storage without temporaries.
template <typename Derived>
auto hermite_of(const Eigen::MatrixBase<Derived>& z) {
  return ((-0.5 * z.array().square()).exp() * (1.0 - z.array().square())).matrix();
}

template <typename Derived>
auto hermite_grad_of(const Eigen::MatrixBase<Derived>& z) {
  return (-z.array() * (-0.5 * z.array().square()).exp() * (3.0 - z.array().square())).matrix();
}

// Gaussian tails of the activation underflow into subnormals once the cell
// state drifts away from zero, and subnormal arithmetic is ~20x slower on x86.
// Flushing them to zero changes results only below 2.2e-308.
class SubnormalFlushScope {
 public:
#if defined(__SSE2__)
  SubnormalFlushScope() : saved_(_mm_getcsr()) { _mm_setcsr(saved_ | 0x8040u); }  // FTZ | DAZ
  ~SubnormalFlushScope() { _mm_setcsr(saved_); }

 private:
  unsigned int saved_;
#endif
 public:
  SubnormalFlushScope(const SubnormalFlushScope&) = delete;
  SubnormalFlushScope& operator=(const SubnormalFlushScope&) = delete;
};

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& m) {
  return m.allFinite();
}

template <typename Tensor>
void fill_uniform(Tensor& t, Rng& rng, double scale) {
  for (Eigen::Index j = 0; j < t.cols(); ++j) {
    for (Eigen::Index i = 0; i < t.rows(); ++i) t(i, j) = (2.0 * rng.unit() - 1.0) * scale;
  }
}

}  // namespace

HlstmCell::HlstmCell(int hidden, int input)
    : hidden_size(hidden),
      input_size(input),
      w(Matrix::Zero(4 * hidden, hidden + input)),
      b(Vector::Zero(4 * hidden)) {}

Network Network::zeros(const Architecture& arch) {
  if (arch.hidden_size < 1 || arch.input_size < 1 || arch.output_size < 1) {
    throw Error(ErrorKind::ShapeMismatch, "layer sizes must be positive");
  }
  Network net;
  net.cell = HlstmCell(arch.hidden_size, arch.input_size);
  int fan_in = arch.hidden_size;
  for (const int size : arch.dense_sizes) {
    if (size < 1) throw Error(ErrorKind::ShapeMismatch, "layer sizes must be positive");
    net.head.layers.push_back({Matrix::Zero(size, fan_in), Vector::Zero(size), true});
    fan_in = size;
  }
  net.head.layers.push_back(
      {Matrix::Zero(arch.output_size, fan_in), Vector::Zero(arch.output_size), false});
  return net;
}

Network Network::random(const Architecture& arch, std::uint64_t seed, double scale) {
  Network net = zeros(arch);
  Rng rng(seed);
  for_each_parameter([&](const std::string&, auto& t) { fill_uniform(t, rng, scale); }, net);
  return net;
}

Architecture Network::architecture() const {
  Architecture arch;
  arch.input_size = cell.input_size;
  arch.hidden_size = cell.hidden_size;
  arch.dense_sizes.clear();
  for (std::size_t l = 0; l + 1 < head.layers.size(); ++l) {
    arch.dense_sizes.push_back(static_cast<int>(head.layers[l].w.rows()));
  }
  arch.output_size = static_cast<int>(head.layers.back().w.rows());
  return arch;
}

std::size_t Network::parameter_count() const {
  std::size_t count = 0;
  for_each_parameter([&](const std::string&, const auto& t) { count += t.size(); }, *this);
  return count;
}

CellCache cell_forward(const HlstmCell& cell, const Vector& h_prev, const Vector& c_prev,
                       const Vector& x) {
  const int hs = cell.hidden_size;
  if (h_prev.size() != hs || c_prev.size() != hs || x.size() != cell.input_size ||
      cell.w.rows() != 4 * hs || cell.w.cols() != hs + cell.input_size || cell.b.size() != 4 * hs) {
    throw Error(ErrorKind::ShapeMismatch, "cell inputs do not match hidden/input sizes");
  }
  if (!all_finite(h_prev) || !all_finite(c_prev) || !all_finite(x)) {
    throw Error(ErrorKind::NonFinite, "non-finite cell input");
  }
  const SubnormalFlushScope flush;
  CellCache out;
  out.h_prev = h_prev;
  out.c_prev = c_prev;
  out.x = x;
  out.z = cell.w.leftCols(hs) * h_prev + cell.w.rightCols(cell.input_size) * x + cell.b;
  out.gates = hermite_of(out.z);
  const auto i = out.gates.segment(0, hs).array();
  const auto f = out.gates.segment(hs, hs).array();
  const auto o = out.gates.segment(2 * hs, hs).array();
  const auto g = out.gates.segment(3 * hs, hs).array();
  out.c = (f * c_prev.array() + i * g).matrix();
  out.h = (o * hermite_of(out.c).array()).matrix();
  if (!all_finite(out.h) || !all_finite(out.c)) {
    throw Error(ErrorKind::NonFinite, "cell state became non-finite");
  }
  return out;
}

ForwardCache network_forward(const Network& net, const Matrix& inputs) {
  const auto& cell = net.cell;
  const int hs = cell.hidden_size;
  if (inputs.rows() != cell.input_size) {
    throw Error(ErrorKind::ShapeMismatch, "input channel count does not match the network");
  }
  const Eigen::Index steps = inputs.cols();
  const SubnormalFlushScope flush;
  ForwardCache fc;
  fc.inputs = inputs;
  fc.h = Matrix::Zero(hs, steps + 1);
  fc.c = Matrix::Zero(hs, steps + 1);
  fc.hc = Matrix::Zero(hs, steps + 1);
  fc.hc.col(0).setOnes();  // H(0)
  // input contribution for all steps at once; only the recurrent part is sequential
  fc.z = cell.w.rightCols(cell.input_size) * inputs;
  fc.z.colwise() += cell.b;
  fc.gates.resize(4 * hs, steps);

  const auto w_h = cell.w.leftCols(hs);
  Vector z(4 * hs);
  for (Eigen::Index t = 0; t < steps; ++t) {
    z.noalias() = w_h * fc.h.col(t);
    fc.z.col(t) += z;
    fc.gates.col(t) = hermite_of(fc.z.col(t));
    const auto gates = fc.gates.col(t).array();
    fc.c.col(t + 1) = gates.segment(hs, hs) * fc.c.col(t).array() +
                      gates.segment(0, hs) * gates.segment(3 * hs, hs);
    fc.hc.col(t + 1) = hermite_of(fc.c.col(t + 1));
    fc.h.col(t + 1) = gates.segment(2 * hs, hs) * fc.hc.col(t + 1).array();
  }
  assert((fc.gates.array() >= hermite::kActivationMin - 1e-12).all() &&
         (fc.gates.array() <= hermite::kActivationMax).all());

  fc.head_z.reserve(net.head.layers.size());
  fc.head_a.reserve(net.head.layers.size());
  const Matrix hidden = fc.h.rightCols(steps);
  const Matrix* layer_in = &hidden;
  for (const auto& layer : net.head.layers) {
    Matrix zl = layer.w * *layer_in;
    zl.colwise() += layer.b;
    fc.head_a.push_back(layer.hermite ? Matrix(hermite_of(zl)) : zl);
    fc.head_z.push_back(std::move(zl));
    layer_in = &fc.head_a.back();
  }
  if (!all_finite(fc.output())) {
    throw Error(ErrorKind::NonFinite, "network output became non-finite");
  }
  return fc;
}

Matrix predict(const Network& net, const Matrix& inputs) {
  return network_forward(net, inputs).output();
}

double mse(const Matrix& prediction, const Matrix& target) {
  if (prediction.rows() != target.rows() || prediction.cols() != target.cols()) {
    throw Error(ErrorKind::ShapeMismatch, "prediction and target shapes differ");
  }
  if (prediction.size() == 0) return 0.0;
  return (prediction - target).squaredNorm() / static_cast<double>(prediction.size());
}

Network backward(const Network& net, const ForwardCache& fc, const Matrix& targets,
                 double loss_scale) {
  const auto& out = fc.output();
  if (targets.rows() != out.rows() || targets.cols() != out.cols()) {
    throw Error(ErrorKind::ShapeMismatch, "targets do not match network output");
  }
  const int hs = net.cell.hidden_size;
  const Eigen::Index steps = fc.inputs.cols();
  const SubnormalFlushScope flush;
  Network grads = Network::zeros(net.architecture());

  // dense head, batched over time
  Matrix delta = (2.0 * loss_scale / static_cast<double>(out.size())) * (out - targets);
  const Matrix hidden = fc.h.rightCols(steps);
  for (std::size_t l = net.head.layers.size(); l-- > 0;) {
    const auto& layer = net.head.layers[l];
    if (layer.hermite) delta.array() *= hermite_grad_of(fc.head_z[l]).array();
    const Matrix& layer_in = l == 0 ? hidden : fc.head_a[l - 1];
    grads.head.layers[l].w.noalias() = delta * layer_in.transpose();
    grads.head.layers[l].b = delta.rowwise().sum();
    delta = layer.w.transpose() * delta;
  }
  const Matrix& dh_head = delta;  // H x T

  // recurrent part, backwards through time
  Matrix dz(4 * hs, steps);
  Vector dh_next = Vector::Zero(hs);
  Vector dc_next = Vector::Zero(hs);
  Vector dh(hs), dc(hs), dgates(4 * hs);
  const Matrix w_h_t = net.cell.w.leftCols(hs).transpose();
  for (Eigen::Index t = steps; t-- > 0;) {
    const auto gates = fc.gates.col(t).array();
    const auto i = gates.segment(0, hs);
    const auto f = gates.segment(hs, hs);
    const auto o = gates.segment(2 * hs, hs);
    const auto g = gates.segment(3 * hs, hs);
    dh = dh_head.col(t) + dh_next;
    dc = dc_next.array() + dh.array() * o * hermite_grad_of(fc.c.col(t + 1)).array();
    dgates.segment(0, hs) = dc.array() * g;
    dgates.segment(hs, hs) = dc.array() * fc.c.col(t).array();
    dgates.segment(2 * hs, hs) = dh.array() * fc.hc.col(t + 1).array();
    dgates.segment(3 * hs, hs) = dc.array() * i;
    dz.col(t) = dgates.cwiseProduct(hermite_grad_of(fc.z.col(t)));
    dh_next.noalias() = w_h_t * dz.col(t);
    dc_next = dc.array() * f;
  }
  grads.cell.w.leftCols(hs).noalias() = dz * fc.h.leftCols(steps).transpose();
  grads.cell.w.rightCols(net.cell.input_size).noalias() = dz * fc.inputs.transpose();
  grads.cell.b = dz.rowwise().sum();
  return grads;
}

double global_norm(const Network& grads) {
  double sq = 0.0;
  for_each_parameter([&](const std::string&, const auto& t) { sq += t.squaredNorm(); }, grads);
  return std::sqrt(sq);
}

double clip_global_norm(Network& grads, double max_norm) {
  const double norm = global_norm(grads);
  if (norm > max_norm) {
    const double scale = max_norm / norm;
    for_each_parameter([&](const std::string&, auto& t) { t *= scale; }, grads);
  }
  return norm;
}

Adam::Adam(const Network& like, AdamConfig config)
    : config_(config), m_(Network::zeros(like.architecture())), v_(Network::zeros(like.architecture())) {}

void Adam::step(Network& params, const Network& grads) {
  ++t_;
  const double b1 = config_.beta1;
  const double b2 = config_.beta2;
  const double correction1 = 1.0 - std::pow(b1, static_cast<double>(t_));
  const double correction2 = 1.0 - std::pow(b2, static_cast<double>(t_));
  const double lr = config_.learning_rate;
  const double eps = config_.epsilon;
  for_each_parameter(
      [&](const std::string&, auto& p, auto& grad, auto& m, auto& v) {
        m = b1 * m + (1.0 - b1) * grad;
        v = b2 * v + (1.0 - b2) * grad.cwiseProduct(grad);
        p.array() -= lr * (m.array() / correction1) /
                     ((v.array() / correction2).sqrt() + eps);
      },
      params, grads, m_, v_);
}

Normalizer Normalizer::fit(const Matrix& data) {
  Normalizer n;
  const double count = static_cast<double>(data.cols());
  if (data.cols() == 0) throw Error(ErrorKind::EmptyInput, "cannot normalize an empty series");
  n.mean = data.rowwise().sum() / count;
  n.stddev.resize(data.rows());
  for (Eigen::Index r = 0; r < data.rows(); ++r) {
    const double var = (data.row(r).array() - n.mean(r)).square().sum() / count;
    const double sd = std::sqrt(var);
    n.stddev(r) = sd > 0.0 ? sd : 1.0;
  }
  return n;
}

Matrix Normalizer::normalize(const Matrix& data) const {
  return ((data.colwise() - mean).array().colwise() / stddev.array()).matrix();
}

Matrix Normalizer::denormalize(const Matrix& data) const {
  return ((data.array().colwise() * stddev.array()).matrix().colwise() + mean);
}

Dataset dataset_from(const Trajectory& traj) {
  Dataset d;
  const auto n = static_cast<Eigen::Index>(traj.size());
  if (n == 0) throw Error(ErrorKind::EmptyInput, "trajectory is empty");
  d.times = traj.times;
  d.inputs.resize(1, n);
  d.targets.resize(3, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& s = traj.states[static_cast<std::size_t>(i)];
    d.inputs(0, i) = traj.times[static_cast<std::size_t>(i)];
    d.targets(0, i) = s.n;
    d.targets(1, i) = s.v;
    d.targets(2, i) = s.g;
  }
  return d;
}

TrainResult train(const Dataset& data, const TrainConfig& config, const EpochCallback& on_epoch) {
  return train(Network::random(config.arch, config.seed, config.init_scale), data, config, on_epoch);
}

TrainResult train(Network net, const Dataset& data, const TrainConfig& config,
                  const EpochCallback& on_epoch) {
  if (config.epochs < 1) throw Error(ErrorKind::InvalidArgument, "epochs must be at least 1");
  TrainResult result;
  result.input_norm = Normalizer::fit(data.inputs);
  result.target_norm = Normalizer::fit(data.targets);
  const Matrix x = result.input_norm.normalize(data.inputs);
  const Matrix y = result.target_norm.normalize(data.targets);

  Adam adam(net, config.adam);
  result.loss_history.reserve(static_cast<std::size_t>(config.epochs));
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    const ForwardCache fc = network_forward(net, x);
    const double loss = mse(fc.output(), y);
    if (!std::isfinite(loss)) {
      throw Error(ErrorKind::DivergedTraining, "loss became non-finite at epoch " + std::to_string(epoch));
    }
    result.loss_history.push_back(loss);
    if (on_epoch) on_epoch(epoch, loss);
    Network grads = backward(net, fc, y);
    clip_global_norm(grads, config.clip_norm);
    adam.step(net, grads);
  }
  result.final_mse = mse(predict(net, x), y);
  if (!std::isfinite(result.final_mse)) {
    throw Error(ErrorKind::DivergedTraining, "final loss is non-finite");
  }
  result.net = std::move(net);
  return result;
}

std::vector<double> smooth(const std::vector<double>& values, int window) {
  if (window < 1) throw Error(ErrorKind::InvalidArgument, "smoothing window must be positive");
  const auto w = static_cast<std::size_t>(window);
  if (values.size() < w) return {};
  std::vector<double> out(values.size() - w + 1);
  for (std::size_t i = 0; i < out.size(); ++i) {
    double sum = 0.0;
    for (std::size_t j = i; j < i + w; ++j) sum += values[j];
    out[i] = sum / static_cast<double>(w);
  }
  return out;
}

namespace {

void append_le(std::string& out, double value) {
  auto bits = std::bit_cast<std::uint64_t>(value);
  for (int i = 0; i < 8; ++i) {
    out.push_back(static_cast<char>(bits & 0xffu));
    bits >>= 8;
  }
}

double read_le(const unsigned char* p) {
  std::uint64_t bits = 0;
  for (int i = 7; i >= 0; --i) bits = (bits << 8) | p[i];
  return std::bit_cast<double>(bits);
}

nlohmann::json vector_json(const Vector& v) {
  return nlohmann::json(std::vector<double>(v.data(), v.data() + v.size()));
}

Vector vector_from(const nlohmann::json& j) {
  const auto values = j.get<std::vector<double>>();
  return Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

}  // namespace

void save_model(const std::filesystem::path& dir, const ModelArchive& model, const std::string& stem) {
  nlohmann::ordered_json index;
  const auto arch = model.net.architecture();
  index["format"] = "gazeode-hlstm";
  index["version"] = 1;
  index["data_file"] = stem + ".bin";
  index["dtype"] = "float64";
  index["byte_order"] = "little";
  index["layout"] = "row-major";
  index["architecture"] = {{"input_size", arch.input_size},
                           {"hidden_size", arch.hidden_size},
                           {"dense_sizes", arch.dense_sizes},
                           {"output_size", arch.output_size}};
  index["config"] = {{"seed", model.config.seed},
                     {"epochs", model.config.epochs},
                     {"learning_rate", model.config.adam.learning_rate},
                     {"beta1", model.config.adam.beta1},
                     {"beta2", model.config.adam.beta2},
                     {"epsilon", model.config.adam.epsilon},
                     {"clip_norm", model.config.clip_norm},
                     {"init_scale", model.config.init_scale}};
  index["normalization"] = {{"input_mean", vector_json(model.input_norm.mean)},
                            {"input_std", vector_json(model.input_norm.stddev)},
                            {"target_mean", vector_json(model.target_norm.mean)},
                            {"target_std", vector_json(model.target_norm.stddev)}};
  index["final_mse"] = model.final_mse;

  std::string payload;
  auto arrays = nlohmann::ordered_json::array();
  std::size_t offset = 0;
  for_each_parameter(
      [&](const std::string& name, const auto& t) {
        arrays.push_back({{"name", name},
                          {"shape", t.cols() == 1 ? std::vector<Eigen::Index>{t.rows()}
                                                  : std::vector<Eigen::Index>{t.rows(), t.cols()}},
                          {"offset", offset}});
        for (Eigen::Index i = 0; i < t.rows(); ++i) {
          for (Eigen::Index j = 0; j < t.cols(); ++j) append_le(payload, t(i, j));
        }
        offset += static_cast<std::size_t>(t.size()) * 8;
      },
      model.net);
  index["arrays"] = std::move(arrays);

  csv::write_text(dir / (stem + ".json"), index.dump(2) + "\n");
  csv::write_text(dir / (stem + ".bin"), payload);
}

ModelArchive load_model(const std::filesystem::path& dir, const std::string& stem) {
  const auto json_path = dir / (stem + ".json");
  std::ifstream in(json_path);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + json_path.string());
  nlohmann::json index;
  try {
    in >> index;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::MalformedRow, json_path.string() + ": " + e.what());
  }

  const auto bin_path = dir / index.at("data_file").get<std::string>();
  std::ifstream bin(bin_path, std::ios::binary);
  if (!bin) throw Error(ErrorKind::Io, "cannot open " + bin_path.string());
  const std::string payload((std::istreambuf_iterator<char>(bin)), std::istreambuf_iterator<char>());

  ModelArchive model;
  try {
    Architecture arch;
    const auto& a = index.at("architecture");
    arch.input_size = a.at("input_size").get<int>();
    arch.hidden_size = a.at("hidden_size").get<int>();
    arch.dense_sizes = a.at("dense_sizes").get<std::vector<int>>();
    arch.output_size = a.at("output_size").get<int>();
    model.net = Network::zeros(arch);
    model.config.arch = arch;

    const auto& c = index.at("config");
    model.config.seed = c.at("seed").get<std::uint64_t>();
    model.config.epochs = c.at("epochs").get<int>();
    model.config.adam.learning_rate = c.at("learning_rate").get<double>();
    model.config.adam.beta1 = c.at("beta1").get<double>();
    model.config.adam.beta2 = c.at("beta2").get<double>();
    model.config.adam.epsilon = c.at("epsilon").get<double>();
    model.config.clip_norm = c.at("clip_norm").get<double>();
    model.config.init_scale = c.at("init_scale").get<double>();

    const auto& nrm = index.at("normalization");
    model.input_norm = {vector_from(nrm.at("input_mean")), vector_from(nrm.at("input_std"))};
    model.target_norm = {vector_from(nrm.at("target_mean")), vector_from(nrm.at("target_std"))};
    model.final_mse = index.at("final_mse").get<double>();

    const auto& arrays = index.at("arrays");
    std::size_t k = 0;
    for_each_parameter(
        [&](const std::string& name, auto& t) {
          if (k >= arrays.size() || arrays[k].at("name").get<std::string>() != name) {
            throw Error(ErrorKind::ShapeMismatch, "archive array order does not match '" + name + "'");
          }
          const auto shape = arrays[k].at("shape").get<std::vector<Eigen::Index>>();
          const Eigen::Index rows = shape.at(0);
          const Eigen::Index cols = shape.size() > 1 ? shape[1] : 1;
          if (rows != t.rows() || cols != t.cols()) {
            throw Error(ErrorKind::ShapeMismatch, "array '" + name + "' has the wrong shape");
          }
          const auto offset = arrays[k].at("offset").get<std::size_t>();
          if (offset + static_cast<std::size_t>(t.size()) * 8 > payload.size()) {
            throw Error(ErrorKind::ShapeMismatch, "array '" + name + "' runs past the payload");
          }
          const auto* p = reinterpret_cast<const unsigned char*>(payload.data() + offset);
          for (Eigen::Index i = 0; i < rows; ++i) {
            for (Eigen::Index j = 0; j < cols; ++j, p += 8) t(i, j) = read_le(p);
          }
          ++k;
        },
        model.net);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::MalformedRow, json_path.string() + ": " + e.what());
  }
  return model;
}

std::string loss_to_csv(const std::vector<double>& loss_history) {
  std::string out = "epoch,mse\n";
  for (std::size_t e = 0; e < loss_history.size(); ++e) {
    out += std::to_string(e + 1) + ',' + csv::format_double(loss_history[e]) + '\n';
  }
  return out;
}

}  // namespace gazeode::hlstm
