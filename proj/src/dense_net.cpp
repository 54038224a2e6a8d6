#include "fibernn/dense_net.hpp"

#include <cmath>
#include <random>
#include <string>

#include "fibernn/error.hpp"
#include "fibernn/random.hpp"

namespace fibernn {

namespace {

void require_finite(const Eigen::MatrixXd& m, const char* what) {
  if (!m.allFinite()) throw NumericError(std::string(what) + " contains NaN or infinity");
}

Eigen::MatrixXd activate(Activation a, Eigen::MatrixXd z) {
  if (a == Activation::Tanh) z = z.array().tanh().matrix();
  return z;
}

// Derivative expressed through the activation output.
Eigen::MatrixXd activation_slope(Activation a, const Eigen::MatrixXd& out) {
  if (a == Activation::Tanh) return (1.0 - out.array().square()).matrix();
  return Eigen::MatrixXd::Ones(out.rows(), out.cols());
}

Eigen::MatrixXd softmax_columns(const Eigen::MatrixXd& preds) {
  Eigen::MatrixXd p(preds.rows(), preds.cols());
  for (Eigen::Index j = 0; j < preds.cols(); ++j) {
    const double shift = preds.col(j).maxCoeff();
    Eigen::VectorXd e = (preds.col(j).array() - shift).exp().matrix();
    p.col(j) = e / e.sum();
  }
  return p;
}

}  // namespace

std::string_view activation_name(Activation a) {
  return a == Activation::Purelin ? "purelin" : "tanh";
}

Activation parse_activation(std::string_view name) {
  if (name == "purelin") return Activation::Purelin;
  if (name == "tanh") return Activation::Tanh;
  throw InvalidArgument("unknown activation '" + std::string(name) + "'");
}

std::string_view loss_name(LossKind k) { return k == LossKind::NMSE ? "nmse" : "ce"; }

LossKind parse_loss(std::string_view name) {
  if (name == "nmse" || name == "NMSE") return LossKind::NMSE;
  if (name == "ce" || name == "CE") return LossKind::CE;
  throw InvalidArgument("unknown loss '" + std::string(name) + "'");
}

DenseNetwork init_network(std::span<const int> layer_sizes, std::uint64_t seed,
                          Activation activation) {
  if (layer_sizes.size() < 2) throw InvalidArgument("a network needs at least two layer sizes");
  for (int s : layer_sizes) {
    if (s <= 0) throw InvalidArgument("layer sizes must be positive");
  }
  DenseNetwork net;
  net.layer_sizes.assign(layer_sizes.begin(), layer_sizes.end());
  Rng rng(seed);
  for (std::size_t k = 0; k + 1 < layer_sizes.size(); ++k) {
    const int fan_in = layer_sizes[k];
    const int fan_out = layer_sizes[k + 1];
    const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    std::uniform_real_distribution<double> u(-bound, bound);
    Eigen::MatrixXd w(fan_out, fan_in);
    // Row-major fill so the draw order matches the serialized layout.
    for (int r = 0; r < fan_out; ++r) {
      for (int c = 0; c < fan_in; ++c) w(r, c) = u(rng);
    }
    net.weights.push_back(std::move(w));
    net.biases.push_back(Eigen::VectorXd::Zero(fan_out));
    net.activations.push_back(activation);
  }
  return net;
}

void check_shapes(const DenseNetwork& net) {
  const auto& s = net.layer_sizes;
  if (s.size() < 2 || net.weights.size() != s.size() - 1 || net.biases.size() != s.size() - 1 ||
      net.activations.size() != s.size() - 1) {
    throw InvalidArgument("network layer count does not match layer_sizes");
  }
  for (std::size_t k = 0; k + 1 < s.size(); ++k) {
    if (net.weights[k].rows() != s[k + 1] || net.weights[k].cols() != s[k] ||
        net.biases[k].size() != s[k + 1]) {
      throw InvalidArgument("layer " + std::to_string(k) + " shape does not match layer_sizes");
    }
  }
}

Eigen::MatrixXd forward_batch(const DenseNetwork& net, const Eigen::MatrixXd& inputs) {
  if (inputs.rows() != net.input_dim()) {
    throw InvalidArgument("input dimension " + std::to_string(inputs.rows()) +
                          " does not match network input " + std::to_string(net.input_dim()));
  }
  Eigen::MatrixXd a = inputs;
  for (std::size_t k = 0; k < net.layer_count(); ++k) {
    Eigen::MatrixXd z = net.weights[k] * a;
    z.colwise() += net.biases[k];
    a = activate(net.activations[k], std::move(z));
  }
  return a;
}

Eigen::VectorXd forward(const DenseNetwork& net, const Eigen::VectorXd& x) {
  return forward_batch(net, x);
}

Batch make_batch(std::span<const Sample> samples) {
  Batch b;
  b.inputs.resize(kNumFeatures, static_cast<Eigen::Index>(samples.size()));
  b.labels.resize(kNumClasses, static_cast<Eigen::Index>(samples.size()));
  for (std::size_t j = 0; j < samples.size(); ++j) {
    const auto col = static_cast<Eigen::Index>(j);
    for (int k = 0; k < kNumFeatures; ++k) b.inputs(k, col) = samples[j].features[k];
    for (int k = 0; k < kNumClasses; ++k) b.labels(k, col) = samples[j].label[k];
  }
  return b;
}

double loss(const Eigen::MatrixXd& preds, const Eigen::MatrixXd& labels, LossKind kind) {
  if (preds.rows() != labels.rows() || preds.cols() != labels.cols()) {
    throw InvalidArgument("prediction and label shapes differ");
  }
  if (preds.size() == 0) throw InvalidArgument("empty batch");
  require_finite(preds, "prediction");
  require_finite(labels, "label");
  if (kind == LossKind::NMSE) {
    const double denom = labels.squaredNorm();
    if (denom == 0.0) throw NumericError("NMSE undefined for all-zero labels");
    return (preds - labels).squaredNorm() / denom;
  }
  const Eigen::MatrixXd p = softmax_columns(preds);
  return -(labels.array() * p.array().log()).sum() / static_cast<double>(preds.cols());
}

double loss(const Eigen::VectorXd& pred, const Eigen::VectorXd& label, LossKind kind) {
  return loss(Eigen::MatrixXd(pred), Eigen::MatrixXd(label), kind);
}

Gradients grad(const DenseNetwork& net, const Batch& batch, LossKind kind) {
  if (batch.size() == 0) throw InvalidArgument("empty batch");
  if (batch.inputs.rows() != net.input_dim() || batch.labels.rows() != net.output_dim() ||
      batch.labels.cols() != batch.inputs.cols()) {
    throw InvalidArgument("batch shape does not match the network");
  }
  require_finite(batch.inputs, "input");
  require_finite(batch.labels, "label");

  const std::size_t L = net.layer_count();
  std::vector<Eigen::MatrixXd> acts;
  acts.reserve(L + 1);
  acts.push_back(batch.inputs);
  for (std::size_t k = 0; k < L; ++k) {
    Eigen::MatrixXd z = net.weights[k] * acts.back();
    z.colwise() += net.biases[k];
    acts.push_back(activate(net.activations[k], std::move(z)));
  }
  const Eigen::MatrixXd& out = acts.back();
  require_finite(out, "network output");

  Eigen::MatrixXd delta;  // dLoss / d(layer output)
  if (kind == LossKind::NMSE) {
    const double denom = batch.labels.squaredNorm();
    if (denom == 0.0) throw NumericError("NMSE undefined for all-zero labels");
    delta = 2.0 * (out - batch.labels) / denom;
  } else {
    delta = (softmax_columns(out) - batch.labels) / static_cast<double>(batch.size());
  }

  Gradients g;
  g.weights.resize(L);
  g.biases.resize(L);
  for (std::size_t k = L; k-- > 0;) {
    Eigen::MatrixXd dz = delta.cwiseProduct(activation_slope(net.activations[k], acts[k + 1]));
    g.weights[k] = dz * acts[k].transpose();
    g.biases[k] = dz.rowwise().sum();
    if (k > 0) delta = net.weights[k].transpose() * dz;
  }
  return g;
}

AdamState make_adam_state(const DenseNetwork& net) {
  AdamState s;
  for (std::size_t k = 0; k < net.layer_count(); ++k) {
    s.m_weights.push_back(Eigen::MatrixXd::Zero(net.weights[k].rows(), net.weights[k].cols()));
    s.v_weights.push_back(s.m_weights.back());
    s.m_biases.push_back(Eigen::VectorXd::Zero(net.biases[k].size()));
    s.v_biases.push_back(s.m_biases.back());
  }
  return s;
}

namespace {

template <typename T>
void adam_update(T& param, T& m, T& v, const T& g, double lr, const AdamState& s, double c1,
                 double c2) {
  m = s.beta1 * m + (1.0 - s.beta1) * g;
  v = s.beta2 * v + (1.0 - s.beta2) * g.cwiseProduct(g);
  param.array() -= lr * (m.array() / c1) / ((v.array() / c2).sqrt() + s.epsilon);
}

}  // namespace

void adam_step(DenseNetwork& net, AdamState& state, const Gradients& grads, double learning_rate) {
  const std::size_t L = net.layer_count();
  if (state.m_weights.size() != L || grads.weights.size() != L || grads.biases.size() != L) {
    throw InvalidArgument("optimizer state does not match the network");
  }
  for (std::size_t k = 0; k < L; ++k) {
    if (grads.weights[k].rows() != net.weights[k].rows() ||
        grads.weights[k].cols() != net.weights[k].cols() ||
        grads.biases[k].size() != net.biases[k].size() ||
        state.m_weights[k].rows() != net.weights[k].rows() ||
        state.m_weights[k].cols() != net.weights[k].cols() ||
        state.m_biases[k].size() != net.biases[k].size()) {
      throw InvalidArgument("gradient shape mismatch at layer " + std::to_string(k));
    }
  }
  ++state.step;
  const double c1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
  const double c2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));
  for (std::size_t k = 0; k < L; ++k) {
    adam_update(net.weights[k], state.m_weights[k], state.v_weights[k], grads.weights[k],
                learning_rate, state, c1, c2);
    adam_update(net.biases[k], state.m_biases[k], state.v_biases[k], grads.biases[k],
                learning_rate, state, c1, c2);
  }
}

TrainResult train(DenseNetwork net, const Batch& data, const TrainConfig& cfg) {
  if (cfg.max_epochs < 1) throw InvalidArgument("max_epochs must be at least 1");
  if (!(cfg.learning_rate > 0.0)) throw InvalidArgument("learning_rate must be positive");
  if (data.size() == 0) throw InvalidArgument("training set is empty");
  check_shapes(net);
  if (data.inputs.rows() != net.input_dim()) {
    throw InvalidArgument("training inputs have dimension " + std::to_string(data.inputs.rows()) +
                          ", network expects " + std::to_string(net.input_dim()));
  }

  TrainResult result;
  AdamState state = make_adam_state(net);
  result.loss_history.reserve(static_cast<std::size_t>(cfg.max_epochs));
  for (int epoch = 0; epoch < cfg.max_epochs; ++epoch) {
    const double l = loss(forward_batch(net, data.inputs), data.labels, cfg.loss_kind);
    result.loss_history.push_back(l);
    if (l < cfg.target_loss) break;
    adam_step(net, state, grad(net, data, cfg.loss_kind), cfg.learning_rate);
  }
  result.final_loss = loss(forward_batch(net, data.inputs), data.labels, cfg.loss_kind);
  result.net = std::move(net);
  return result;
}

int argmax(const Eigen::VectorXd& v) {
  Eigen::Index i = 0;
  v.maxCoeff(&i);
  return static_cast<int>(i);
}

Evaluation evaluate_outputs(const Eigen::MatrixXd& outputs, const Eigen::MatrixXd& labels) {
  if (outputs.cols() == 0) throw InvalidArgument("no samples to evaluate");
  if (outputs.rows() != labels.rows() || outputs.cols() != labels.cols()) {
    throw InvalidArgument("output and label shapes differ");
  }
  const auto classes = static_cast<std::size_t>(labels.rows());
  Evaluation e;
  e.confusion.assign(classes, std::vector<int>(classes, 0));
  int correct = 0;
  for (Eigen::Index j = 0; j < outputs.cols(); ++j) {
    const int pred = argmax(outputs.col(j));
    const int truth = argmax(labels.col(j));
    e.predicted.push_back(pred);
    ++e.confusion[static_cast<std::size_t>(truth)][static_cast<std::size_t>(pred)];
    if (pred == truth) ++correct;
  }
  e.accuracy = static_cast<double>(correct) / static_cast<double>(outputs.cols());
  return e;
}

Evaluation evaluate(const DenseNetwork& net, const Batch& samples) {
  return evaluate_outputs(forward_batch(net, samples.inputs), samples.labels);
}

}  // namespace fibernn
