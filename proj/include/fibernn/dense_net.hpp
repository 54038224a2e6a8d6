#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "fibernn/dataset.hpp"

namespace fibernn {

// Purelin is the identity; it is the only activation the optical path supports.
enum class Activation { Purelin, Tanh };

std::string_view activation_name(Activation a);
Activation parse_activation(std::string_view name);

struct DenseNetwork {
  std::vector<int> layer_sizes;
  std::vector<Eigen::MatrixXd> weights;  // weights[k]: sizes[k+1] x sizes[k]
  std::vector<Eigen::VectorXd> biases;   // biases[k]: sizes[k+1]
  std::vector<Activation> activations;   // one per weight layer

  int input_dim() const { return layer_sizes.front(); }
  int output_dim() const { return layer_sizes.back(); }
  std::size_t layer_count() const { return weights.size(); }
};

// Weights uniform in [-1/sqrt(fan_in), 1/sqrt(fan_in)], zero biases.
DenseNetwork init_network(std::span<const int> layer_sizes, std::uint64_t seed,
                          Activation activation = Activation::Purelin);

// Throws InvalidArgument when shapes disagree with layer_sizes.
void check_shapes(const DenseNetwork& net);

Eigen::VectorXd forward(const DenseNetwork& net, const Eigen::VectorXd& x);
// Column-per-sample batch forward.
Eigen::MatrixXd forward_batch(const DenseNetwork& net, const Eigen::MatrixXd& inputs);

enum class LossKind { NMSE, CE };

std::string_view loss_name(LossKind k);
LossKind parse_loss(std::string_view name);

// Column-per-sample inputs and labels.
struct Batch {
  Eigen::MatrixXd inputs;
  Eigen::MatrixXd labels;

  Eigen::Index size() const { return inputs.cols(); }
};

Batch make_batch(std::span<const Sample> samples);

// NMSE = sum ||pred - label||^2 / sum ||label||^2 over the batch.
// CE = mean over samples of -sum label * ln(softmax(pred)).
double loss(const Eigen::MatrixXd& preds, const Eigen::MatrixXd& labels, LossKind kind);
double loss(const Eigen::VectorXd& pred, const Eigen::VectorXd& label, LossKind kind);

struct Gradients {
  std::vector<Eigen::MatrixXd> weights;
  std::vector<Eigen::VectorXd> biases;
};

Gradients grad(const DenseNetwork& net, const Batch& batch, LossKind kind);

struct AdamState {
  std::vector<Eigen::MatrixXd> m_weights, v_weights;
  std::vector<Eigen::VectorXd> m_biases, v_biases;
  std::int64_t step = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

AdamState make_adam_state(const DenseNetwork& net);

// One bias-corrected ADAM update of every parameter.
void adam_step(DenseNetwork& net, AdamState& state, const Gradients& grads, double learning_rate);

struct TrainConfig {
  double learning_rate = 1e-3;
  LossKind loss_kind = LossKind::NMSE;
  int max_epochs = 2000;
  double target_loss = 0.0;  // stop once the epoch loss falls below this
  std::uint64_t seed = 0;
};

struct TrainResult {
  DenseNetwork net;
  std::vector<double> loss_history;  // loss before each update
  double final_loss = 0.0;           // loss of the returned parameters
};

// Full-batch ADAM.
TrainResult train(DenseNetwork net, const Batch& data, const TrainConfig& cfg);

struct Evaluation {
  double accuracy = 0.0;
  std::vector<int> predicted;
  std::vector<std::vector<int>> confusion;  // [true][predicted]
};

int argmax(const Eigen::VectorXd& v);

Evaluation evaluate(const DenseNetwork& net, const Batch& samples);
// Same metrics for precomputed output columns.
Evaluation evaluate_outputs(const Eigen::MatrixXd& outputs, const Eigen::MatrixXd& labels);

}  // namespace fibernn
