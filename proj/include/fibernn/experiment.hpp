#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fibernn/dataset.hpp"
#include "fibernn/dense_net.hpp"
#include "fibernn/fiber_sim.hpp"
#include "fibernn/weight_mapper.hpp"

namespace fibernn {

struct ExperimentConfig {
  DatasetParams dataset;
  std::vector<int> layer_sizes{4, 6, 3};
  TrainConfig train;
  PhysicsConfig physics = default_physics();
  std::uint64_t noise_seed = 0;
  int monte_carlo_trials = 100;
  std::string output_dir = "out";
};

void validate(const ExperimentConfig& cfg);

// Applies one seed to the dataset, the network initialization and the noise streams.
void set_seed(ExperimentConfig& cfg, std::uint64_t seed);

struct Deviation {
  std::vector<double> per_sample_max;  // max |theoretic - fiber| per sample
  std::vector<bool> agree;             // argmax agreement per sample
  double max = 0.0;
  double mean = 0.0;  // mean of per_sample_max
  int agreements = 0;
};

Deviation compare_outputs(const std::vector<Eigen::VectorXd>& theoretic,
                          const std::vector<Eigen::VectorXd>& fiber);

struct SampleOutcome {
  int sample_id = 0;
  int true_class = 0;
  double snr_db = 0.0;
  Eigen::VectorXd theoretic;
  Eigen::VectorXd fiber_mean;
  Eigen::VectorXd fiber_std;
  bool argmax_agree = false;
  double max_abs_deviation = 0.0;
  double correct_rate = 0.0;  // fraction of trials whose argmax is the true class
  int trials = 1;
  bool separated = false;     // one-sigma intervals of truth and best competitor disjoint
};

struct RunReport {
  std::string kind;  // "run-all" or "noise-sweep"
  ExperimentConfig config;
  Eigen::MatrixXd collapsed;
  std::vector<double> loss_history;
  double train_final_loss = 0.0;
  double train_accuracy = 0.0;
  Evaluation theoretic;
  Evaluation fiber;
  Deviation deviation;
  std::vector<SampleOutcome> samples;
  int trials = 1;
  bool noise = false;
  double mean_correct_rate = 0.0;
  double separated_fraction = 0.0;
  std::vector<std::string> warnings;
};

struct PreparedModel {
  Dataset dataset;
  TrainResult trained;
  CollapsedModel collapsed;
};

// Dataset -> training -> collapse; stage failures are rethrown as StageError.
PreparedModel prepare_model(const ExperimentConfig& cfg);

Eigen::VectorXd sample_input(const Sample& s);

// Fiber outputs of one input for one trial.
Eigen::VectorXd fiber_outputs(const FiberSimulator& sim, const CollapsedModel& model,
                              const Eigen::VectorXd& x, std::uint64_t seed,
                              std::vector<std::string>* warnings = nullptr);

// Single pass per test sample with the configured physics (noise off by default).
RunReport run_pipeline(const ExperimentConfig& cfg);

// `trials` independent passes per test sample; requires trials >= 2.
RunReport noise_sweep(const ExperimentConfig& cfg, int trials);

// True when mean - std of the true class exceeds mean + std of the
// competitor with the highest mean.
bool one_sigma_separated(const Eigen::VectorXd& mean, const Eigen::VectorXd& stddev,
                         int true_class);

}  // namespace fibernn
