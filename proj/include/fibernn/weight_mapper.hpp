#pragma once

#include <array>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "fibernn/dense_net.hpp"

namespace fibernn {

// y = effective * [x; 1] for a network built only from Purelin layers.
struct CollapsedModel {
  Eigen::MatrixXd effective;  // output_dim x (input_dim + 1)
  int input_dim = 0;
  int output_dim = 0;

  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
};

// [W | b].
Eigen::MatrixXd absorb_bias(const Eigen::MatrixXd& weights, const Eigen::VectorXd& bias);

// Folds every layer into one augmented matrix. Layer k+1 acts on the augmented
// output of layer k, whose constant 1 is carried by an appended (0, ..., 0, 1) row.
CollapsedModel collapse(const DenseNetwork& net);

// M = plus - minus with plus, minus >= 0 and disjoint supports.
struct SignSeparated {
  Eigen::MatrixXd plus;
  Eigen::MatrixXd minus;
};

SignSeparated sign_separate(const Eigen::MatrixXd& m);

Eigen::VectorXd augment_input(const Eigen::VectorXd& x);

// The four non-negative products whose signed sum reproduces W x:
// W+x+, W-x-, W+x-, W-x+.
enum class ProductKind { PlusPlus = 0, MinusMinus = 1, PlusMinus = 2, MinusPlus = 3 };
inline constexpr int kProductKinds = 4;

std::string_view product_name(ProductKind k);

std::array<Eigen::VectorXd, kProductKinds> sign_separated_products(const Eigen::MatrixXd& w,
                                                                   const Eigen::VectorXd& x);

// (W+x+ + W-x-) - (W+x- + W-x+).
Eigen::VectorXd recombine(const std::array<Eigen::VectorXd, kProductKinds>& products);

struct PulseGroup {
  int output_index = 0;
  // Segment values of the four modulated pulses, indexed by ProductKind.
  std::array<std::vector<double>, kProductKinds> products;
  std::vector<double> reference;  // unmodulated pulse, all ones
};

struct PulseSchedule {
  std::vector<PulseGroup> groups;
  int segment_count = 0;
  // Segment values were divided by this so that every transmission is <= 1;
  // combined outputs are multiplied back by it.
  double scale = 1.0;
};

struct ScheduleOptions {
  bool limit_to_unit_transmission = true;
};

PulseSchedule build_schedule(const CollapsedModel& model, const Eigen::VectorXd& x,
                             const ScheduleOptions& options = {});

// y = ((r1 + r2) - (r3 + r4)) / gamma with gamma = reference / N.
double combine_readouts(const std::array<double, kProductKinds>& readouts, double reference,
                        int segment_count);

// The exact value each group encodes: sum over segments of the signed products,
// times the schedule scale.
Eigen::VectorXd schedule_oracle(const PulseSchedule& schedule);

}  // namespace fibernn
