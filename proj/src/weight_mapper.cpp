#include "fibernn/weight_mapper.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fibernn/error.hpp"

namespace fibernn {

Eigen::VectorXd CollapsedModel::apply(const Eigen::VectorXd& x) const {
  if (x.size() != input_dim) throw InvalidArgument("input dimension does not match the model");
  return effective * augment_input(x);
}

Eigen::MatrixXd absorb_bias(const Eigen::MatrixXd& weights, const Eigen::VectorXd& bias) {
  if (weights.rows() != bias.size()) {
    throw InvalidArgument("bias length " + std::to_string(bias.size()) +
                          " does not match weight rows " + std::to_string(weights.rows()));
  }
  Eigen::MatrixXd out(weights.rows(), weights.cols() + 1);
  out << weights, bias;
  return out;
}

CollapsedModel collapse(const DenseNetwork& net) {
  check_shapes(net);
  for (std::size_t k = 0; k < net.layer_count(); ++k) {
    if (net.activations[k] != Activation::Purelin) {
      throw NotCollapsible("layer " + std::to_string(k) + " uses activation '" +
                           std::string(activation_name(net.activations[k])) +
                           "'; only purelin layers collapse to one matrix");
    }
  }
  // Running map from [x; 1] to [layer output; 1].
  const int in = net.input_dim();
  Eigen::MatrixXd acc = Eigen::MatrixXd::Identity(in + 1, in + 1);
  for (std::size_t k = 0; k < net.layer_count(); ++k) {
    const Eigen::MatrixXd layer = absorb_bias(net.weights[k], net.biases[k]);
    Eigen::MatrixXd augmented = Eigen::MatrixXd::Zero(layer.rows() + 1, layer.cols());
    augmented.topRows(layer.rows()) = layer;
    augmented(layer.rows(), layer.cols() - 1) = 1.0;
    acc = augmented * acc;
  }
  CollapsedModel m;
  m.input_dim = in;
  m.output_dim = net.output_dim();
  m.effective = acc.topRows(m.output_dim);
  return m;
}

SignSeparated sign_separate(const Eigen::MatrixXd& m) {
  if (m.hasNaN()) throw NumericError("cannot sign-separate a matrix containing NaN");
  return {m.cwiseMax(0.0), (-m).cwiseMax(0.0)};
}

Eigen::VectorXd augment_input(const Eigen::VectorXd& x) {
  Eigen::VectorXd xe(x.size() + 1);
  xe << x, 1.0;
  return xe;
}

std::string_view product_name(ProductKind k) {
  switch (k) {
    case ProductKind::PlusPlus:
      return "w+x+";
    case ProductKind::MinusMinus:
      return "w-x-";
    case ProductKind::PlusMinus:
      return "w+x-";
    case ProductKind::MinusPlus:
      return "w-x+";
  }
  return "?";
}

std::array<Eigen::VectorXd, kProductKinds> sign_separated_products(const Eigen::MatrixXd& w,
                                                                   const Eigen::VectorXd& x) {
  if (w.cols() != x.size()) throw InvalidArgument("matrix columns do not match vector length");
  const SignSeparated ws = sign_separate(w);
  const SignSeparated xs = sign_separate(x);
  return {ws.plus * xs.plus, ws.minus * xs.minus, ws.plus * xs.minus, ws.minus * xs.plus};
}

Eigen::VectorXd recombine(const std::array<Eigen::VectorXd, kProductKinds>& p) {
  return (p[0] + p[1]) - (p[2] + p[3]);
}

PulseSchedule build_schedule(const CollapsedModel& model, const Eigen::VectorXd& x,
                             const ScheduleOptions& options) {
  if (x.size() != model.input_dim) {
    throw InvalidArgument("input has " + std::to_string(x.size()) + " features, model expects " +
                          std::to_string(model.input_dim));
  }
  if (!x.allFinite()) throw NumericError("input contains NaN or infinity");
  const SignSeparated ws = sign_separate(model.effective);
  const SignSeparated xs = sign_separate(augment_input(x));
  const auto n = static_cast<int>(xs.plus.rows());

  PulseSchedule s;
  s.segment_count = n;
  double peak = 0.0;
  for (int row = 0; row < model.output_dim; ++row) {
    PulseGroup g;
    g.output_index = row;
    const std::array<std::pair<const Eigen::MatrixXd*, const Eigen::MatrixXd*>, kProductKinds>
        pairs = {{{&ws.plus, &xs.plus},
                  {&ws.minus, &xs.minus},
                  {&ws.plus, &xs.minus},
                  {&ws.minus, &xs.plus}}};
    for (int k = 0; k < kProductKinds; ++k) {
      auto& seg = g.products[static_cast<std::size_t>(k)];
      seg.resize(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) {
        seg[static_cast<std::size_t>(i)] = (*pairs[k].first)(row, i) * (*pairs[k].second)(i, 0);
        peak = std::max(peak, seg[static_cast<std::size_t>(i)]);
      }
    }
    g.reference.assign(static_cast<std::size_t>(n), 1.0);
    s.groups.push_back(std::move(g));
  }
  if (options.limit_to_unit_transmission && peak > 1.0) {
    s.scale = peak;
    for (auto& g : s.groups) {
      for (auto& seg : g.products) {
        for (double& v : seg) v /= peak;
      }
    }
  }
  return s;
}

double combine_readouts(const std::array<double, kProductKinds>& r, double reference,
                        int segment_count) {
  if (!(reference > 0.0) || !std::isfinite(reference)) {
    throw CalibrationError("reference readout must be positive, got " + std::to_string(reference));
  }
  if (segment_count <= 0) throw InvalidArgument("segment_count must be positive");
  const double gamma = reference / segment_count;
  return ((r[0] + r[1]) - (r[2] + r[3])) / gamma;
}

Eigen::VectorXd schedule_oracle(const PulseSchedule& schedule) {
  Eigen::VectorXd y(static_cast<Eigen::Index>(schedule.groups.size()));
  for (std::size_t gi = 0; gi < schedule.groups.size(); ++gi) {
    const auto& p = schedule.groups[gi].products;
    double v = 0.0;
    for (std::size_t i = 0; i < p[0].size(); ++i) v += (p[0][i] + p[1][i]) - (p[2][i] + p[3][i]);
    y(static_cast<Eigen::Index>(gi)) = v * schedule.scale;
  }
  return y;
}

}  // namespace fibernn
