#include "fibernn/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fibernn/error.hpp"
#include "fibernn/random.hpp"

namespace fibernn {

namespace {

template <typename F>
auto stage(const char* name, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(name, e.what());
  }
}

Eigen::MatrixXd columns(const std::vector<Eigen::VectorXd>& v) {
  Eigen::MatrixXd m(v.empty() ? 0 : v.front().size(), static_cast<Eigen::Index>(v.size()));
  for (std::size_t j = 0; j < v.size(); ++j) m.col(static_cast<Eigen::Index>(j)) = v[j];
  return m;
}

}  // namespace

void validate(const ExperimentConfig& cfg) {
  if (cfg.dataset.per_class < 5) throw InvalidArgument("dataset.per_class must be at least 5");
  if (cfg.layer_sizes.size() < 2) throw InvalidArgument("layer_sizes needs at least two entries");
  if (cfg.layer_sizes.front() != kNumFeatures) {
    throw InvalidArgument("first layer size must equal the feature count (" +
                          std::to_string(kNumFeatures) + ")");
  }
  if (cfg.layer_sizes.back() != kNumClasses) {
    throw InvalidArgument("last layer size must equal the class count (" +
                          std::to_string(kNumClasses) + ")");
  }
  if (cfg.train.max_epochs < 1) throw InvalidArgument("train.max_epochs must be at least 1");
  if (!(cfg.train.learning_rate > 0.0)) throw InvalidArgument("train.learning_rate must be positive");
  if (cfg.monte_carlo_trials < 1) throw InvalidArgument("monte_carlo_trials must be at least 1");
  validate(cfg.physics);
}

void set_seed(ExperimentConfig& cfg, std::uint64_t seed) {
  cfg.dataset.seed = seed;
  cfg.train.seed = seed;
  cfg.noise_seed = seed;
}

Deviation compare_outputs(const std::vector<Eigen::VectorXd>& theoretic,
                          const std::vector<Eigen::VectorXd>& fiber) {
  if (theoretic.size() != fiber.size()) {
    throw InvalidArgument("theoretic and fiber output counts differ");
  }
  Deviation d;
  for (std::size_t i = 0; i < theoretic.size(); ++i) {
    if (theoretic[i].size() != fiber[i].size()) {
      throw InvalidArgument("output vector lengths differ at sample " + std::to_string(i));
    }
    const double dev = theoretic[i].size() ? (theoretic[i] - fiber[i]).cwiseAbs().maxCoeff() : 0.0;
    const bool agree = theoretic[i].size() == 0 || argmax(theoretic[i]) == argmax(fiber[i]);
    d.per_sample_max.push_back(dev);
    d.agree.push_back(agree);
    d.max = std::max(d.max, dev);
    d.mean += dev;
    d.agreements += agree ? 1 : 0;
  }
  if (!theoretic.empty()) d.mean /= static_cast<double>(theoretic.size());
  return d;
}

PreparedModel prepare_model(const ExperimentConfig& cfg) {
  stage("config", [&] { validate(cfg); });
  PreparedModel pm;
  pm.dataset = stage("dataset", [&] { return build_dataset(cfg.dataset); });
  pm.trained = stage("train", [&] {
    DenseNetwork net = init_network(cfg.layer_sizes, cfg.train.seed);
    return train(std::move(net), make_batch(pm.dataset.train), cfg.train);
  });
  pm.collapsed = stage("map", [&] { return collapse(pm.trained.net); });
  return pm;
}

Eigen::VectorXd sample_input(const Sample& s) {
  Eigen::VectorXd x(kNumFeatures);
  for (int k = 0; k < kNumFeatures; ++k) x(k) = s.features[k];
  return x;
}

Eigen::VectorXd fiber_outputs(const FiberSimulator& sim, const CollapsedModel& model,
                              const Eigen::VectorXd& x, std::uint64_t seed,
                              std::vector<std::string>* warnings) {
  const PulseSchedule schedule = build_schedule(model, x);
  ScheduleReadouts r = sim.run(schedule, seed);
  if (warnings) warnings->insert(warnings->end(), r.warnings.begin(), r.warnings.end());
  return combine_schedule(schedule, r);
}

bool one_sigma_separated(const Eigen::VectorXd& mean, const Eigen::VectorXd& stddev,
                         int true_class) {
  int best = -1;
  for (int k = 0; k < mean.size(); ++k) {
    if (k != true_class && (best < 0 || mean(k) > mean(best))) best = k;
  }
  if (best < 0) return true;
  return mean(true_class) - stddev(true_class) > mean(best) + stddev(best);
}

namespace {

RunReport simulate_test_set(const ExperimentConfig& cfg, int trials, const char* kind) {
  const PreparedModel pm = prepare_model(cfg);
  const FiberSimulator sim = stage("fiber-sim", [&] { return FiberSimulator(cfg.physics); });

  RunReport rep;
  rep.kind = kind;
  rep.config = cfg;
  rep.collapsed = pm.collapsed.effective;
  rep.loss_history = pm.trained.loss_history;
  rep.train_final_loss = pm.trained.final_loss;
  rep.trials = trials;
  rep.noise = cfg.physics.amplifier.noise_enabled || cfg.physics.detector.noise_enabled;
  rep.train_accuracy = evaluate(pm.trained.net, make_batch(pm.dataset.train)).accuracy;

  const Batch test = make_batch(pm.dataset.test);
  std::vector<Eigen::VectorXd> theo;
  std::vector<Eigen::VectorXd> fib;
  for (std::size_t i = 0; i < pm.dataset.test.size(); ++i) {
    const Sample& s = pm.dataset.test[i];
    const Eigen::VectorXd x = sample_input(s);
    SampleOutcome o;
    o.sample_id = static_cast<int>(i);
    o.true_class = s.class_index();
    o.snr_db = s.snr_db;
    o.trials = trials;
    o.theoretic = forward(pm.trained.net, x);

    const auto dim = o.theoretic.size();
    Eigen::VectorXd sum_sq = Eigen::VectorXd::Zero(dim);
    std::vector<Eigen::VectorXd> runs;
    int correct = 0;
    for (int t = 0; t < trials; ++t) {
      const std::uint64_t seed = derive_seed(cfg.noise_seed, {i, static_cast<std::uint64_t>(t)});
      Eigen::VectorXd y = stage("fiber-sim", [&] {
        return fiber_outputs(sim, pm.collapsed, x, seed, t == 0 ? &rep.warnings : nullptr);
      });
      if (argmax(y) == o.true_class) ++correct;
      runs.push_back(std::move(y));
    }
    // Shifted by the first run so identical trials give exactly zero spread.
    const Eigen::VectorXd& first = runs.front();
    Eigen::VectorXd shift_sum = Eigen::VectorXd::Zero(dim);
    for (const auto& y : runs) {
      shift_sum += y - first;
      sum_sq += (y - first).cwiseAbs2();
    }
    const auto nt = static_cast<double>(trials);
    o.fiber_mean = first + shift_sum / nt;
    o.fiber_std = trials > 1 ? Eigen::VectorXd(((sum_sq - shift_sum.cwiseAbs2() / nt) / (nt - 1.0))
                                                   .cwiseMax(0.0)
                                                   .cwiseSqrt())
                             : Eigen::VectorXd::Zero(dim);
    o.correct_rate = static_cast<double>(correct) / static_cast<double>(trials);
    o.separated = one_sigma_separated(o.fiber_mean, o.fiber_std, o.true_class);
    theo.push_back(o.theoretic);
    fib.push_back(o.fiber_mean);
    rep.samples.push_back(std::move(o));
  }

  rep.theoretic = evaluate_outputs(columns(theo), test.labels);
  rep.fiber = evaluate_outputs(columns(fib), test.labels);
  rep.deviation = compare_outputs(theo, fib);
  double rate = 0.0;
  int separated = 0;
  for (std::size_t i = 0; i < rep.samples.size(); ++i) {
    rep.samples[i].argmax_agree = rep.deviation.agree[i];
    rep.samples[i].max_abs_deviation = rep.deviation.per_sample_max[i];
    rate += rep.samples[i].correct_rate;
    separated += rep.samples[i].separated ? 1 : 0;
  }
  const auto n = static_cast<double>(std::max<std::size_t>(rep.samples.size(), 1));
  rep.mean_correct_rate = rate / n;
  rep.separated_fraction = separated / n;
  return rep;
}

}  // namespace

RunReport run_pipeline(const ExperimentConfig& cfg) { return simulate_test_set(cfg, 1, "run-all"); }

RunReport noise_sweep(const ExperimentConfig& cfg, int trials) {
  if (trials < 2) throw InvalidArgument("noise sweep needs at least two trials");
  return simulate_test_set(cfg, trials, "noise-sweep");
}

}  // namespace fibernn
