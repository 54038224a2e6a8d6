#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "fibernn/error.hpp"
#include "fibernn/experiment.hpp"
#include "fibernn/io.hpp"
#include "fibernn/random.hpp"

namespace fs = std::filesystem;
using namespace fibernn;
using io::json;

namespace {

struct Common {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::optional<int> trials;
  std::string noise;  // "", "on" or "off"
  std::string readout;
  bool no_timestamp = false;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--config", c.config_path, "JSON config file")->check(CLI::ExistingFile);
  app->add_option("--seed", c.seed, "Seed applied to dataset, initialization and noise");
  app->add_option("--out", c.out, "Output directory");
  app->add_option("--trials", c.trials, "Monte Carlo trials per test sample")
      ->check(CLI::PositiveNumber);
  app->add_option("--noise", c.noise, "Amplifier and detector noise")
      ->check(CLI::IsMember({"on", "off"}));
  app->add_option("--readout", c.readout, "Readout mode")
      ->check(CLI::IsMember({"coherent", "gated"}));
  app->add_flag("--no-timestamp", c.no_timestamp, "Omit the generation time from reports");
}

ExperimentConfig resolve(const Common& c) {
  ExperimentConfig cfg;
  if (!c.config_path.empty()) cfg = io::load_config(c.config_path);
  if (c.seed) set_seed(cfg, *c.seed);
  if (!c.out.empty()) cfg.output_dir = c.out;
  if (c.trials) cfg.monte_carlo_trials = *c.trials;
  if (!c.noise.empty()) set_noise(cfg.physics, c.noise == "on");
  if (!c.readout.empty()) cfg.physics.readout.mode = parse_readout_mode(c.readout);
  return cfg;
}

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

void print_summary(const RunReport& r) {
  std::cout << r.kind << ": " << r.samples.size() << " test samples, " << r.trials
            << " trial(s), noise " << (r.noise ? "on" : "off") << '\n'
            << "  train loss " << r.train_final_loss << ", train accuracy " << r.train_accuracy << '\n'
            << "  theoretic accuracy " << r.theoretic.accuracy << ", fiber accuracy "
            << r.fiber.accuracy << '\n'
            << "  argmax agreement " << r.deviation.agreements << '/' << r.samples.size()
            << ", max |deviation| " << r.deviation.max << '\n';
  if (r.trials > 1) {
    std::cout << "  mean correct rate " << r.mean_correct_rate << ", one-sigma separated "
              << r.separated_fraction << '\n';
  }
  for (const auto& w : r.warnings) std::cerr << "warning: " << w << '\n';
}

int cmd_dataset(const Common& c) {
  const ExperimentConfig cfg = resolve(c);
  const Dataset ds = stage("dataset", [&] { return build_dataset(cfg.dataset); });
  const fs::path dir = cfg.output_dir;
  io::write_json_file(io::to_json(ds), dir / "dataset.json");
  std::ofstream csv(dir / "dataset.csv");
  io::write_dataset_csv(ds, csv);
  std::cout << "dataset: " << ds.train.size() << " train, " << ds.test.size() << " test -> "
            << (dir / "dataset.json").string() << '\n';
  return 0;
}

int cmd_train(const Common& c, const std::string& dataset_path) {
  const ExperimentConfig cfg = resolve(c);
  stage("config", [&] { validate(cfg); });
  const Dataset ds = stage("dataset", [&] {
    return dataset_path.empty() ? build_dataset(cfg.dataset)
                                : io::dataset_from_json(io::read_json_file(dataset_path));
  });
  const TrainResult tr = stage("train", [&] {
    return train(init_network(cfg.layer_sizes, cfg.train.seed), make_batch(ds.train), cfg.train);
  });
  const fs::path out = fs::path(cfg.output_dir) / "model.json";
  io::write_json_file(io::model_json(tr.net, cfg.train, tr.loss_history), out);
  const Evaluation test = evaluate(tr.net, make_batch(ds.test));
  std::cout << "train: " << tr.loss_history.size() << " epochs, final loss " << tr.final_loss
            << ", test accuracy " << test.accuracy << " -> " << out.string() << '\n';
  return 0;
}

int cmd_map(const Common& c, const std::string& model_path, const std::string& dataset_path,
            int sample) {
  const ExperimentConfig cfg = resolve(c);
  const DenseNetwork net = stage("map", [&] { return io::network_from_json(io::read_json_file(model_path)); });
  const CollapsedModel model = stage("map", [&] { return collapse(net); });
  const fs::path dir = cfg.output_dir;
  io::write_json_file(io::to_json(model), dir / "collapsed.json");
  std::cout << "map: " << model.output_dim << "x" << model.input_dim + 1 << " effective matrix -> "
            << (dir / "collapsed.json").string() << '\n';
  if (!dataset_path.empty()) {
    const Dataset ds = stage("dataset", [&] { return io::dataset_from_json(io::read_json_file(dataset_path)); });
    if (sample < 0 || static_cast<std::size_t>(sample) >= ds.test.size()) {
      throw StageError("map", "sample index out of range");
    }
    const PulseSchedule s = stage("map", [&] {
      return build_schedule(model, sample_input(ds.test[static_cast<std::size_t>(sample)]));
    });
    io::write_json_file(io::to_json(s), dir / "schedule.json");
    std::cout << "  schedule for test sample " << sample << ": " << s.groups.size() << " groups, scale "
              << s.scale << '\n';
  }
  return 0;
}

int cmd_simulate(const Common& c, int sample, int group, std::size_t stride, bool spectra) {
  const ExperimentConfig cfg = resolve(c);
  const PreparedModel pm = prepare_model(cfg);
  if (sample < 0 || static_cast<std::size_t>(sample) >= pm.dataset.test.size()) {
    throw StageError("config", "sample index out of range");
  }
  const Eigen::VectorXd x = sample_input(pm.dataset.test[static_cast<std::size_t>(sample)]);
  const PulseSchedule schedule = stage("map", [&] { return build_schedule(pm.collapsed, x); });
  if (group < 0 || static_cast<std::size_t>(group) >= schedule.groups.size()) {
    throw StageError("config", "group index out of range");
  }
  const fs::path dir = fs::path(cfg.output_dir) / "traces";
  fs::create_directories(dir);

  const FiberSimulator sim = stage("fiber-sim", [&] { return FiberSimulator(cfg.physics); });
  const auto sink = [&](int g, int pulse, TraceStage st, const OpticalField* field,
                        const PhotocurrentTrace* trace) {
    if (g != group) return;
    const std::string base = "trace_g" + std::to_string(g) + "_p" + std::to_string(pulse) + "_" +
                             std::string(trace_stage_name(st));
    std::ofstream os(dir / (base + ".csv"));
    if (field) {
      io::write_trace_csv(*field, os, stride);
      if (spectra) {
        std::ofstream sp(dir / (base + "_spectrum.csv"));
        io::write_spectrum_csv(*field, sp, stride);
      }
    } else if (trace) {
      io::write_trace_csv(*trace, os, stride);
    }
  };
  const std::uint64_t seed = derive_seed(cfg.noise_seed, {static_cast<std::uint64_t>(sample), 0});
  const ScheduleReadouts r = sim.run(schedule, seed, sink);
  const Eigen::VectorXd y = stage("fiber-sim", [&] { return combine_schedule(schedule, r); });
  const Eigen::VectorXd oracle = schedule_oracle(schedule);

  json j;
  j["sample"] = sample;
  j["group"] = group;
  j["schedule"] = io::to_json(schedule);
  const auto& g = r.groups[static_cast<std::size_t>(group)];
  j["readouts"] = {{"products", g.products}, {"reference", g.reference}};
  j["fiber_outputs"] = std::vector<double>(y.data(), y.data() + y.size());
  j["exact_outputs"] = std::vector<double>(oracle.data(), oracle.data() + oracle.size());
  j["warnings"] = r.warnings;
  io::write_json_file(j, fs::path(cfg.output_dir) / "simulate.json");
  std::cout << "simulate: sample " << sample << ", group " << group << ", traces in " << dir.string()
            << '\n';
  for (Eigen::Index k = 0; k < y.size(); ++k) {
    std::cout << "  output " << k << ": fiber " << y(k) << ", exact " << oracle(k) << '\n';
  }
  return 0;
}

int cmd_run_all(const Common& c) {
  const ExperimentConfig cfg = resolve(c);
  const RunReport r = run_pipeline(cfg);
  io::write_report_files(r, cfg.output_dir, !c.no_timestamp);
  print_summary(r);
  return 0;
}

int cmd_noise_sweep(const Common& c) {
  ExperimentConfig cfg = resolve(c);
  if (c.noise.empty()) set_noise(cfg.physics, true);
  const RunReport r = noise_sweep(cfg, cfg.monte_carlo_trials);
  io::write_report_files(r, cfg.output_dir, !c.no_timestamp);
  print_summary(r);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optical dense-network inference on a dispersive fiber ring"};
  app.require_subcommand(1);
  Common common;

  auto* ds = app.add_subcommand("dataset", "Generate the modulation-format dataset");
  add_common(ds, common);

  std::string dataset_path;
  auto* tr = app.add_subcommand("train", "Train the dense network");
  add_common(tr, common);
  tr->add_option("--dataset", dataset_path, "Dataset JSON (built from the config when absent)")
      ->check(CLI::ExistingFile);

  std::string model_path;
  int sample = 0;
  auto* mp = app.add_subcommand("map", "Collapse a trained model and build a pulse schedule");
  add_common(mp, common);
  mp->add_option("--model", model_path, "Model JSON")->required()->check(CLI::ExistingFile);
  mp->add_option("--dataset", dataset_path, "Dataset JSON for the schedule")->check(CLI::ExistingFile);
  mp->add_option("--sample", sample, "Test sample index for the schedule");

  int group = 0;
  std::size_t stride = 16;
  bool spectra = false;
  auto* sim = app.add_subcommand("simulate", "Trace every stage of one pulse group");
  add_common(sim, common);
  sim->add_option("--sample", sample, "Test sample index");
  sim->add_option("--group", group, "Output group to trace");
  sim->add_option("--stride", stride, "Write every n-th sample")->check(CLI::PositiveNumber);
  sim->add_flag("--spectra", spectra, "Also write optical spectra");

  auto* run = app.add_subcommand("run-all", "Train, map and compare fiber and software outputs");
  add_common(run, common);

  auto* sweep = app.add_subcommand("noise-sweep", "Monte Carlo trials with noise");
  add_common(sweep, common);

  CLI11_PARSE(app, argc, argv);

  try {
    if (ds->parsed()) return cmd_dataset(common);
    if (tr->parsed()) return cmd_train(common, dataset_path);
    if (mp->parsed()) return cmd_map(common, model_path, dataset_path, sample);
    if (sim->parsed()) return cmd_simulate(common, sample, group, stride, spectra);
    if (run->parsed()) return cmd_run_all(common);
    if (sweep->parsed()) return cmd_noise_sweep(common);
  } catch (const StageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: io: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
