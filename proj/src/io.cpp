#include "fibernn/io.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>

#include "fibernn/error.hpp"
#include "fibernn/fft.hpp"
#include "fibernn/random.hpp"

namespace fibernn::io {

namespace {

template <std::size_t N>
json array_json(const std::array<double, N>& a) {
  return json(std::vector<double>(a.begin(), a.end()));
}

template <std::size_t N>
std::array<double, N> array_from(const json& j, const char* what) {
  if (!j.is_array() || j.size() != N) {
    throw InvalidArgument(std::string(what) + " must be an array of " + std::to_string(N));
  }
  std::array<double, N> a{};
  for (std::size_t i = 0; i < N; ++i) a[i] = j[i].get<double>();
  return a;
}

json vector_json(const Eigen::VectorXd& v) {
  return json(std::vector<double>(v.data(), v.data() + v.size()));
}

json matrix_rows_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) rows.push_back(vector_json(m.row(r).transpose()));
  return rows;
}

json sample_json(const Sample& s) {
  json j;
  j["features"] = array_json(s.features);
  j["label"] = array_json(s.label);
  j["class_name"] = std::string(format_name(s.format));
  j["snr_db"] = s.snr_db;
  j["seed"] = s.seed;
  j["raw_features"] = array_json(s.raw.to_array());
  return j;
}

Sample sample_from(const json& j) {
  Sample s;
  s.features = array_from<kNumFeatures>(j.at("features"), "features");
  s.label = array_from<kNumClasses>(j.at("label"), "label");
  s.format = parse_format(j.at("class_name").get<std::string>());
  s.snr_db = j.at("snr_db").get<double>();
  s.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("raw_features")) {
    s.raw = FeatureVector::from_array(array_from<kNumFeatures>(j["raw_features"], "raw_features"));
  }
  return s;
}

std::string synthesis_name(PulseSynthesis s) {
  return s == PulseSynthesis::Direct ? "direct" : "propagated";
}

PulseSynthesis parse_synthesis(const std::string& s) {
  if (s == "direct") return PulseSynthesis::Direct;
  if (s == "propagated") return PulseSynthesis::Propagated;
  throw InvalidArgument("unknown pulse synthesis '" + s + "'");
}

json span_json(const FiberSpan& s) {
  return json{{"role", s.role == FiberRole::SMF ? "SMF" : "DCF"},
              {"beta2_s2_per_m", s.beta2},
              {"length_m", s.length},
              {"gdd_s2", s.gdd()}};
}

FiberSpan span_from(const json& j, FiberSpan base) {
  base.beta2 = j.value("beta2_s2_per_m", base.beta2);
  base.length = j.value("length_m", base.length);
  if (j.contains("role")) base.role = j["role"].get<std::string>() == "DCF" ? FiberRole::DCF : FiberRole::SMF;
  return base;
}

std::string timestamp_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

std::string output_label(std::size_t k, std::size_t dim) {
  if (dim == kNumClasses) return std::string(format_name(static_cast<ModulationFormat>(k)));
  return "out" + std::to_string(k);
}

json evaluation_json(const Evaluation& e) {
  return json{{"accuracy", e.accuracy}, {"confusion", e.confusion}, {"predicted", e.predicted}};
}

}  // namespace

json to_json(const Dataset& ds) {
  json j;
  j["format_version"] = kFormatVersion;
  j["feature_names"] = std::vector<std::string>(kFeatureNames.begin(), kFeatureNames.end());
  j["normalizer"] = {{"min", array_json(ds.normalizer.min)}, {"max", array_json(ds.normalizer.max)}};
  j["train"] = json::array();
  for (const auto& s : ds.train) j["train"].push_back(sample_json(s));
  j["test"] = json::array();
  for (const auto& s : ds.test) j["test"].push_back(sample_json(s));
  return j;
}

Dataset dataset_from_json(const json& j) {
  if (j.value("format_version", 0) != kFormatVersion) {
    throw InvalidArgument("unsupported dataset format_version");
  }
  Dataset ds;
  ds.normalizer.min = array_from<kNumFeatures>(j.at("normalizer").at("min"), "normalizer.min");
  ds.normalizer.max = array_from<kNumFeatures>(j.at("normalizer").at("max"), "normalizer.max");
  for (const auto& s : j.at("train")) ds.train.push_back(sample_from(s));
  for (const auto& s : j.at("test")) ds.test.push_back(sample_from(s));
  return ds;
}

void write_dataset_csv(const Dataset& ds, std::ostream& os) {
  os << "split,class_name,snr_db,seed";
  for (auto n : kFeatureNames) os << ',' << n;
  for (auto n : kFeatureNames) os << ",raw_" << n;
  os << '\n' << std::setprecision(17);
  auto rows = [&](const std::vector<Sample>& v, const char* split) {
    for (const auto& s : v) {
      os << split << ',' << format_name(s.format) << ',' << s.snr_db << ',' << s.seed;
      for (double f : s.features) os << ',' << f;
      for (double f : s.raw.to_array()) os << ',' << f;
      os << '\n';
    }
  };
  rows(ds.train, "train");
  rows(ds.test, "test");
}

json to_json(const DenseNetwork& net) {
  json j;
  j["format_version"] = kFormatVersion;
  j["layer_sizes"] = net.layer_sizes;
  j["weights"] = json::array();
  j["biases"] = json::array();
  j["activations"] = json::array();
  for (std::size_t k = 0; k < net.layer_count(); ++k) {
    // Row-major flattening.
    std::vector<double> w;
    for (Eigen::Index r = 0; r < net.weights[k].rows(); ++r) {
      for (Eigen::Index c = 0; c < net.weights[k].cols(); ++c) w.push_back(net.weights[k](r, c));
    }
    j["weights"].push_back(w);
    j["biases"].push_back(vector_json(net.biases[k]));
    j["activations"].push_back(std::string(activation_name(net.activations[k])));
  }
  return j;
}

json model_json(const DenseNetwork& net, const TrainConfig& cfg,
                const std::vector<double>& loss_history, std::size_t tail) {
  json j = to_json(net);
  const std::size_t start = loss_history.size() > tail ? loss_history.size() - tail : 0;
  j["training"] = {{"seed", cfg.seed},
                   {"learning_rate", cfg.learning_rate},
                   {"loss", std::string(loss_name(cfg.loss_kind))},
                   {"max_epochs", cfg.max_epochs},
                   {"target_loss", cfg.target_loss},
                   {"epochs_run", loss_history.size()},
                   {"loss_history_tail",
                    std::vector<double>(loss_history.begin() + static_cast<long>(start),
                                        loss_history.end())}};
  return j;
}

DenseNetwork network_from_json(const json& j) {
  DenseNetwork net;
  net.layer_sizes = j.at("layer_sizes").get<std::vector<int>>();
  const auto& ws = j.at("weights");
  const auto& bs = j.at("biases");
  if (net.layer_sizes.size() < 2 || ws.size() != net.layer_sizes.size() - 1 ||
      bs.size() != ws.size()) {
    throw InvalidArgument("model layer count does not match layer_sizes");
  }
  for (std::size_t k = 0; k < ws.size(); ++k) {
    const int rows = net.layer_sizes[k + 1];
    const int cols = net.layer_sizes[k];
    const auto flat = ws[k].get<std::vector<double>>();
    const auto b = bs[k].get<std::vector<double>>();
    if (flat.size() != static_cast<std::size_t>(rows * cols) || b.size() != static_cast<std::size_t>(rows)) {
      throw InvalidArgument("layer " + std::to_string(k) + " array sizes do not match layer_sizes");
    }
    Eigen::MatrixXd w(rows, cols);
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < cols; ++c) w(r, c) = flat[static_cast<std::size_t>(r * cols + c)];
    }
    net.weights.push_back(std::move(w));
    net.biases.push_back(Eigen::Map<const Eigen::VectorXd>(b.data(), rows));
    net.activations.push_back(j.contains("activations")
                                  ? parse_activation(j["activations"][k].get<std::string>())
                                  : Activation::Purelin);
  }
  return net;
}

json to_json(const CollapsedModel& m) {
  return json{{"input_dim", m.input_dim},
              {"output_dim", m.output_dim},
              {"effective", matrix_rows_json(m.effective)}};
}

json to_json(const PulseSchedule& s) {
  json j;
  j["format_version"] = kFormatVersion;
  j["segment_count"] = s.segment_count;
  j["scale"] = s.scale;
  j["groups"] = json::array();
  for (const auto& g : s.groups) {
    json pulses = json::array();
    for (int k = 0; k < kProductKinds; ++k) {
      pulses.push_back({{"kind", std::string(product_name(static_cast<ProductKind>(k)))},
                        {"reference", false},
                        {"segments", g.products[static_cast<std::size_t>(k)]}});
    }
    pulses.push_back({{"kind", "reference"}, {"reference", true}, {"segments", g.reference}});
    j["groups"].push_back({{"output_index", g.output_index}, {"pulses", pulses}});
  }
  return j;
}

PulseSchedule schedule_from_json(const json& j) {
  PulseSchedule s;
  s.segment_count = j.at("segment_count").get<int>();
  s.scale = j.value("scale", 1.0);
  for (const auto& gj : j.at("groups")) {
    PulseGroup g;
    g.output_index = gj.at("output_index").get<int>();
    int k = 0;
    for (const auto& p : gj.at("pulses")) {
      auto seg = p.at("segments").get<std::vector<double>>();
      if (seg.size() != static_cast<std::size_t>(s.segment_count)) {
        throw InvalidArgument("pulse segment count does not match segment_count");
      }
      if (p.value("reference", false)) {
        g.reference = std::move(seg);
      } else {
        if (k >= kProductKinds) throw InvalidArgument("too many modulated pulses in a group");
        g.products[static_cast<std::size_t>(k++)] = std::move(seg);
      }
    }
    if (k != kProductKinds || g.reference.empty()) {
      throw InvalidArgument("each group needs four modulated pulses and one reference");
    }
    s.groups.push_back(std::move(g));
  }
  return s;
}

json to_json(const PhysicsConfig& p) {
  json j;
  j["grid"] = {{"n_samples", p.grid.n_samples},
               {"window_s", p.grid.window},
               {"center_wavelength_m", p.grid.center_wavelength}};
  j["pulse"] = {{"width_s", p.pulse.width},
                {"flatness_order", p.pulse.flatness_order},
                {"peak_power_w", p.pulse.peak_power},
                {"synthesis", synthesis_name(p.pulse.synthesis)}};
  j["smf"] = span_json(p.smf);
  j["dcf"] = span_json(p.dcf);
  j["modulator"] = {{"window_start_s", p.mask_window_start},
                    {"window_width_s", p.mask_window_width},
                    {"edge_time_s", p.modulator_edge_time}};
  j["amplifier"] = {{"enabled", p.amplifier.enabled},
                    {"gain_db", p.amplifier.gain_db},
                    {"noise_figure_db", p.amplifier.noise_figure_db},
                    {"optical_bandwidth_hz", p.amplifier.optical_bandwidth},
                    {"noise_enabled", p.amplifier.noise_enabled}};
  j["detector"] = {{"responsivity_a_per_w", p.detector.responsivity},
                   {"bandwidth_hz", p.detector.effective_bandwidth(p.grid)},
                   {"temperature_k", p.detector.temperature},
                   {"load_resistance_ohm", p.detector.load_resistance},
                   {"noise_enabled", p.detector.noise_enabled}};
  j["readout"] = {{"mode", std::string(readout_mode_name(p.readout.mode))},
                  {"gate_width_s", p.readout.gate_width},
                  {"search_halfwidth_s", p.readout.search_halfwidth}};
  j["activation_curve"] = {{"inputs", p.activation.inputs}, {"outputs", p.activation.outputs}};
  return j;
}

PhysicsConfig physics_from_json(const json& j, PhysicsConfig p) {
  if (j.contains("grid")) {
    const auto& g = j["grid"];
    p.grid.n_samples = g.value("n_samples", p.grid.n_samples);
    p.grid.window = g.value("window_s", p.grid.window);
    p.grid.center_wavelength = g.value("center_wavelength_m", p.grid.center_wavelength);
  }
  if (j.contains("pulse")) {
    const auto& g = j["pulse"];
    p.pulse.width = g.value("width_s", p.pulse.width);
    p.pulse.flatness_order = g.value("flatness_order", p.pulse.flatness_order);
    p.pulse.peak_power = g.value("peak_power_w", p.pulse.peak_power);
    if (g.contains("synthesis")) p.pulse.synthesis = parse_synthesis(g["synthesis"].get<std::string>());
  }
  const bool smf_given = j.contains("smf");
  if (smf_given) p.smf = span_from(j["smf"], p.smf);
  if (j.contains("dcf")) {
    p.dcf = span_from(j["dcf"], p.dcf);
    if (j["dcf"].value("matched", false)) p.dcf = matched_dcf(p.smf, p.dcf.beta2);
  } else if (smf_given) {
    p.dcf = matched_dcf(p.smf, p.dcf.beta2);
  }
  if (j.contains("modulator")) {
    const auto& g = j["modulator"];
    p.mask_window_start = g.value("window_start_s", p.mask_window_start);
    p.mask_window_width = g.value("window_width_s", p.mask_window_width);
    p.modulator_edge_time = g.value("edge_time_s", p.modulator_edge_time);
  }
  if (j.contains("amplifier")) {
    const auto& g = j["amplifier"];
    p.amplifier.enabled = g.value("enabled", p.amplifier.enabled);
    p.amplifier.gain_db = g.value("gain_db", p.amplifier.gain_db);
    p.amplifier.noise_figure_db = g.value("noise_figure_db", p.amplifier.noise_figure_db);
    p.amplifier.optical_bandwidth = g.value("optical_bandwidth_hz", p.amplifier.optical_bandwidth);
    p.amplifier.noise_enabled = g.value("noise_enabled", p.amplifier.noise_enabled);
  }
  if (j.contains("detector")) {
    const auto& g = j["detector"];
    p.detector.responsivity = g.value("responsivity_a_per_w", p.detector.responsivity);
    p.detector.bandwidth = g.value("bandwidth_hz", p.detector.bandwidth);
    p.detector.temperature = g.value("temperature_k", p.detector.temperature);
    p.detector.load_resistance = g.value("load_resistance_ohm", p.detector.load_resistance);
    p.detector.noise_enabled = g.value("noise_enabled", p.detector.noise_enabled);
  }
  if (j.contains("readout")) {
    const auto& g = j["readout"];
    if (g.contains("mode")) p.readout.mode = parse_readout_mode(g["mode"].get<std::string>());
    p.readout.gate_width = g.value("gate_width_s", p.readout.gate_width);
    p.readout.search_halfwidth = g.value("search_halfwidth_s", p.readout.search_halfwidth);
  }
  if (j.contains("activation_curve")) {
    const auto& g = j["activation_curve"];
    p.activation.inputs = g.value("inputs", std::vector<double>{});
    p.activation.outputs = g.value("outputs", std::vector<double>{});
  }
  return p;
}

json to_json(const ExperimentConfig& c) {
  json j;
  j["dataset"] = {{"per_class", c.dataset.per_class},
                  {"snr_range_db", {c.dataset.snr_min_db, c.dataset.snr_max_db}},
                  {"seed", c.dataset.seed},
                  {"n_symbols", c.dataset.n_symbols}};
  j["network"] = {{"layer_sizes", c.layer_sizes}};
  j["train"] = {{"learning_rate", c.train.learning_rate},
                {"loss", std::string(loss_name(c.train.loss_kind))},
                {"max_epochs", c.train.max_epochs},
                {"target_loss", c.train.target_loss},
                {"seed", c.train.seed},
                {"optimizer", {{"name", "adam"}, {"beta1", 0.9}, {"beta2", 0.999}, {"epsilon", 1e-8}}},
                {"init", "uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)), zero bias"}};
  j["physics"] = to_json(c.physics);
  j["noise_seed"] = c.noise_seed;
  j["monte_carlo_trials"] = c.monte_carlo_trials;
  j["output_dir"] = c.output_dir;
  return j;
}

ExperimentConfig config_from_json(const json& j, ExperimentConfig c) {
  if (j.contains("seed")) set_seed(c, j["seed"].get<std::uint64_t>());
  if (j.contains("dataset")) {
    const auto& d = j["dataset"];
    c.dataset.per_class = d.value("per_class", c.dataset.per_class);
    if (d.contains("snr_range_db")) {
      const auto r = d["snr_range_db"].get<std::vector<double>>();
      if (r.size() != 2) throw InvalidArgument("dataset.snr_range_db needs two values");
      c.dataset.snr_min_db = r[0];
      c.dataset.snr_max_db = r[1];
    }
    c.dataset.seed = d.value("seed", c.dataset.seed);
    c.dataset.n_symbols = d.value("n_symbols", c.dataset.n_symbols);
  }
  if (j.contains("network")) {
    c.layer_sizes = j["network"].value("layer_sizes", c.layer_sizes);
  }
  if (j.contains("train")) {
    const auto& t = j["train"];
    c.train.learning_rate = t.value("learning_rate", c.train.learning_rate);
    if (t.contains("loss")) c.train.loss_kind = parse_loss(t["loss"].get<std::string>());
    c.train.max_epochs = t.value("max_epochs", c.train.max_epochs);
    c.train.target_loss = t.value("target_loss", c.train.target_loss);
    c.train.seed = t.value("seed", c.train.seed);
  }
  if (j.contains("physics")) c.physics = physics_from_json(j["physics"], c.physics);
  c.noise_seed = j.value("noise_seed", c.noise_seed);
  c.monte_carlo_trials = j.value("monte_carlo_trials", c.monte_carlo_trials);
  c.output_dir = j.value("output_dir", c.output_dir);
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  return config_from_json(read_json_file(path));
}

json to_json(const RunReport& r, bool with_timestamp) {
  json j;
  j["kind"] = r.kind;
  if (with_timestamp) j["generated_at"] = timestamp_now();
  j["seed_rule"] = kSeedRule;
  j["config"] = to_json(r.config);
  j["noise"] = r.noise;
  j["trials"] = r.trials;
  const std::size_t tail = std::min<std::size_t>(20, r.loss_history.size());
  j["training"] = {
      {"epochs_run", r.loss_history.size()},
      {"final_loss", r.train_final_loss},
      {"train_accuracy", r.train_accuracy},
      {"loss_history_tail",
       std::vector<double>(r.loss_history.end() - static_cast<long>(tail), r.loss_history.end())}};
  j["collapsed_model"] = matrix_rows_json(r.collapsed);
  j["theoretic"] = evaluation_json(r.theoretic);
  j["fiber"] = evaluation_json(r.fiber);
  j["fiber"]["mean_correct_rate"] = r.mean_correct_rate;
  j["fiber"]["separated_fraction"] = r.separated_fraction;
  j["deviation"] = {{"max_abs", r.deviation.max},
                    {"mean_of_sample_max", r.deviation.mean},
                    {"argmax_agreements", r.deviation.agreements},
                    {"samples", r.samples.size()}};
  j["normalization"] = "fiber outputs are gamma-calibrated per group and multiplied by the schedule scale";
  j["samples"] = json::array();
  for (const auto& s : r.samples) {
    j["samples"].push_back({{"sample_id", s.sample_id},
                            {"true_class", std::string(format_name(static_cast<ModulationFormat>(s.true_class)))},
                            {"snr_db", s.snr_db},
                            {"theoretic", vector_json(s.theoretic)},
                            {"fiber_mean", vector_json(s.fiber_mean)},
                            {"fiber_std", vector_json(s.fiber_std)},
                            {"argmax_agree", s.argmax_agree},
                            {"max_abs_deviation", s.max_abs_deviation},
                            {"correct_rate", s.correct_rate},
                            {"one_sigma_separated", s.separated}});
  }
  j["thresholds"] = {
      {"note", "artifact-defined pass thresholds; no published numeric targets exist"},
      {"max_abs_deviation", 0.1},
      {"mean_correct_rate", 0.95},
      {"separated_fraction", 0.9}};
  j["warnings"] = r.warnings;
  return j;
}

void write_fig4_csv(const RunReport& r, std::ostream& os) {
  const std::size_t dim = r.samples.empty() ? 0 : static_cast<std::size_t>(r.samples[0].theoretic.size());
  os << "sample_id,true_class";
  for (std::size_t k = 0; k < dim; ++k) os << ",theoretic_" << output_label(k, dim);
  for (std::size_t k = 0; k < dim; ++k) os << ",fiber_" << output_label(k, dim);
  os << ",argmax_agree,max_abs_deviation\n" << std::setprecision(17);
  // Grouped by true class, one block per panel.
  for (int c = 0; c < kNumClasses; ++c) {
    for (const auto& s : r.samples) {
      if (s.true_class != c) continue;
      os << s.sample_id << ',' << format_name(static_cast<ModulationFormat>(c));
      for (Eigen::Index k = 0; k < s.theoretic.size(); ++k) os << ',' << s.theoretic(k);
      for (Eigen::Index k = 0; k < s.fiber_mean.size(); ++k) os << ',' << s.fiber_mean(k);
      os << ',' << (s.argmax_agree ? 1 : 0) << ',' << s.max_abs_deviation << '\n';
    }
  }
}

void write_fig5_csv(const RunReport& r, std::ostream& os) {
  const std::size_t dim = r.samples.empty() ? 0 : static_cast<std::size_t>(r.samples[0].fiber_mean.size());
  os << "sample_id,true_class";
  for (std::size_t k = 0; k < dim; ++k) os << ",mean_" << output_label(k, dim);
  for (std::size_t k = 0; k < dim; ++k) os << ",std_" << output_label(k, dim);
  os << ",correct_rate\n" << std::setprecision(17);
  for (int c = 0; c < kNumClasses; ++c) {
    for (const auto& s : r.samples) {
      if (s.true_class != c) continue;
      os << s.sample_id << ',' << format_name(static_cast<ModulationFormat>(c));
      for (Eigen::Index k = 0; k < s.fiber_mean.size(); ++k) os << ',' << s.fiber_mean(k);
      for (Eigen::Index k = 0; k < s.fiber_std.size(); ++k) os << ',' << s.fiber_std(k);
      os << ',' << s.correct_rate << '\n';
    }
  }
}

void write_report_files(const RunReport& r, const std::filesystem::path& dir, bool with_timestamp) {
  std::filesystem::create_directories(dir);
  write_json_file(to_json(r, with_timestamp), dir / "report.json");
  if (r.kind == "noise-sweep") {
    std::ofstream os(dir / "errorbars_fig5.csv");
    write_fig5_csv(r, os);
  } else {
    std::ofstream os(dir / "outputs_fig4.csv");
    write_fig4_csv(r, os);
  }
}

void write_trace_csv(const OpticalField& f, std::ostream& os, std::size_t stride) {
  stride = std::max<std::size_t>(stride, 1);
  os << "time_s,real,imaginary,power_w\n" << std::setprecision(12);
  for (std::size_t i = 0; i < f.envelope.size(); i += stride) {
    const auto v = f.envelope[i];
    os << f.grid.time(i) << ',' << v.real() << ',' << v.imag() << ',' << std::norm(v) << '\n';
  }
}

void write_trace_csv(const PhotocurrentTrace& t, std::ostream& os, std::size_t stride) {
  stride = std::max<std::size_t>(stride, 1);
  // The photocurrent is real; the power column repeats it in amperes.
  os << "time_s,real,imaginary,power\n" << std::setprecision(12);
  for (std::size_t i = 0; i < t.current.size(); i += stride) {
    os << t.grid.time(i) << ',' << t.current[i] << ",0," << t.current[i] << '\n';
  }
}

void write_spectrum_csv(const OpticalField& f, std::ostream& os, std::size_t stride) {
  stride = std::max<std::size_t>(stride, 1);
  std::vector<std::complex<double>> spec = f.envelope;
  fft::forward(spec);
  const std::size_t n = spec.size();
  os << "frequency_offset_hz,psd\n" << std::setprecision(12);
  for (std::size_t m = 0; m < n; m += stride) {
    const std::size_t k = (m + n / 2) % n;
    os << f.grid.angular_frequency(k) / (2.0 * std::numbers::pi) << ',' << std::norm(spec[k]) << '\n';
  }
}

void write_json_file(const json& j, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path);
  if (!os) throw Error("cannot open " + path.string() + " for writing");
  os << j.dump(2) << '\n';
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw Error("cannot open " + path.string());
  try {
    return json::parse(is);
  } catch (const json::exception& e) {
    throw InvalidArgument(path.string() + ": " + e.what());
  }
}

}  // namespace fibernn::io
