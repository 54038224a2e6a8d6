#include <cmath>
#include <limits>

#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fibernn/dataset.hpp"
#include "fibernn/dense_net.hpp"
#include "fibernn/error.hpp"
#include "fibernn/experiment.hpp"
#include "fibernn/fiber_sim.hpp"
#include "fibernn/io.hpp"
#include "fibernn/weight_mapper.hpp"

namespace py = pybind11;
using namespace fibernn;
using json = io::json;

namespace {

py::object to_py(const json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

json from_py(const py::handle& obj) {
  if (obj.is_none()) return json::object();
  const std::string text = py::str(py::module_::import("json").attr("dumps")(obj));
  return json::parse(text);
}

ExperimentConfig config_from(const py::object& cfg) { return io::config_from_json(from_py(cfg)); }

PhysicsConfig physics_from(const py::object& p) { return io::physics_from_json(from_py(p)); }

}  // namespace

PYBIND11_MODULE(fibernn, m) {
  m.doc() = "Modulation-format classifier with a simulated dispersive-fiber matrix multiplier";

  auto& base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<NumericError>(m, "NumericError", base.ptr());
  py::register_exception<DegenerateFeature>(m, "DegenerateFeature", base.ptr());
  py::register_exception<NotCollapsible>(m, "NotCollapsible", base.ptr());
  py::register_exception<CalibrationError>(m, "CalibrationError", base.ptr());
  py::register_exception<AliasingError>(m, "AliasingError", base.ptr());
  py::register_exception<EmptyReadout>(m, "EmptyReadout", base.ptr());
  py::register_exception<StageError>(m, "StageError", base.ptr());

  // Dataset.
  m.def(
      "synthesize_waveform",
      [](const std::string& format, int n_symbols, double snr_db, std::uint64_t seed) {
        const SymbolWaveform w = synthesize_waveform(parse_format(format), n_symbols, snr_db, seed);
        return py::array_t<std::complex<double>>(static_cast<py::ssize_t>(w.samples.size()), w.samples.data());
      },
      py::arg("format"), py::arg("n_symbols") = 2048,
      py::arg("snr_db") = std::numeric_limits<double>::infinity(), py::arg("seed") = 0);
  m.def(
      "extract_features",
      [](py::array_t<std::complex<double>, py::array::c_style | py::array::forcecast> samples) {
        const auto f = extract_features(std::span<const std::complex<double>>(
            samples.data(), static_cast<std::size_t>(samples.size())));
        py::dict d;
        const auto a = f.to_array();
        for (int k = 0; k < kNumFeatures; ++k) d[py::str(std::string(kFeatureNames[k]))] = a[k];
        return d;
      },
      py::arg("samples"));
  m.def(
      "build_dataset",
      [](int per_class, std::uint64_t seed, double snr_min_db, double snr_max_db, int n_symbols) {
        DatasetParams p;
        p.per_class = per_class;
        p.seed = seed;
        p.snr_min_db = snr_min_db;
        p.snr_max_db = snr_max_db;
        p.n_symbols = n_symbols;
        return to_py(io::to_json(build_dataset(p)));
      },
      py::arg("per_class") = 50, py::arg("seed") = 0, py::arg("snr_min_db") = 15.0,
      py::arg("snr_max_db") = 25.0, py::arg("n_symbols") = 2048);

  // Network.
  py::class_<DenseNetwork>(m, "DenseNetwork")
      .def(py::init([](const std::vector<int>& sizes, std::uint64_t seed, const std::string& activation) {
             return init_network(sizes, seed, parse_activation(activation));
           }),
           py::arg("layer_sizes"), py::arg("seed") = 0, py::arg("activation") = "purelin")
      .def_readonly("layer_sizes", &DenseNetwork::layer_sizes)
      .def_readwrite("weights", &DenseNetwork::weights)
      .def_readwrite("biases", &DenseNetwork::biases)
      .def_property_readonly("activations",
                             [](const DenseNetwork& n) {
                               std::vector<std::string> out;
                               for (auto a : n.activations) out.emplace_back(activation_name(a));
                               return out;
                             })
      .def("forward", [](const DenseNetwork& n, const Eigen::VectorXd& x) { return forward(n, x); })
      .def("forward_batch", [](const DenseNetwork& n, const Eigen::MatrixXd& x) { return forward_batch(n, x); },
           "Column-per-sample inputs.")
      .def("gradients",
           [](const DenseNetwork& n, const Eigen::MatrixXd& inputs, const Eigen::MatrixXd& labels,
              const std::string& kind) {
             const Gradients g = grad(n, Batch{inputs, labels}, parse_loss(kind));
             return py::make_tuple(g.weights, g.biases);
           },
           py::arg("inputs"), py::arg("labels"), py::arg("loss") = "nmse")
      .def("to_json", [](const DenseNetwork& n) { return to_py(io::to_json(n)); })
      .def_static("from_json", [](const py::object& j) { return io::network_from_json(from_py(j)); });

  m.def(
      "loss",
      [](const Eigen::MatrixXd& preds, const Eigen::MatrixXd& labels, const std::string& kind) {
        return loss(preds, labels, parse_loss(kind));
      },
      py::arg("preds"), py::arg("labels"), py::arg("kind") = "nmse");
  m.def(
      "train",
      [](DenseNetwork net, const Eigen::MatrixXd& inputs, const Eigen::MatrixXd& labels, double learning_rate,
         int max_epochs, const std::string& kind, double target_loss) {
        TrainConfig cfg;
        cfg.learning_rate = learning_rate;
        cfg.max_epochs = max_epochs;
        cfg.loss_kind = parse_loss(kind);
        cfg.target_loss = target_loss;
        TrainResult r = train(std::move(net), Batch{inputs, labels}, cfg);
        return py::make_tuple(std::move(r.net), r.loss_history);
      },
      py::arg("net"), py::arg("inputs"), py::arg("labels"), py::arg("learning_rate") = 1e-3,
      py::arg("max_epochs") = 2000, py::arg("loss") = "nmse", py::arg("target_loss") = 0.0,
      "Full-batch ADAM; returns (trained network, loss history).");

  // Weight mapping.
  m.def("collapse", [](const DenseNetwork& n) { return collapse(n).effective; },
        "Single augmented matrix [W | b] of a linear network.");
  m.def("sign_separate", [](const Eigen::MatrixXd& w) {
    const SignSeparated s = sign_separate(w);
    return py::make_tuple(s.plus, s.minus);
  });
  m.def("sign_separated_products", [](const Eigen::MatrixXd& w, const Eigen::VectorXd& x) {
    const auto p = sign_separated_products(w, x);
    return std::vector<Eigen::VectorXd>(p.begin(), p.end());
  });
  m.def("recombine", [](const std::vector<Eigen::VectorXd>& p) {
    if (p.size() != kProductKinds) throw InvalidArgument("recombine needs four products");
    return recombine({p[0], p[1], p[2], p[3]});
  });
  m.def(
      "build_schedule",
      [](const Eigen::MatrixXd& effective, const Eigen::VectorXd& x) {
        CollapsedModel cm;
        cm.effective = effective;
        cm.output_dim = static_cast<int>(effective.rows());
        cm.input_dim = static_cast<int>(effective.cols()) - 1;
        return to_py(io::to_json(build_schedule(cm, x)));
      },
      py::arg("effective"), py::arg("x"));

  // Fiber simulation.
  m.def("default_physics", [] { return to_py(io::to_json(default_physics())); });
  m.def(
      "simulate_pulse",
      [](const std::vector<double>& segments, const py::object& physics, std::uint64_t seed) {
        const FiberSimulator sim(physics_from(physics));
        return sim.simulate_pulse(segments, seed);
      },
      py::arg("segments"), py::arg("physics") = py::none(), py::arg("seed") = 0,
      "Readout of one modulated pulse.");
  m.def(
      "run_schedule",
      [](const py::object& schedule, const py::object& physics, std::uint64_t seed) {
        const PulseSchedule s = io::schedule_from_json(from_py(schedule));
        const ScheduleReadouts r = run_schedule(s, physics_from(physics), seed);
        py::list groups;
        for (const auto& g : r.groups) {
          py::dict d;
          d["products"] = std::vector<double>(g.products.begin(), g.products.end());
          d["reference"] = g.reference;
          groups.append(d);
        }
        py::dict out;
        out["groups"] = groups;
        out["outputs"] = combine_schedule(s, r);
        out["warnings"] = r.warnings;
        return out;
      },
      py::arg("schedule"), py::arg("physics") = py::none(), py::arg("seed") = 0);

  // Experiment.
  m.def("default_config", [] { return to_py(io::to_json(ExperimentConfig{})); });
  m.def(
      "run_pipeline",
      [](const py::object& config) {
        const ExperimentConfig cfg = config_from(config);
        RunReport r;
        {
          py::gil_scoped_release release;
          r = run_pipeline(cfg);
        }
        return to_py(io::to_json(r, false));
      },
      py::arg("config") = py::none(), "Noiseless end-to-end run; returns the report as a dict.");
  m.def(
      "noise_sweep",
      [](const py::object& config, int trials, bool noise) {
        ExperimentConfig cfg = config_from(config);
        set_noise(cfg.physics, noise);
        RunReport r;
        {
          py::gil_scoped_release release;
          r = noise_sweep(cfg, trials);
        }
        return to_py(io::to_json(r, false));
      },
      py::arg("config") = py::none(), py::arg("trials") = 100, py::arg("noise") = true,
      "Monte Carlo trials per test sample with amplifier and detector noise.");
}
