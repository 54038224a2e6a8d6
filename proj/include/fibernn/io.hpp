#pragma once

#include <filesystem>
#include <iosfwd>

#include <json.hpp>

#include "fibernn/dataset.hpp"
#include "fibernn/dense_net.hpp"
#include "fibernn/experiment.hpp"
#include "fibernn/fiber_sim.hpp"
#include "fibernn/weight_mapper.hpp"

namespace fibernn::io {

using json = nlohmann::ordered_json;

inline constexpr int kFormatVersion = 1;

json to_json(const Dataset& ds);
Dataset dataset_from_json(const json& j);
// Header row, then one row per sample (split, class, snr, seed, normalized and raw features).
void write_dataset_csv(const Dataset& ds, std::ostream& os);

json to_json(const DenseNetwork& net);
// Model plus training metadata (seed, loss kind, tail of the loss history).
json model_json(const DenseNetwork& net, const TrainConfig& cfg, const std::vector<double>& loss_history,
                std::size_t tail = 20);
DenseNetwork network_from_json(const json& j);

json to_json(const CollapsedModel& m);
json to_json(const PulseSchedule& s);
PulseSchedule schedule_from_json(const json& j);

json to_json(const PhysicsConfig& p);
PhysicsConfig physics_from_json(const json& j, PhysicsConfig base = default_physics());

// Every field is echoed, including defaults.
json to_json(const ExperimentConfig& cfg);
// Missing keys keep the values of `base`.
ExperimentConfig config_from_json(const json& j, ExperimentConfig base = {});
ExperimentConfig load_config(const std::filesystem::path& path);

json to_json(const RunReport& r, bool with_timestamp = true);
void write_fig4_csv(const RunReport& r, std::ostream& os);
void write_fig5_csv(const RunReport& r, std::ostream& os);
// report.json plus outputs_fig4.csv (run-all) or errorbars_fig5.csv (noise-sweep).
void write_report_files(const RunReport& r, const std::filesystem::path& dir,
                        bool with_timestamp = true);

// time, real, imaginary, power; every `stride`-th sample.
void write_trace_csv(const OpticalField& f, std::ostream& os, std::size_t stride = 1);
void write_trace_csv(const PhotocurrentTrace& t, std::ostream& os, std::size_t stride = 1);
// frequency offset (Hz), power spectral density (arbitrary units), fftshift order.
void write_spectrum_csv(const OpticalField& f, std::ostream& os, std::size_t stride = 1);

void write_json_file(const json& j, const std::filesystem::path& path);
json read_json_file(const std::filesystem::path& path);

}  // namespace fibernn::io
