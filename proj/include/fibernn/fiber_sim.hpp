#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "fibernn/random.hpp"
#include "fibernn/weight_mapper.hpp"

namespace fibernn {

namespace constants {
inline constexpr double kSpeedOfLight = 299792458.0;    // m/s
inline constexpr double kPlanck = 6.62607015e-34;       // J s
inline constexpr double kElementaryCharge = 1.602176634e-19;  // C
inline constexpr double kBoltzmann = 1.380649e-23;      // J/K
}  // namespace constants

// Uniform sampling of one pulse interval. Sample i sits at t = (i - n/2) dt,
// so t = 0 (the compression focus) is sample n/2.
struct TimeGrid {
  std::size_t n_samples = std::size_t{1} << 16;
  double window = 20e-9;               // s
  double center_wavelength = 1550e-9;  // m

  double dt() const { return window / static_cast<double>(n_samples); }
  double sample_rate() const { return static_cast<double>(n_samples) / window; }
  double nyquist() const { return 0.5 * sample_rate(); }
  double carrier_frequency() const { return constants::kSpeedOfLight / center_wavelength; }
  std::size_t center_index() const { return n_samples / 2; }
  double time(std::size_t i) const;
  // Baseband angular frequency of DFT bin k (standard fftfreq ordering).
  double angular_frequency(std::size_t k) const;
};

void validate(const TimeGrid& grid);

// Complex envelope in sqrt(W).
struct OpticalField {
  std::vector<std::complex<double>> envelope;
  TimeGrid grid;
  std::vector<std::string> warnings;

  double energy() const;  // J
};

enum class FiberRole { SMF, DCF };

struct FiberSpan {
  double beta2 = 0.0;   // s^2/m
  double length = 0.0;  // m
  FiberRole role = FiberRole::SMF;

  double gdd() const { return beta2 * length; }  // s^2
};

// A span of the given dispersion whose GDD cancels `span` exactly.
FiberSpan matched_dcf(const FiberSpan& span, double dcf_beta2);

enum class PulseSynthesis {
  Direct,      // super-Gaussian envelope with the stretched pulse's quadratic phase
  Propagated,  // transform-limited pulse with a super-Gaussian spectrum, dispersed numerically
};

// exp(-1/2 (t/T0)^(2m)) where `width` is the intensity FWHM.
double super_gaussian_t0(double width, int order);
// Half-width over which the intensity stays within `drop` of its peak.
double flat_halfwidth(double width, int order, double drop);

OpticalField generate_stretched_pulse(const TimeGrid& grid, double width, int flatness_order,
                                      double chirp_gdd, double peak_power = 1e-3,
                                      PulseSynthesis synthesis = PulseSynthesis::Direct);

// Fraction of spectral energy above 95% of the grid bandwidth.
inline constexpr double kAliasingEdge = 0.95;
inline constexpr double kAliasingTolerance = 1e-6;
double spectral_edge_fraction(const OpticalField& field);

// All-pass dispersion exp(+i gdd/2 w^2). Throws AliasingError when the input
// already reaches the edge of the grid.
OpticalField propagate(const OpticalField& field, const FiberSpan& span);

// Piecewise-constant field transmission tiling [start, start + width).
// edge_time > 0 replaces each step by a raised-cosine transition centered on
// the boundary; the integral of the profile is unchanged.
struct ModulationMask {
  std::vector<double> segment_values;
  double window_start = -4e-9;
  double window_width = 8e-9;
  double edge_time = 0.0;
};

std::vector<double> mask_profile(const TimeGrid& grid, const ModulationMask& mask);

// Intensity drop inside the mask window above which modulate() flags the result.
inline constexpr double kFlatRegionDrop = 0.01;

OpticalField modulate(const OpticalField& field, const ModulationMask& mask);

struct AmplifierParams {
  double gain_db = 20.0;
  double noise_figure_db = 4.0;
  double optical_bandwidth = 1e12;  // Hz, ASE filter passband
  bool enabled = true;
  bool noise_enabled = false;

  double gain() const;
  double n_sp() const;  // 10^(NF/10) / 2
};

OpticalField amplify(const OpticalField& field, const AmplifierParams& params, Rng& rng);

// Monotone transfer table of the reconfigurable attenuator; empty = identity.
struct ActivationCurve {
  std::vector<double> inputs;
  std::vector<double> outputs;

  bool is_identity() const { return inputs.empty(); }
};

struct CurveResult {
  double value = 0.0;
  bool clamped = false;
};

void validate(const ActivationCurve& curve);
CurveResult apply_activation_curve(double energy, const ActivationCurve& curve);

struct DetectorParams {
  double responsivity = 1.0;     // A/W
  double bandwidth = 0.0;        // Hz; 0 selects a quarter of the grid Nyquist
  double temperature = 290.0;    // K
  double load_resistance = 50.0; // ohm
  bool noise_enabled = false;

  double effective_bandwidth(const TimeGrid& grid) const;
};

struct PhotocurrentTrace {
  std::vector<double> current;  // A
  TimeGrid grid;
  double bandwidth = 0.0;
};

PhotocurrentTrace detect(const OpticalField& field, const DetectorParams& params, Rng& rng);

enum class ReadoutMode { CoherentSum, GatedPeakSqrt };

std::string_view readout_mode_name(ReadoutMode m);
ReadoutMode parse_readout_mode(std::string_view name);

struct ReadoutConfig {
  ReadoutMode mode = ReadoutMode::GatedPeakSqrt;
  double gate_width = 1e-12;         // s
  double search_halfwidth = 25e-12;  // s around the compression focus; <= 0 searches everything
};

// Coherent: field magnitude at the compressed peak, which equals the coherent
// sum of the modulated stretched field up to a constant. Gated: square root of
// the integral of the signal over a gate centered on the located peak.
double readout(const OpticalField& field, const ReadoutConfig& cfg);
double readout(const PhotocurrentTrace& trace, const ReadoutConfig& cfg);

struct PulseParams {
  double width = 12e-9;
  int flatness_order = 6;
  double peak_power = 1e-3;  // W, stretched pulse at the modulator
  PulseSynthesis synthesis = PulseSynthesis::Direct;
};

struct PhysicsConfig {
  TimeGrid grid;
  PulseParams pulse;
  FiberSpan smf{-21.7e-27, 460e3, FiberRole::SMF};
  FiberSpan dcf{127.5e-27, 21.7 * 460e3 / 127.5, FiberRole::DCF};
  double mask_window_start = -4e-9;
  double mask_window_width = 8e-9;
  double modulator_edge_time = 20e-12;
  AmplifierParams amplifier;
  DetectorParams detector;
  ReadoutConfig readout;
  ActivationCurve activation;
};

PhysicsConfig default_physics();
void validate(const PhysicsConfig& physics);
void set_noise(PhysicsConfig& physics, bool enabled);

struct GroupReadouts {
  std::array<double, kProductKinds> products{};
  double reference = 0.0;
};

struct ScheduleReadouts {
  std::vector<GroupReadouts> groups;
  std::vector<std::string> warnings;
};

enum class TraceStage { Stretched, Modulated, Amplified, Compressed, Detected };
std::string_view trace_stage_name(TraceStage s);

// Receives intermediate signals; exactly one of field / trace is non-null.
using TraceSink = std::function<void(int group, int pulse, TraceStage stage,
                                     const OpticalField* field, const PhotocurrentTrace* trace)>;

inline constexpr int kReferencePulse = kProductKinds;  // pulse index of the reference

// One pass of the computing ring per pulse: modulate the stretched pulse,
// amplify, compress in the DCF, detect, read out.
class FiberSimulator {
 public:
  explicit FiberSimulator(PhysicsConfig physics);

  const PhysicsConfig& physics() const { return physics_; }
  const OpticalField& stretched_pulse() const { return stretched_; }

  double simulate_pulse(const std::vector<double>& segment_values, std::uint64_t seed,
                        const TraceSink& sink = {}, int group = 0, int pulse = 0,
                        std::vector<std::string>* warnings = nullptr) const;

  ScheduleReadouts run(const PulseSchedule& schedule, std::uint64_t seed,
                       const TraceSink& sink = {}) const;

 private:
  PhysicsConfig physics_;
  OpticalField stretched_;
};

ScheduleReadouts run_schedule(const PulseSchedule& schedule, const PhysicsConfig& physics,
                              std::uint64_t seed, const TraceSink& sink = {});

// gamma-calibrated outputs of every group, multiplied by the schedule scale.
Eigen::VectorXd combine_schedule(const PulseSchedule& schedule, const ScheduleReadouts& readouts);

}  // namespace fibernn
