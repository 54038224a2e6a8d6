#include "fibernn/fiber_sim.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>
#include <numbers>
#include <string>

#include "fibernn/error.hpp"
#include "fibernn/fft.hpp"

namespace fibernn {

namespace {

using cplx = std::complex<double>;

bool is_power_of_two(std::size_t n) { return n > 0 && (n & (n - 1)) == 0; }

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw InvalidArgument(std::string(name) + " must be positive and finite");
  }
}

// Signed DFT bin index in [-n/2, n/2).
long signed_bin(std::size_t k, std::size_t n) {
  return k < n / 2 ? static_cast<long>(k) : static_cast<long>(k) - static_cast<long>(n);
}

// exp(i gdd/2 w^2) per bin, shared across calls with the same grid and GDD.
std::shared_ptr<const std::vector<cplx>> dispersion_transfer(const TimeGrid& grid, double gdd) {
  using Key = std::tuple<std::size_t, double, double>;
  static std::mutex mutex;
  static std::map<Key, std::shared_ptr<const std::vector<cplx>>> cache;
  const Key key{grid.n_samples, grid.window, gdd};
  std::lock_guard lock(mutex);
  if (auto it = cache.find(key); it != cache.end()) return it->second;
  auto h = std::make_shared<std::vector<cplx>>(grid.n_samples);
  for (std::size_t k = 0; k < grid.n_samples; ++k) {
    const double w = grid.angular_frequency(k);
    (*h)[k] = std::polar(1.0, 0.5 * gdd * w * w);
  }
  if (cache.size() > 16) cache.clear();
  return cache.emplace(key, std::move(h)).first->second;
}

// Integral of the unit-area raised-cosine kernel on [-1/2, 1/2].
double smooth_step(double u) {
  if (u <= -0.5) return 0.0;
  if (u >= 0.5) return 1.0;
  return 0.5 + u + std::sin(2.0 * std::numbers::pi * u) / (2.0 * std::numbers::pi);
}

std::pair<std::size_t, std::size_t> search_range(const TimeGrid& grid, double halfwidth) {
  const std::size_t n = grid.n_samples;
  if (halfwidth <= 0.0) return {0, n};
  const auto half = static_cast<std::size_t>(std::floor(halfwidth / grid.dt()));
  const std::size_t c = grid.center_index();
  return {c > half ? c - half : 0, std::min(n, c + half + 1)};
}

template <typename PowerAt>
double gated_sqrt(std::size_t n, const TimeGrid& grid, const ReadoutConfig& cfg, PowerAt power) {
  if (n == 0) throw EmptyReadout("no samples to read out");
  if (!(cfg.gate_width > 0.0)) throw InvalidArgument("gate_width must be positive");
  const auto [lo, hi] = search_range(grid, cfg.search_halfwidth);
  std::size_t peak = lo;
  for (std::size_t i = lo; i < hi; ++i) {
    const double p = power(i);
    if (!std::isfinite(p)) throw EmptyReadout("non-finite sample in the readout window");
    if (p > power(peak)) peak = i;
  }
  const auto half = static_cast<std::size_t>(std::floor(0.5 * cfg.gate_width / grid.dt()));
  const std::size_t a = peak > half ? peak - half : 0;
  const std::size_t b = std::min(n, peak + half + 1);
  double q = 0.0;
  for (std::size_t i = a; i < b; ++i) q += power(i);
  return std::sqrt(std::max(q * grid.dt(), 0.0));
}

}  // namespace

double TimeGrid::time(std::size_t i) const {
  return (static_cast<double>(i) - static_cast<double>(n_samples / 2)) * dt();
}

double TimeGrid::angular_frequency(std::size_t k) const {
  return 2.0 * std::numbers::pi * static_cast<double>(signed_bin(k, n_samples)) / window;
}

void validate(const TimeGrid& grid) {
  if (!is_power_of_two(grid.n_samples) || grid.n_samples < 16) {
    throw InvalidArgument("n_samples must be a power of two >= 16");
  }
  require_positive(grid.window, "window");
  require_positive(grid.center_wavelength, "center_wavelength");
}

double OpticalField::energy() const {
  double e = 0.0;
  for (const auto& v : envelope) e += std::norm(v);
  return e * grid.dt();
}

FiberSpan matched_dcf(const FiberSpan& span, double dcf_beta2) {
  if (dcf_beta2 == 0.0 || !std::isfinite(dcf_beta2)) {
    throw InvalidArgument("dcf beta2 must be nonzero");
  }
  const double length = -span.gdd() / dcf_beta2;
  if (length < 0.0) throw InvalidArgument("dcf beta2 has the same sign as the span dispersion");
  return {dcf_beta2, length, FiberRole::DCF};
}

double super_gaussian_t0(double width, int order) {
  require_positive(width, "pulse width");
  if (order < 1) throw InvalidArgument("flatness_order must be at least 1");
  return 0.5 * width / std::pow(std::numbers::ln2, 1.0 / (2.0 * order));
}

double flat_halfwidth(double width, int order, double drop) {
  if (!(drop > 0.0 && drop < 1.0)) throw InvalidArgument("drop must lie in (0, 1)");
  return super_gaussian_t0(width, order) * std::pow(-std::log1p(-drop), 1.0 / (2.0 * order));
}

OpticalField generate_stretched_pulse(const TimeGrid& grid, double width, int flatness_order,
                                      double chirp_gdd, double peak_power,
                                      PulseSynthesis synthesis) {
  validate(grid);
  const double t0 = super_gaussian_t0(width, flatness_order);
  if (width >= grid.window) {
    throw InvalidArgument("pulse width must be shorter than the pulse interval");
  }
  require_positive(peak_power, "peak_power");
  if (!std::isfinite(chirp_gdd)) throw InvalidArgument("chirp_gdd must be finite");
  const double order2 = 2.0 * flatness_order;
  const std::size_t n = grid.n_samples;

  OpticalField f;
  f.grid = grid;
  f.envelope.resize(n);
  if (synthesis == PulseSynthesis::Direct) {
    const double amp = std::sqrt(peak_power);
    for (std::size_t i = 0; i < n; ++i) {
      const double t = grid.time(i);
      const double a = amp * std::exp(-0.5 * std::pow(std::abs(t) / t0, order2));
      const double phase = chirp_gdd == 0.0 ? 0.0 : -t * t / (2.0 * chirp_gdd);
      f.envelope[i] = std::polar(a, phase);
    }
    return f;
  }

  if (chirp_gdd == 0.0) throw InvalidArgument("propagated synthesis needs a nonzero chirp_gdd");
  // Stationary phase maps angular frequency w to time -gdd * w.
  const double omega0 = t0 / std::abs(chirp_gdd);
  for (std::size_t k = 0; k < n; ++k) {
    const double w = grid.angular_frequency(k);
    // Linear phase puts the transform-limited pulse at t = 0.
    const double shift = w * grid.time(0);
    f.envelope[k] = std::polar(std::exp(-0.5 * std::pow(std::abs(w) / omega0, order2)), -shift);
  }
  fft::inverse(f.envelope);
  f = propagate(f, FiberSpan{chirp_gdd, 1.0, FiberRole::SMF});
  double peak = 0.0;
  for (const auto& v : f.envelope) peak = std::max(peak, std::norm(v));
  const double scale = std::sqrt(peak_power / peak);
  for (auto& v : f.envelope) v *= scale;
  return f;
}

double spectral_edge_fraction(const OpticalField& field) {
  std::vector<cplx> spec = field.envelope;
  fft::forward(spec);
  const std::size_t n = spec.size();
  const double edge = 0.5 * kAliasingEdge * static_cast<double>(n);
  double total = 0.0;
  double outer = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double p = std::norm(spec[k]);
    total += p;
    if (std::abs(static_cast<double>(signed_bin(k, n))) >= edge) outer += p;
  }
  return total > 0.0 ? outer / total : 0.0;
}

OpticalField propagate(const OpticalField& field, const FiberSpan& span) {
  if (!std::isfinite(span.beta2) || !std::isfinite(span.length) || span.length < 0.0) {
    throw InvalidArgument("fiber span needs finite beta2 and non-negative length");
  }
  OpticalField out = field;
  const double gdd = span.gdd();
  if (gdd == 0.0) return out;

  auto& spec = out.envelope;
  fft::forward(spec);
  const std::size_t n = spec.size();
  const double edge = 0.5 * kAliasingEdge * static_cast<double>(n);
  double total = 0.0;
  double outer = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double p = std::norm(spec[k]);
    total += p;
    if (std::abs(static_cast<double>(signed_bin(k, n))) >= edge) outer += p;
  }
  if (total > 0.0 && outer / total > kAliasingTolerance) {
    throw AliasingError("spectral energy fraction " + std::to_string(outer / total) +
                        " lies in the outer 5% of the frequency grid");
  }
  const auto h = dispersion_transfer(field.grid, gdd);
  for (std::size_t k = 0; k < n; ++k) spec[k] *= (*h)[k];
  fft::inverse(spec);
  return out;
}

std::vector<double> mask_profile(const TimeGrid& grid, const ModulationMask& mask) {
  const auto n_seg = mask.segment_values.size();
  if (n_seg == 0) throw InvalidArgument("mask has no segments");
  require_positive(mask.window_width, "mask window_width");
  for (double v : mask.segment_values) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw InvalidArgument("mask segment values must be finite and non-negative");
    }
  }
  const double half = 0.5 * grid.window;
  if (mask.window_start < -half || mask.window_start + mask.window_width > half) {
    throw InvalidArgument("mask window lies outside the time grid");
  }
  const double seg_width = mask.window_width / static_cast<double>(n_seg);
  if (mask.edge_time < 0.0 || mask.edge_time >= seg_width) {
    throw InvalidArgument("edge_time must be non-negative and shorter than a segment");
  }

  std::vector<double> profile(grid.n_samples, 0.0);
  for (std::size_t i = 0; i < grid.n_samples; ++i) {
    const double u = (grid.time(i) - mask.window_start) / seg_width;
    if (u >= 0.0 && u < static_cast<double>(n_seg)) {
      profile[i] = mask.segment_values[std::min(static_cast<std::size_t>(u), n_seg - 1)];
    }
  }
  if (mask.edge_time == 0.0) return profile;

  // Replace each hard step by a smooth one of the same jump.
  const double dt = grid.dt();
  const auto reach = static_cast<long>(std::ceil(0.5 * mask.edge_time / dt)) + 1;
  for (std::size_t b = 0; b <= n_seg; ++b) {
    const double before = b == 0 ? 0.0 : mask.segment_values[b - 1];
    const double after = b == n_seg ? 0.0 : mask.segment_values[b];
    const double jump = after - before;
    if (jump == 0.0) continue;
    const double tb = mask.window_start + static_cast<double>(b) * seg_width;
    const auto centre = static_cast<long>(std::llround(tb / dt)) +
                        static_cast<long>(grid.center_index());
    for (long i = centre - reach; i <= centre + reach; ++i) {
      if (i < 0 || i >= static_cast<long>(grid.n_samples)) continue;
      const double u = (grid.time(static_cast<std::size_t>(i)) - tb) / mask.edge_time;
      const double hard = u >= 0.0 ? 1.0 : 0.0;
      profile[static_cast<std::size_t>(i)] += jump * (smooth_step(u) - hard);
    }
  }
  return profile;
}

OpticalField modulate(const OpticalField& field, const ModulationMask& mask) {
  const std::vector<double> profile = mask_profile(field.grid, mask);
  OpticalField out = field;
  double peak = 0.0;
  for (const auto& v : field.envelope) peak = std::max(peak, std::norm(v));
  bool outside_flat = false;
  for (std::size_t i = 0; i < profile.size(); ++i) {
    const double t = field.grid.time(i);
    if (t >= mask.window_start && t < mask.window_start + mask.window_width &&
        std::norm(field.envelope[i]) < (1.0 - kFlatRegionDrop) * peak) {
      outside_flat = true;
    }
    out.envelope[i] *= profile[i];
  }
  if (outside_flat) {
    out.warnings.emplace_back("mask window extends beyond the flat region of the pulse");
  }
  return out;
}

double AmplifierParams::gain() const { return std::pow(10.0, gain_db / 10.0); }
double AmplifierParams::n_sp() const { return std::pow(10.0, noise_figure_db / 10.0) / 2.0; }

OpticalField amplify(const OpticalField& field, const AmplifierParams& params, Rng& rng) {
  if (!params.enabled) return field;
  const double g = params.gain();
  if (!(g >= 1.0) || !std::isfinite(g)) throw InvalidArgument("amplifier gain must be >= 0 dB");
  OpticalField out = field;
  const double amp = std::sqrt(g);
  for (auto& v : out.envelope) v *= amp;
  if (!params.noise_enabled || g == 1.0) return out;

  require_positive(params.optical_bandwidth, "optical_bandwidth");
  const TimeGrid& grid = field.grid;
  // ASE power spectral density per polarization, W/Hz.
  const double psd = params.n_sp() * constants::kPlanck * grid.carrier_frequency() * (g - 1.0);
  const double sigma = std::sqrt(0.5 * psd / grid.dt());
  std::normal_distribution<double> gauss(0.0, sigma);
  std::vector<cplx> noise(grid.n_samples);
  if (params.optical_bandwidth < grid.sample_rate()) {
    // White noise seen through a brick-wall filter: draw only the passband bins.
    // A unit-variance time sample maps to variance N per DFT bin.
    const double bin_scale = std::sqrt(static_cast<double>(grid.n_samples));
    const double cutoff = 0.5 * params.optical_bandwidth;
    const std::size_t n = noise.size();
    const auto last = static_cast<std::size_t>(std::floor(cutoff * grid.window));
    for (std::size_t k = 0; k < n; ++k) {
      const auto b = static_cast<std::size_t>(std::abs(signed_bin(k, n)));
      if (b <= last) noise[k] = bin_scale * cplx(gauss(rng), gauss(rng));
    }
    fft::inverse(noise);
  } else {
    for (auto& v : noise) v = cplx(gauss(rng), gauss(rng));
  }
  for (std::size_t i = 0; i < noise.size(); ++i) out.envelope[i] += noise[i];
  return out;
}

void validate(const ActivationCurve& curve) {
  if (curve.is_identity()) return;
  if (curve.inputs.size() != curve.outputs.size() || curve.inputs.size() < 2) {
    throw InvalidArgument("activation curve needs at least two (input, output) points");
  }
  for (std::size_t i = 1; i < curve.inputs.size(); ++i) {
    if (!(curve.inputs[i] > curve.inputs[i - 1])) {
      throw InvalidArgument("activation curve inputs must be strictly increasing");
    }
    if (curve.outputs[i] < curve.outputs[i - 1]) {
      throw InvalidArgument("activation curve must be monotone non-decreasing");
    }
  }
}

CurveResult apply_activation_curve(double energy, const ActivationCurve& curve) {
  if (curve.is_identity()) return {energy, false};
  validate(curve);
  const auto& x = curve.inputs;
  const auto& y = curve.outputs;
  if (energy <= x.front()) return {y.front(), energy < x.front()};
  if (energy >= x.back()) return {y.back(), energy > x.back()};
  const auto hi = static_cast<std::size_t>(std::upper_bound(x.begin(), x.end(), energy) - x.begin());
  const std::size_t lo = hi - 1;
  const double f = (energy - x[lo]) / (x[hi] - x[lo]);
  return {y[lo] + f * (y[hi] - y[lo]), false};
}

double DetectorParams::effective_bandwidth(const TimeGrid& grid) const {
  return bandwidth > 0.0 ? bandwidth : grid.nyquist() / 4.0;
}

PhotocurrentTrace detect(const OpticalField& field, const DetectorParams& params, Rng& rng) {
  require_positive(params.responsivity, "responsivity");
  require_positive(params.temperature, "temperature");
  require_positive(params.load_resistance, "load_resistance");
  const TimeGrid& grid = field.grid;
  const double bw = params.effective_bandwidth(grid);
  if (bw > grid.nyquist()) throw InvalidArgument("detector bandwidth exceeds the grid Nyquist rate");

  const std::size_t n = field.envelope.size();
  std::vector<cplx> work(n);
  for (std::size_t i = 0; i < n; ++i) work[i] = params.responsivity * std::norm(field.envelope[i]);
  if (bw < grid.nyquist()) {
    fft::forward(work);
    const auto last = static_cast<std::size_t>(std::floor(bw * grid.window));
    for (std::size_t k = 0; k < n; ++k) {
      if (static_cast<std::size_t>(std::abs(signed_bin(k, n))) > last) work[k] = 0.0;
    }
    fft::inverse(work);
  }

  PhotocurrentTrace trace;
  trace.grid = grid;
  trace.bandwidth = bw;
  trace.current.resize(n);
  for (std::size_t i = 0; i < n; ++i) trace.current[i] = work[i].real();

  if (params.noise_enabled) {
    const double thermal_var =
        4.0 * constants::kBoltzmann * params.temperature * bw / params.load_resistance;
    std::normal_distribution<double> unit(0.0, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double power = std::norm(field.envelope[i]);
      const double shot_var = 2.0 * constants::kElementaryCharge * params.responsivity * power * bw;
      trace.current[i] += std::sqrt(shot_var + thermal_var) * unit(rng);
    }
  }
  return trace;
}

std::string_view readout_mode_name(ReadoutMode m) {
  return m == ReadoutMode::CoherentSum ? "coherent" : "gated";
}

ReadoutMode parse_readout_mode(std::string_view name) {
  if (name == "coherent" || name == "coherent_sum") return ReadoutMode::CoherentSum;
  if (name == "gated" || name == "gated_peak_sqrt") return ReadoutMode::GatedPeakSqrt;
  throw InvalidArgument("unknown readout mode '" + std::string(name) + "'");
}

double readout(const OpticalField& field, const ReadoutConfig& cfg) {
  const auto& e = field.envelope;
  if (cfg.mode == ReadoutMode::GatedPeakSqrt) {
    return gated_sqrt(e.size(), field.grid, cfg, [&](std::size_t i) { return std::norm(e[i]); });
  }
  if (e.empty()) throw EmptyReadout("no samples to read out");
  const auto [lo, hi] = search_range(field.grid, cfg.search_halfwidth);
  double best = 0.0;
  for (std::size_t i = lo; i < hi; ++i) {
    const double p = std::norm(e[i]);
    if (!std::isfinite(p)) throw EmptyReadout("non-finite sample in the readout window");
    best = std::max(best, p);
  }
  return std::sqrt(best);
}

double readout(const PhotocurrentTrace& trace, const ReadoutConfig& cfg) {
  if (cfg.mode == ReadoutMode::CoherentSum) {
    throw InvalidArgument("coherent readout needs the optical field, not a photocurrent");
  }
  const auto& c = trace.current;
  return gated_sqrt(c.size(), trace.grid, cfg, [&](std::size_t i) { return c[i]; });
}

PhysicsConfig default_physics() {
  PhysicsConfig p;
  p.dcf = matched_dcf(p.smf, 127.5e-27);
  return p;
}

void validate(const PhysicsConfig& p) {
  validate(p.grid);
  super_gaussian_t0(p.pulse.width, p.pulse.flatness_order);
  if (p.pulse.width >= p.grid.window) throw InvalidArgument("pulse width must be shorter than the window");
  require_positive(p.pulse.peak_power, "peak_power");
  require_positive(p.mask_window_width, "mask_window_width");
  if (p.mask_window_width > p.pulse.width) {
    throw InvalidArgument("mask window is wider than the stretched pulse");
  }
  if (!(p.readout.gate_width > 0.0)) throw InvalidArgument("gate_width must be positive");
  if (p.detector.effective_bandwidth(p.grid) > p.grid.nyquist()) {
    throw InvalidArgument("detector bandwidth exceeds the grid Nyquist rate");
  }
  if (p.amplifier.enabled && p.amplifier.gain_db < 0.0) {
    throw InvalidArgument("amplifier gain must be >= 0 dB");
  }
  validate(p.activation);
}

void set_noise(PhysicsConfig& physics, bool enabled) {
  physics.amplifier.noise_enabled = enabled;
  physics.detector.noise_enabled = enabled;
}

std::string_view trace_stage_name(TraceStage s) {
  switch (s) {
    case TraceStage::Stretched:
      return "stretched";
    case TraceStage::Modulated:
      return "modulated";
    case TraceStage::Amplified:
      return "amplified";
    case TraceStage::Compressed:
      return "compressed";
    case TraceStage::Detected:
      return "detected";
  }
  return "unknown";
}

FiberSimulator::FiberSimulator(PhysicsConfig physics) : physics_(std::move(physics)) {
  validate(physics_);
  stretched_ = generate_stretched_pulse(physics_.grid, physics_.pulse.width,
                                        physics_.pulse.flatness_order, physics_.smf.gdd(),
                                        physics_.pulse.peak_power, physics_.pulse.synthesis);
}

double FiberSimulator::simulate_pulse(const std::vector<double>& segment_values,
                                      std::uint64_t seed, const TraceSink& sink, int group,
                                      int pulse, std::vector<std::string>* warnings) const {
  Rng rng(seed);
  const auto emit = [&](TraceStage stage, const OpticalField* f, const PhotocurrentTrace* t) {
    if (sink) sink(group, pulse, stage, f, t);
  };
  emit(TraceStage::Stretched, &stretched_, nullptr);

  ModulationMask mask{segment_values, physics_.mask_window_start, physics_.mask_window_width,
                      physics_.modulator_edge_time};
  OpticalField field = modulate(stretched_, mask);
  if (warnings) {
    for (const auto& w : field.warnings) {
      warnings->push_back("group " + std::to_string(group) + " pulse " + std::to_string(pulse) +
                          ": " + w);
    }
  }
  emit(TraceStage::Modulated, &field, nullptr);
  field = amplify(field, physics_.amplifier, rng);
  emit(TraceStage::Amplified, &field, nullptr);
  field = propagate(field, physics_.dcf);
  emit(TraceStage::Compressed, &field, nullptr);

  double value = 0.0;
  if (physics_.readout.mode == ReadoutMode::CoherentSum) {
    value = readout(field, physics_.readout);
  } else {
    const PhotocurrentTrace trace = detect(field, physics_.detector, rng);
    emit(TraceStage::Detected, nullptr, &trace);
    value = readout(trace, physics_.readout);
  }
  const CurveResult curved = apply_activation_curve(value, physics_.activation);
  if (curved.clamped && warnings) {
    warnings->push_back("group " + std::to_string(group) + " pulse " + std::to_string(pulse) +
                        ": readout outside the activation curve domain was clamped");
  }
  return curved.value;
}

ScheduleReadouts FiberSimulator::run(const PulseSchedule& schedule, std::uint64_t seed,
                                     const TraceSink& sink) const {
  ScheduleReadouts out;
  out.groups.resize(schedule.groups.size());
  for (std::size_t g = 0; g < schedule.groups.size(); ++g) {
    const PulseGroup& group = schedule.groups[g];
    for (int p = 0; p <= kReferencePulse; ++p) {
      const auto& values = p == kReferencePulse ? group.reference
                                                : group.products[static_cast<std::size_t>(p)];
      const std::uint64_t pulse_seed =
          derive_seed(seed, {static_cast<std::uint64_t>(g), static_cast<std::uint64_t>(p)});
      try {
        const double r = simulate_pulse(values, pulse_seed, sink, static_cast<int>(g), p,
                                        &out.warnings);
        if (p == kReferencePulse) {
          out.groups[g].reference = r;
        } else {
          out.groups[g].products[static_cast<std::size_t>(p)] = r;
        }
      } catch (const Error& e) {
        throw StageError("fiber-sim group " + std::to_string(g) + " pulse " + std::to_string(p),
                         e.what());
      }
    }
  }
  return out;
}

ScheduleReadouts run_schedule(const PulseSchedule& schedule, const PhysicsConfig& physics,
                              std::uint64_t seed, const TraceSink& sink) {
  return FiberSimulator(physics).run(schedule, seed, sink);
}

Eigen::VectorXd combine_schedule(const PulseSchedule& schedule, const ScheduleReadouts& readouts) {
  if (readouts.groups.size() != schedule.groups.size()) {
    throw InvalidArgument("readouts do not match the schedule");
  }
  Eigen::VectorXd y(static_cast<Eigen::Index>(schedule.groups.size()));
  for (std::size_t g = 0; g < schedule.groups.size(); ++g) {
    y(static_cast<Eigen::Index>(g)) =
        schedule.scale * combine_readouts(readouts.groups[g].products, readouts.groups[g].reference,
                                          schedule.segment_count);
  }
  return y;
}

}  // namespace fibernn
