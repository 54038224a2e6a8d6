#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "fibernn/error.hpp"
#include "fibernn/fft.hpp"
#include "fibernn/fiber_sim.hpp"
#include "oracles.hpp"

using namespace fibernn;
using cplx = std::complex<double>;

namespace {

TimeGrid small_grid(std::size_t n, double window) {
  TimeGrid g;
  g.n_samples = n;
  g.window = window;
  return g;
}

OpticalField gaussian(const TimeGrid& grid, double t0) {
  OpticalField f;
  f.grid = grid;
  f.envelope.resize(grid.n_samples);
  for (std::size_t i = 0; i < grid.n_samples; ++i) {
    const double t = grid.time(i);
    f.envelope[i] = std::exp(-t * t / (2 * t0 * t0));
  }
  return f;
}

double l2_rel(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += std::norm(a[i] - b[i]);
    den += std::norm(b[i]);
  }
  return std::sqrt(num / den);
}

PhysicsConfig quiet(ReadoutMode mode) {
  PhysicsConfig p = default_physics();
  p.readout.mode = mode;
  return p;
}

double sum(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

}  // namespace

TEST_CASE("FFT matches a direct DFT") {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  for (std::size_t n : {8u, 64u, 256u}) {
    std::vector<cplx> x(n);
    for (auto& v : x) v = cplx(g(rng), g(rng));
    std::vector<cplx> want(n);
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t j = 0; j < n; ++j) {
        want[k] += x[j] * std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(k * j % n) / n);
      }
    }
    std::vector<cplx> got = x;
    fft::forward(got);
    CHECK(l2_rel(got, want) <= 1e-12);
    fft::inverse(got);
    CHECK(l2_rel(got, x) <= 1e-14);
  }
}

TEST_CASE("time grid geometry") {
  const TimeGrid g;
  CHECK(g.n_samples == 65536);
  CHECK(g.window == 20e-9);
  CHECK(g.dt() == doctest::Approx(20e-9 / 65536));
  CHECK(g.sample_rate() == doctest::Approx(65536 / 20e-9));
  CHECK(g.time(g.center_index()) == 0.0);
  CHECK(g.angular_frequency(1) == doctest::Approx(2 * std::numbers::pi / 20e-9));
  CHECK(g.angular_frequency(g.n_samples - 1) == doctest::Approx(-2 * std::numbers::pi / 20e-9));
  CHECK_THROWS_AS(validate(small_grid(1000, 1e-9)), InvalidArgument);
  CHECK_THROWS_AS(validate(small_grid(1024, 0.0)), InvalidArgument);
}

TEST_CASE("order-1 pulse is a Gaussian with 1/e intensity at T0") {
  const TimeGrid grid = small_grid(1024, 20.48e-9);  // 20 ps samples
  const double t0 = 2e-9;
  const double width = 2 * t0 * std::sqrt(std::numbers::ln2);
  CHECK(super_gaussian_t0(width, 1) == doctest::Approx(t0).epsilon(1e-14));
  const OpticalField f = generate_stretched_pulse(grid, width, 1, 0.0, 1.0);
  const std::size_t c = grid.center_index();
  CHECK(std::norm(f.envelope[c]) == doctest::Approx(1.0));
  CHECK(std::norm(f.envelope[c + 100]) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
  CHECK(std::norm(f.envelope[c - 100]) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
}

TEST_CASE("stretched pulse width is the intensity FWHM") {
  const TimeGrid grid;
  const OpticalField f = generate_stretched_pulse(grid, 12e-9, 6, 0.0, 1.0);
  // Linear interpolation of the half-maximum crossing on the positive side.
  double cross = 0.0;
  for (std::size_t i = grid.center_index(); i + 1 < grid.n_samples; ++i) {
    const double a = std::norm(f.envelope[i]);
    const double b = std::norm(f.envelope[i + 1]);
    if (a >= 0.5 && b < 0.5) {
      cross = grid.time(i) + (a - 0.5) / (a - b) * grid.dt();
      break;
    }
  }
  CHECK(2 * cross == doctest::Approx(12e-9).epsilon(1e-5));
}

TEST_CASE("order-6 flat top") {
  const TimeGrid grid;
  const double width = 12e-9;
  const OpticalField f = generate_stretched_pulse(grid, width, 6, default_physics().smf.gdd());
  double peak = 0.0;
  for (const auto& v : f.envelope) peak = std::max(peak, std::norm(v));
  const double t0 = super_gaussian_t0(width, 6);
  auto drop_within = [&](double half) {
    double lo = peak;
    for (std::size_t i = 0; i < grid.n_samples; ++i) {
      if (std::abs(grid.time(i)) <= half) lo = std::min(lo, std::norm(f.envelope[i]));
    }
    return 1.0 - lo / peak;
  };
  // Central 80 % of the FWHM: the drop follows the closed form, about 4.7 %.
  const double closed = 1.0 - std::exp(-std::pow(0.4 * width / t0, 12));
  CHECK(drop_within(0.4 * width) == doctest::Approx(closed).epsilon(1e-3));
  // The region where the drop stays under 1 % covers the 8 ns mask window.
  const double flat = flat_halfwidth(width, 6, 0.01);
  CHECK(drop_within(flat) <= 0.01 + 1e-12);
  CHECK(flat >= 4e-9);
  CHECK(drop_within(4e-9) <= 0.01);
}

TEST_CASE("stretched pulse arguments are validated") {
  const TimeGrid grid;
  CHECK_THROWS_AS(generate_stretched_pulse(grid, 20e-9, 6, 0.0), InvalidArgument);
  CHECK_THROWS_AS(generate_stretched_pulse(grid, 25e-9, 6, 0.0), InvalidArgument);
  CHECK_THROWS_AS(generate_stretched_pulse(grid, 12e-9, 0, 0.0), InvalidArgument);
  CHECK_THROWS_AS(generate_stretched_pulse(grid, 12e-9, 6, 0.0, 1e-3, PulseSynthesis::Propagated),
                  InvalidArgument);
}

TEST_CASE("zero-length span is the identity") {
  const OpticalField f = generate_stretched_pulse(TimeGrid{}, 12e-9, 6, -1e-20);
  const OpticalField g = propagate(f, FiberSpan{-21.7e-27, 0.0});
  CHECK(g.envelope == f.envelope);
  CHECK_THROWS_AS(propagate(f, FiberSpan{-21.7e-27, -1.0}), InvalidArgument);
}

TEST_CASE("propagation conserves energy") {
  const TimeGrid grid = small_grid(8192, 2e-9);
  for (double gdd : {-400e-24, -50e-24, 20e-24, 300e-24}) {
    const OpticalField f = gaussian(grid, 10e-12);
    const OpticalField g = propagate(f, FiberSpan{gdd, 1.0});
    CHECK(std::abs(g.energy() - f.energy()) / f.energy() <= 1e-9);
  }
  const PhysicsConfig p = default_physics();
  const OpticalField s = generate_stretched_pulse(p.grid, 12e-9, 6, p.smf.gdd());
  const OpticalField c = propagate(s, p.dcf);
  CHECK(std::abs(c.energy() - s.energy()) / s.energy() <= 1e-9);
}

TEST_CASE("SMF then matched DCF restores the field") {
  const TimeGrid grid = small_grid(8192, 2e-9);
  const OpticalField f = gaussian(grid, 8e-12);
  const FiberSpan smf{-21.7e-27, 10e3};
  const FiberSpan dcf = matched_dcf(smf, 127.5e-27);
  CHECK(smf.gdd() + dcf.gdd() == doctest::Approx(0.0).epsilon(1e-30));
  const OpticalField back = propagate(propagate(f, smf), dcf);
  CHECK(l2_rel(back.envelope, f.envelope) <= 1e-6);

  const PhysicsConfig p = default_physics();
  CHECK(p.smf.gdd() + p.dcf.gdd() == doctest::Approx(0.0).scale(1e-20).epsilon(1e-12));
  CHECK_THROWS_AS(matched_dcf(smf, -1e-27), InvalidArgument);
  CHECK_THROWS_AS(matched_dcf(smf, 0.0), InvalidArgument);
}

TEST_CASE("Gaussian broadening follows the closed form") {
  const TimeGrid grid = small_grid(16384, 4e-9);
  int pairs = 0;
  for (double t0 : {5e-12, 10e-12, 20e-12}) {
    for (double gdd : {-400e-24, -200e-24, 50e-24, 200e-24}) {
      const OpticalField f = gaussian(grid, t0);
      const OpticalField g = propagate(f, FiberSpan{gdd, 1.0});
      const double want = std::sqrt(1.0 + std::pow(gdd / (t0 * t0), 2));
      const double got = oracle::rms_width(g.envelope, grid.dt()) / oracle::rms_width(f.envelope, grid.dt());
      CHECK(got == doctest::Approx(want).epsilon(0.005));
      ++pairs;
    }
  }
  CHECK(pairs >= 10);
  // T0 = 10 ps through 200 ps^2: 1/e half-width of 10 sqrt(5) ps.
  const OpticalField g = propagate(gaussian(grid, 10e-12), FiberSpan{-200e-24, 1.0});
  CHECK(std::sqrt(2.0) * oracle::rms_width(g.envelope, grid.dt()) == doctest::Approx(22.36e-12).epsilon(0.005));
}

TEST_CASE("fields reaching the grid edge are rejected") {
  const TimeGrid grid = small_grid(1024, 1e-9);
  OpticalField f;
  f.grid = grid;
  f.envelope.resize(grid.n_samples);
  for (std::size_t i = 0; i < grid.n_samples; ++i) f.envelope[i] = i % 2 ? 1.0 : -1.0;
  CHECK(spectral_edge_fraction(f) == doctest::Approx(1.0));
  CHECK_THROWS_AS(propagate(f, FiberSpan{1e-24, 1.0}), AliasingError);
  CHECK(spectral_edge_fraction(gaussian(grid, 20e-12)) < kAliasingTolerance);
}

TEST_CASE("all-ones mask covering the pulse") {
  const PhysicsConfig p = default_physics();
  const OpticalField f = generate_stretched_pulse(p.grid, 12e-9, 6, p.smf.gdd());
  const OpticalField all = modulate(f, ModulationMask{std::vector<double>(4, 1.0), -10e-9, 20e-9, 0.0});
  CHECK(all.envelope == f.envelope);
  CHECK_FALSE(all.warnings.empty());  // the pulse edges are not flat

  const OpticalField win = modulate(f, ModulationMask{std::vector<double>(4, 1.0), -4e-9, 8e-9, 0.0});
  CHECK(win.warnings.empty());
  int outside = 0, inside = 0;
  for (std::size_t i = 0; i < p.grid.n_samples; ++i) {
    const double t = p.grid.time(i);
    if (t >= -4e-9 && t < 4e-9) {
      inside += win.envelope[i] == f.envelope[i];
    } else {
      outside += win.envelope[i] == cplx(0.0);
    }
  }
  CHECK(inside + outside == static_cast<int>(p.grid.n_samples));
}

TEST_CASE("all-zero mask gives a zero field") {
  const PhysicsConfig p = default_physics();
  const OpticalField f = generate_stretched_pulse(p.grid, 12e-9, 6, p.smf.gdd());
  const OpticalField z = modulate(f, ModulationMask{std::vector<double>(5, 0.0), -4e-9, 8e-9, 20e-12});
  CHECK(z.energy() == 0.0);
}

TEST_CASE("alternating mask keeps half the windowed energy") {
  const PhysicsConfig p = default_physics();
  const OpticalField f = generate_stretched_pulse(p.grid, 12e-9, 6, p.smf.gdd());
  const double windowed = modulate(f, ModulationMask{std::vector<double>(8, 1.0), -4e-9, 8e-9, 0.0}).energy();
  const double half = modulate(f, ModulationMask{{1, 0, 1, 0, 1, 0, 1, 0}, -4e-9, 8e-9, 0.0}).energy();
  CHECK(half / windowed == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("smooth modulator edges preserve the mask integral") {
  const TimeGrid grid;
  const ModulationMask hard{{0.2, 0.9, 0.0, 0.5}, -4e-9, 8e-9, 0.0};
  ModulationMask soft = hard;
  soft.edge_time = 20e-12;
  const auto a = mask_profile(grid, hard);
  const auto b = mask_profile(grid, soft);
  CHECK(sum(b) == doctest::Approx(sum(a)).epsilon(1e-4));
  for (double v : b) {
    CHECK(v >= -1e-15);
    CHECK(v <= 0.9 + 1e-15);
  }
}

TEST_CASE("mask validation") {
  const TimeGrid grid;
  CHECK_THROWS_AS(mask_profile(grid, ModulationMask{{}, -4e-9, 8e-9, 0.0}), InvalidArgument);
  CHECK_THROWS_AS(mask_profile(grid, ModulationMask{{1, -0.1}, -4e-9, 8e-9, 0.0}), InvalidArgument);
  CHECK_THROWS_AS(mask_profile(grid, ModulationMask{{1, 1}, -12e-9, 8e-9, 0.0}), InvalidArgument);
  CHECK_THROWS_AS(mask_profile(grid, ModulationMask{{1, 1}, -4e-9, 8e-9, 5e-9}), InvalidArgument);
}

TEST_CASE("noiseless amplification scales the field by sqrt(G)") {
  const PhysicsConfig p = default_physics();
  const OpticalField f = generate_stretched_pulse(p.grid, 12e-9, 6, p.smf.gdd());
  AmplifierParams a;
  a.gain_db = 10 * std::log10(4.0);
  Rng rng(0);
  const OpticalField g = amplify(f, a, rng);
  for (std::size_t i = 0; i < f.envelope.size(); i += 97) {
    CHECK(std::abs(g.envelope[i] - 2.0 * f.envelope[i]) <= 1e-14 * std::abs(f.envelope[i]) + 1e-300);
  }
  a.enabled = false;
  CHECK(amplify(f, a, rng).envelope == f.envelope);
}

TEST_CASE("spontaneous emission factor for a 4 dB noise figure") {
  AmplifierParams a;
  CHECK(a.noise_figure_db == 4.0);
  CHECK(a.n_sp() == doctest::Approx(std::pow(10.0, 0.4) / 2).epsilon(1e-15));
  CHECK(a.n_sp() == doctest::Approx(1.256).epsilon(1e-3));
}

TEST_CASE("unit gain adds no noise") {
  const PhysicsConfig p = default_physics();
  const OpticalField f = generate_stretched_pulse(p.grid, 12e-9, 6, p.smf.gdd());
  AmplifierParams a;
  a.gain_db = 0.0;
  a.noise_enabled = true;
  Rng rng(3);
  CHECK(amplify(f, a, rng).envelope == f.envelope);
}

TEST_CASE("ASE power matches the band-limited spectral density") {
  const TimeGrid grid;
  OpticalField dark;
  dark.grid = grid;
  dark.envelope.assign(grid.n_samples, 0.0);
  AmplifierParams a;
  a.noise_enabled = true;
  Rng rng(11);
  const OpticalField n = amplify(dark, a, rng);
  double power = 0.0;
  for (const auto& v : n.envelope) power += std::norm(v);
  power /= static_cast<double>(grid.n_samples);
  const double psd = a.n_sp() * constants::kPlanck * grid.carrier_frequency() * (a.gain() - 1.0);
  // Passband bins |k| <= B window / 2.
  const double bins = 2 * std::floor(0.5 * a.optical_bandwidth * grid.window) + 1;
  CHECK(power == doctest::Approx(psd * bins / grid.window).epsilon(0.03));
  // Nothing outside the optical filter.
  std::vector<cplx> spec = n.envelope;
  fft::forward(spec);
  double out_of_band = 0.0, total = 0.0;
  for (std::size_t k = 0; k < spec.size(); ++k) {
    const double f = std::abs(grid.angular_frequency(k)) / (2 * std::numbers::pi);
    total += std::norm(spec[k]);
    if (f > 0.5 * a.optical_bandwidth + 1.0 / grid.window) out_of_band += std::norm(spec[k]);
  }
  CHECK(out_of_band / total < 1e-20);
}

TEST_CASE("activation curves") {
  CHECK(apply_activation_curve(0.37, ActivationCurve{}).value == 0.37);
  const ActivationCurve sat{{0, 1, 2}, {0, 1, 1}};
  CHECK(apply_activation_curve(2.0, sat).value == 1.0);
  CHECK(apply_activation_curve(0.5, sat).value == 0.5);
  CHECK(apply_activation_curve(1.5, sat).value == 1.0);
  const CurveResult above = apply_activation_curve(3.0, sat);
  CHECK(above.value == 1.0);
  CHECK(above.clamped);
  const CurveResult below = apply_activation_curve(-1.0, sat);
  CHECK(below.value == 0.0);
  CHECK(below.clamped);
  CHECK_FALSE(apply_activation_curve(1.0, sat).clamped);

  const ActivationCurve inc{{0, 0.5, 1, 3}, {0, 0.2, 0.9, 1.0}};
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0, 3);
  for (int i = 0; i < 100; ++i) {
    const double a = u(rng), b = u(rng);
    if (a < b) CHECK(apply_activation_curve(a, inc).value < apply_activation_curve(b, inc).value);
  }
  CHECK_THROWS_AS(validate(ActivationCurve{{0, 1}, {0}}), InvalidArgument);
  CHECK_THROWS_AS(validate(ActivationCurve{{0, 0}, {0, 1}}), InvalidArgument);
  CHECK_THROWS_AS(validate(ActivationCurve{{0, 1}, {1, 0}}), InvalidArgument);
}

TEST_CASE("constant 1 mW gives 1 mA") {
  const TimeGrid grid;
  OpticalField f;
  f.grid = grid;
  f.envelope.assign(grid.n_samples, std::sqrt(1e-3));
  Rng rng(0);
  const PhotocurrentTrace t = detect(f, DetectorParams{}, rng);
  for (std::size_t i = 0; i < t.current.size(); i += 101) CHECK(t.current[i] == doctest::Approx(1e-3).epsilon(1e-12));
  CHECK(t.bandwidth == doctest::Approx(grid.nyquist() / 4));
}

TEST_CASE("dark detector shows thermal noise only") {
  const TimeGrid grid;
  OpticalField f;
  f.grid = grid;
  f.envelope.assign(grid.n_samples, 0.0);
  DetectorParams d;
  d.noise_enabled = true;
  Rng rng(5);
  const PhotocurrentTrace t = detect(f, d, rng);
  double mean = 0.0, var = 0.0;
  for (double v : t.current) mean += v;
  mean /= static_cast<double>(t.current.size());
  for (double v : t.current) var += (v - mean) * (v - mean);
  var /= static_cast<double>(t.current.size() - 1);
  const double want = 4 * constants::kBoltzmann * 290.0 * t.bandwidth / 50.0;
  CHECK(var == doctest::Approx(want).epsilon(0.03));
  CHECK(std::abs(mean) < 4 * std::sqrt(want / static_cast<double>(t.current.size())));
}

TEST_CASE("shot noise scales with power") {
  const TimeGrid grid;
  OpticalField f;
  f.grid = grid;
  f.envelope.assign(grid.n_samples, std::sqrt(1e-2));
  DetectorParams d;
  d.noise_enabled = true;
  Rng rng(6);
  const PhotocurrentTrace t = detect(f, d, rng);
  double var = 0.0;
  for (double v : t.current) var += (v - 1e-2) * (v - 1e-2);
  var /= static_cast<double>(t.current.size());
  const double shot = 2 * constants::kElementaryCharge * 1e-2 * t.bandwidth;
  const double thermal = 4 * constants::kBoltzmann * 290.0 * t.bandwidth / 50.0;
  CHECK(var == doctest::Approx(shot + thermal).epsilon(0.03));
}

TEST_CASE("doubling optical power doubles the photocurrent") {
  const PhysicsConfig p = default_physics();
  const OpticalField f = propagate(generate_stretched_pulse(p.grid, 12e-9, 6, p.smf.gdd()), p.dcf);
  OpticalField g = f;
  for (auto& v : g.envelope) v *= std::sqrt(2.0);
  Rng rng(0);
  const PhotocurrentTrace a = detect(f, DetectorParams{}, rng);
  const PhotocurrentTrace b = detect(g, DetectorParams{}, rng);
  double peak = 0.0;
  for (double v : a.current) peak = std::max(peak, std::abs(v));
  for (std::size_t i = 0; i < a.current.size(); ++i) {
    CHECK(std::abs(b.current[i] - 2 * a.current[i]) <= 1e-12 * peak);
  }
}

TEST_CASE("detector bandwidth above Nyquist is rejected") {
  const TimeGrid grid;
  OpticalField f;
  f.grid = grid;
  f.envelope.assign(grid.n_samples, 0.0);
  DetectorParams d;
  d.bandwidth = 1.01 * grid.nyquist();
  Rng rng(0);
  CHECK_THROWS_AS(detect(f, d, rng), InvalidArgument);
}

TEST_CASE("readout errors") {
  ReadoutConfig cfg;
  PhotocurrentTrace empty;
  CHECK_THROWS_AS(readout(empty, cfg), EmptyReadout);
  OpticalField bad;
  bad.grid = TimeGrid{};
  bad.envelope.assign(bad.grid.n_samples, 0.0);
  bad.envelope[bad.grid.center_index()] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(readout(bad, cfg), EmptyReadout);
  cfg.mode = ReadoutMode::CoherentSum;
  CHECK_THROWS_AS(readout(bad, cfg), EmptyReadout);
  PhotocurrentTrace t;
  t.grid = TimeGrid{};
  t.current.assign(t.grid.n_samples, 0.0);
  CHECK_THROWS_AS(readout(t, cfg), InvalidArgument);
  CHECK(parse_readout_mode("coherent") == ReadoutMode::CoherentSum);
  CHECK(parse_readout_mode("gated_peak_sqrt") == ReadoutMode::GatedPeakSqrt);
  CHECK_THROWS_AS(parse_readout_mode("peak"), InvalidArgument);
}

TEST_CASE("all-zero mask reads out zero") {
  for (ReadoutMode mode : {ReadoutMode::CoherentSum, ReadoutMode::GatedPeakSqrt}) {
    const FiberSimulator sim(quiet(mode));
    CHECK(sim.simulate_pulse(std::vector<double>(5, 0.0), 1) == 0.0);
  }
}

TEST_CASE("readout is homogeneous of degree one in the mask") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> mask(5);
  for (double& v : mask) v = u(rng);
  for (ReadoutMode mode : {ReadoutMode::CoherentSum, ReadoutMode::GatedPeakSqrt}) {
    const FiberSimulator sim(quiet(mode));
    const double base = sim.simulate_pulse(mask, 0);
    for (double alpha : {0.1, 0.5, 0.9}) {
      std::vector<double> scaled = mask;
      for (double& v : scaled) v *= alpha;
      const double r = sim.simulate_pulse(scaled, 0);
      const double tol = mode == ReadoutMode::CoherentSum ? 1e-12 : 5e-3;
      CHECK(r == doctest::Approx(alpha * base).epsilon(tol));
    }
  }
}

TEST_CASE("calibrated readout matches the dot product") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> count(1, 8);
  for (ReadoutMode mode : {ReadoutMode::CoherentSum, ReadoutMode::GatedPeakSqrt}) {
    const FiberSimulator sim(quiet(mode));
    double worst = 0.0;
    for (int rep = 0; rep < 25; ++rep) {
      const int n = count(rng);
      std::vector<double> mask(static_cast<std::size_t>(n));
      for (double& v : mask) v = u(rng);
      const double gamma = sim.simulate_pulse(std::vector<double>(mask.size(), 1.0), 0) / n;
      const double got = sim.simulate_pulse(mask, 0) / gamma;
      worst = std::max(worst, std::abs(got - sum(mask)) / sum(mask));
    }
    CHECK(worst <= (mode == ReadoutMode::CoherentSum ? 0.005 : 0.03));
  }
}

TEST_CASE("two-segment readout is approximately additive") {
  for (ReadoutMode mode : {ReadoutMode::CoherentSum, ReadoutMode::GatedPeakSqrt}) {
    const FiberSimulator sim(quiet(mode));
    const double both = sim.simulate_pulse({0.7, 0.4}, 0);
    const double first = sim.simulate_pulse({0.7, 0.0}, 0);
    const double second = sim.simulate_pulse({0.0, 0.4}, 0);
    CHECK(both == doctest::Approx(first + second).epsilon(0.03));
  }
}

TEST_CASE("noisy readouts average to the noiseless readout") {
  PhysicsConfig p = quiet(ReadoutMode::GatedPeakSqrt);
  const std::vector<double> mask = {0.6, 0.2, 0.9, 0.4, 0.1};
  const double clean = FiberSimulator(p).simulate_pulse(mask, 0);
  set_noise(p, true);
  const FiberSimulator noisy(p);
  // A two-standard-error bound fails for about 5% of seeds; the seed is fixed.
  const int trials = 400;
  double s = 0.0, s2 = 0.0;
  for (int t = 0; t < trials; ++t) {
    const double r = noisy.simulate_pulse(mask, derive_seed(1, {static_cast<std::uint64_t>(t)}));
    s += r;
    s2 += r * r;
  }
  const double mean = s / trials;
  const double sd = std::sqrt((s2 - trials * mean * mean) / (trials - 1));
  CHECK(sd > 0.0);
  CHECK(std::abs(mean - clean) <= 2 * sd / std::sqrt(trials));
}

TEST_CASE("propagated synthesis agrees with direct synthesis") {
  PhysicsConfig p = default_physics();
  const OpticalField direct = generate_stretched_pulse(p.grid, 12e-9, 6, p.smf.gdd());
  const OpticalField numeric =
      generate_stretched_pulse(p.grid, 12e-9, 6, p.smf.gdd(), 1e-3, PulseSynthesis::Propagated);
  // Intensity across the mask window.
  double worst = 0.0;
  for (std::size_t i = 0; i < p.grid.n_samples; ++i) {
    if (std::abs(p.grid.time(i)) > 4e-9) continue;
    worst = std::max(worst, std::abs(std::norm(numeric.envelope[i]) - std::norm(direct.envelope[i])) / 1e-3);
  }
  CHECK(worst <= 0.02);
  // Both compress to the same readout.
  p.pulse.synthesis = PulseSynthesis::Propagated;
  const double a = FiberSimulator(default_physics()).simulate_pulse({0.3, 0.8, 0.5}, 0);
  const double b = FiberSimulator(p).simulate_pulse({0.3, 0.8, 0.5}, 0);
  CHECK(b == doctest::Approx(a).epsilon(0.02));
}

TEST_CASE("schedule from an all-zero model") {
  CollapsedModel m;
  m.effective = Eigen::MatrixXd::Zero(3, 5);
  m.input_dim = 4;
  m.output_dim = 3;
  const PulseSchedule s = build_schedule(m, Eigen::Vector4d(0.1, -0.4, 0.8, 0.3));
  const ScheduleReadouts r = run_schedule(s, default_physics(), 0);
  REQUIRE(r.groups.size() == 3);
  for (const auto& g : r.groups) {
    for (double v : g.products) CHECK(v == 0.0);
    CHECK(g.reference > 0.0);
  }
  CHECK(combine_schedule(s, r).isZero(0.0));
}

TEST_CASE("noiseless schedules are deterministic and match the matrix product") {
  std::mt19937_64 rng(41);
  const FiberSimulator sim(default_physics());
  for (int rep = 0; rep < 3; ++rep) {
    CollapsedModel m;
    m.effective = oracle::random_matrix(rng, 3, 5, -2, 2);
    m.input_dim = 4;
    m.output_dim = 3;
    const Eigen::VectorXd x = oracle::random_matrix(rng, 4, 1);
    const PulseSchedule s = build_schedule(m, x);
    const ScheduleReadouts a = sim.run(s, 7);
    const ScheduleReadouts b = sim.run(s, 8);
    for (std::size_t g = 0; g < a.groups.size(); ++g) {
      CHECK(a.groups[g].products == b.groups[g].products);
      CHECK(a.groups[g].reference == b.groups[g].reference);
    }
    const Eigen::VectorXd y = combine_schedule(s, a);
    const Eigen::VectorXd want = m.apply(x);
    CHECK(((y - want) / s.scale).cwiseAbs().maxCoeff() <= 0.03);
  }
}

TEST_CASE("trace sink sees every stage in order") {
  const FiberSimulator sim(default_physics());
  std::vector<TraceStage> stages;
  const auto sink = [&](int g, int pulse, TraceStage st, const OpticalField* f, const PhotocurrentTrace* t) {
    CHECK(g == 2);
    CHECK(pulse == 1);
    CHECK((f != nullptr) != (t != nullptr));
    stages.push_back(st);
  };
  sim.simulate_pulse({0.5, 0.5}, 0, sink, 2, 1);
  const std::vector<TraceStage> want = {TraceStage::Stretched, TraceStage::Modulated, TraceStage::Amplified,
                                        TraceStage::Compressed, TraceStage::Detected};
  CHECK(stages == want);
  CHECK(trace_stage_name(TraceStage::Compressed) == "compressed");
}

TEST_CASE("stage errors carry the group and pulse") {
  const FiberSimulator sim(default_physics());
  PulseSchedule s;
  s.segment_count = 2;
  s.groups.resize(2);
  for (auto& g : s.groups) {
    for (auto& p : g.products) p = {0.1, 0.2};
    g.reference = {1, 1};
  }
  s.groups[1].products[2] = {0.1, -0.2};
  try {
    sim.run(s, 0);
    FAIL("expected StageError");
  } catch (const StageError& e) {
    CHECK(e.stage() == "fiber-sim group 1 pulse 2");
  }
}

TEST_CASE("physics validation") {
  PhysicsConfig p = default_physics();
  CHECK_NOTHROW(validate(p));
  p.pulse.width = 21e-9;
  CHECK_THROWS_AS(validate(p), InvalidArgument);
  p = default_physics();
  p.mask_window_width = 13e-9;
  CHECK_THROWS_AS(validate(p), InvalidArgument);
  p = default_physics();
  p.detector.bandwidth = 2 * p.grid.nyquist();
  CHECK_THROWS_AS(validate(p), InvalidArgument);
  p = default_physics();
  p.readout.gate_width = 0.0;
  CHECK_THROWS_AS(validate(p), InvalidArgument);
  p = default_physics();
  p.amplifier.gain_db = -3.0;
  CHECK_THROWS_AS(validate(p), InvalidArgument);
  p = default_physics();
  set_noise(p, true);
  CHECK(p.amplifier.noise_enabled);
  CHECK(p.detector.noise_enabled);
}
