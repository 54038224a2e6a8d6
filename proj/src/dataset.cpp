#include "fibernn/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fibernn/error.hpp"
#include "fibernn/random.hpp"

namespace fibernn {

std::string_view format_name(ModulationFormat format) {
  switch (format) {
    case ModulationFormat::OOK:
      return "OOK";
    case ModulationFormat::PAM:
      return "PAM";
    case ModulationFormat::PSK:
      return "PSK";
  }
  throw InvalidArgument("unknown modulation format");
}

ModulationFormat parse_format(std::string_view name) {
  for (int c = 0; c < kNumClasses; ++c) {
    auto f = static_cast<ModulationFormat>(c);
    if (format_name(f) == name) return f;
  }
  throw InvalidArgument("unknown modulation format '" + std::string(name) + "'");
}

SymbolWaveform synthesize_waveform(ModulationFormat format, int n_symbols, double snr_db,
                                   std::uint64_t seed) {
  if (n_symbols < kMinSymbols) {
    throw InvalidArgument("n_symbols must be at least " + std::to_string(kMinSymbols));
  }
  if (std::isnan(snr_db) || snr_db == -INFINITY) {
    throw InvalidArgument("snr_db must be a number above -inf");
  }
  const int c = static_cast<int>(format);
  if (c < 0 || c >= kNumClasses) throw InvalidArgument("unknown modulation format");

  Rng rng(seed);
  // Balanced draw: every level appears floor(n / levels) times, the remainder
  // is drawn uniformly, then the order is shuffled.
  const int levels = format == ModulationFormat::OOK ? 2 : 4;
  std::vector<int> symbols(static_cast<std::size_t>(n_symbols));
  for (std::size_t i = 0; i < symbols.size(); ++i) symbols[i] = static_cast<int>(i % levels);
  std::uniform_int_distribution<int> pick(0, levels - 1);
  const std::size_t full = symbols.size() - symbols.size() % static_cast<std::size_t>(levels);
  for (std::size_t i = full; i < symbols.size(); ++i) symbols[i] = pick(rng);
  std::shuffle(symbols.begin(), symbols.end(), rng);

  // QPSK points on the axes keep |s| == 1 exactly.
  static constexpr std::array<std::complex<double>, 4> kPsk = {
      std::complex<double>{1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}};

  SymbolWaveform w;
  w.format = format;
  w.snr_db = snr_db;
  w.seed = seed;
  w.samples.resize(symbols.size());
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    const int k = symbols[i];
    switch (format) {
      case ModulationFormat::OOK:
        w.samples[i] = static_cast<double>(k);
        break;
      case ModulationFormat::PAM:
        w.samples[i] = k / 3.0;
        break;
      case ModulationFormat::PSK:
        w.samples[i] = kPsk[static_cast<std::size_t>(k)];
        break;
    }
  }

  if (std::isfinite(snr_db)) {
    double power = 0.0;
    for (const auto& s : w.samples) power += std::norm(s);
    power /= static_cast<double>(w.samples.size());
    const double sigma = std::sqrt(power / std::pow(10.0, snr_db / 10.0) / 2.0);
    std::normal_distribution<double> gauss(0.0, sigma);
    for (auto& s : w.samples) s += std::complex<double>(gauss(rng), gauss(rng));
  }
  return w;
}

FeatureVector extract_features(std::span<const std::complex<double>> samples) {
  if (samples.empty()) throw InvalidArgument("cannot extract features from an empty waveform");
  const double n = static_cast<double>(samples.size());
  double sum = 0.0;
  double log_sum = 0.0;
  for (const auto& s : samples) {
    const double m = std::abs(s);
    sum += m;
    log_sum += std::log(std::max(m, kLogFloor));
  }
  const double mean = sum / n;
  double sq = 0.0;
  for (const auto& s : samples) {
    const double d = std::abs(s) - mean;
    sq += d * d;
  }
  FeatureVector f;
  f.algebraic_mean = mean;
  f.variance = sq / n;
  f.variation = mean > 0.0 ? std::sqrt(f.variance) / mean : 0.0;
  f.geometric_mean = std::exp(log_sum / n);
  return f;
}

FeatureVector extract_features(const SymbolWaveform& waveform) {
  return extract_features(std::span<const std::complex<double>>(waveform.samples));
}

Normalizer fit_normalizer(std::span<const FeatureVector> train) {
  if (train.empty()) throw InvalidArgument("cannot fit a normalizer on an empty set");
  Normalizer n;
  n.min = train.front().to_array();
  n.max = n.min;
  for (const auto& f : train) {
    const auto a = f.to_array();
    for (int k = 0; k < kNumFeatures; ++k) {
      n.min[k] = std::min(n.min[k], a[k]);
      n.max[k] = std::max(n.max[k], a[k]);
    }
  }
  for (int k = 0; k < kNumFeatures; ++k) {
    if (!(n.max[k] > n.min[k])) {
      std::string name(kFeatureNames[k]);
      throw DegenerateFeature(name, "feature '" + name + "' has max == min on the training set");
    }
  }
  return n;
}

std::array<double, kNumFeatures> normalize(const Normalizer& n, const FeatureVector& f) {
  const auto a = f.to_array();
  std::array<double, kNumFeatures> out{};
  for (int k = 0; k < kNumFeatures; ++k) {
    out[k] = 2.0 * (a[k] - n.min[k]) / (n.max[k] - n.min[k]) - 1.0;
  }
  return out;
}

std::array<double, kNumClasses> one_hot(ModulationFormat format) {
  std::array<double, kNumClasses> label{};
  label[static_cast<std::size_t>(format)] = 1.0;
  return label;
}

int test_count_per_class(int per_class) { return std::max(1, (2 * per_class + 5) / 10); }

Dataset build_dataset(const DatasetParams& params) {
  if (params.per_class < 5) throw InvalidArgument("per_class must be at least 5");
  if (!(params.snr_max_db >= params.snr_min_db) || !std::isfinite(params.snr_min_db) ||
      !std::isfinite(params.snr_max_db)) {
    throw InvalidArgument("snr range must be finite with min <= max");
  }
  const int n_test = test_count_per_class(params.per_class);

  Dataset ds;
  for (int c = 0; c < kNumClasses; ++c) {
    const auto format = static_cast<ModulationFormat>(c);
    std::vector<Sample> pool;
    pool.reserve(static_cast<std::size_t>(params.per_class));
    for (int i = 0; i < params.per_class; ++i) {
      Sample s;
      s.format = format;
      s.label = one_hot(format);
      s.seed = derive_seed(params.seed, {static_cast<std::uint64_t>(c), static_cast<std::uint64_t>(i)});
      Rng snr_rng(derive_seed(s.seed, {0}));
      s.snr_db = std::uniform_real_distribution<double>(params.snr_min_db, params.snr_max_db)(snr_rng);
      s.raw = extract_features(synthesize_waveform(format, params.n_symbols, s.snr_db, s.seed));
      pool.push_back(s);
    }

    std::vector<std::size_t> order(pool.size());
    std::iota(order.begin(), order.end(), 0);
    Rng split_rng(derive_seed(params.seed, {static_cast<std::uint64_t>(c), 0xffffffffULL}));
    std::shuffle(order.begin(), order.end(), split_rng);
    // Keep original order within each split.
    std::vector<std::size_t> test_idx(order.begin(), order.begin() + n_test);
    std::sort(test_idx.begin(), test_idx.end());
    std::vector<bool> is_test(pool.size(), false);
    for (auto i : test_idx) is_test[i] = true;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      (is_test[i] ? ds.test : ds.train).push_back(pool[i]);
    }
  }

  std::vector<FeatureVector> train_raw;
  train_raw.reserve(ds.train.size());
  for (const auto& s : ds.train) train_raw.push_back(s.raw);
  ds.normalizer = fit_normalizer(train_raw);
  for (auto* split : {&ds.train, &ds.test}) {
    for (auto& s : *split) s.features = normalize(ds.normalizer, s.raw);
  }
  return ds;
}

}  // namespace fibernn
