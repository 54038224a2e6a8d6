#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fibernn {

enum class ModulationFormat { OOK = 0, PAM = 1, PSK = 2 };

inline constexpr int kNumClasses = 3;
inline constexpr int kNumFeatures = 4;
inline constexpr int kMinSymbols = 64;
inline constexpr double kLogFloor = 1e-12;

inline constexpr std::array<std::string_view, kNumFeatures> kFeatureNames = {
    "algebraic_mean", "variance", "variation", "geometric_mean"};

std::string_view format_name(ModulationFormat format);
ModulationFormat parse_format(std::string_view name);

struct SymbolWaveform {
  std::vector<std::complex<double>> samples;
  ModulationFormat format = ModulationFormat::OOK;
  double snr_db = 0.0;
  std::uint64_t seed = 0;
};

struct FeatureVector {
  double algebraic_mean = 0.0;
  double variance = 0.0;
  double variation = 0.0;  // coefficient of variation, std / mean
  double geometric_mean = 0.0;

  std::array<double, kNumFeatures> to_array() const {
    return {algebraic_mean, variance, variation, geometric_mean};
  }
  static FeatureVector from_array(const std::array<double, kNumFeatures>& a) {
    return {a[0], a[1], a[2], a[3]};
  }
};

struct Normalizer {
  std::array<double, kNumFeatures> min{};
  std::array<double, kNumFeatures> max{};
};

struct Sample {
  FeatureVector raw;
  std::array<double, kNumFeatures> features{};  // normalized
  std::array<double, kNumClasses> label{};      // one-hot
  ModulationFormat format = ModulationFormat::OOK;
  double snr_db = 0.0;
  std::uint64_t seed = 0;

  int class_index() const { return static_cast<int>(format); }
};

struct Dataset {
  std::vector<Sample> train;
  std::vector<Sample> test;
  Normalizer normalizer;
};

struct DatasetParams {
  int per_class = 50;
  double snr_min_db = 15.0;
  double snr_max_db = 25.0;
  std::uint64_t seed = 0;
  int n_symbols = 2048;
};

// Symbol-rate samples with complex AWGN at `snr_db` relative to the mean
// symbol power of the drawn sequence. An infinite SNR gives the noiseless
// constellation.
SymbolWaveform synthesize_waveform(ModulationFormat format, int n_symbols, double snr_db,
                                   std::uint64_t seed);

// Statistics of the sample magnitudes; order-independent.
FeatureVector extract_features(std::span<const std::complex<double>> samples);
FeatureVector extract_features(const SymbolWaveform& waveform);

Normalizer fit_normalizer(std::span<const FeatureVector> train);

// Minmax to [-1, 1] on the fitted range. Values outside the range are not clipped.
std::array<double, kNumFeatures> normalize(const Normalizer& n, const FeatureVector& f);

std::array<double, kNumClasses> one_hot(ModulationFormat format);

// per_class samples of each format, split 8:2 per class; normalizer fit on train only.
Dataset build_dataset(const DatasetParams& params);

int test_count_per_class(int per_class);

}  // namespace fibernn
