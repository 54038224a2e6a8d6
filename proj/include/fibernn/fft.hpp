#pragma once

#include <complex>
#include <span>

namespace fibernn::fft {

// In-place DFT, X[k] = sum_n x[n] exp(-2 pi i k n / N). Plans are cached per
// size; execution is safe from multiple threads.
void forward(std::span<std::complex<double>> data);

// In-place inverse including the 1/N factor, so inverse(forward(x)) == x.
void inverse(std::span<std::complex<double>> data);

}  // namespace fibernn::fft
