#pragma once

#include <complex>
#include <span>

namespace chronofrft::fft {

enum class Direction { forward, backward };

// Unnormalized in-place DFT.
//   forward:  X_k = sum_j x_j exp(-2 pi i j k / n)
//   backward: x_j = sum_k X_k exp(+2 pi i j k / n)
// Plans are cached per (n, direction); safe to call from several threads.
void transform(std::span<std::complex<double>> data, Direction dir);

}  // namespace chronofrft::fft
