#pragma once

#include <complex>
#include <span>
#include <vector>

namespace monogenic::detail {

using Complex = std::complex<double>;

// Unnormalized complex DFT over a row-major buffer. dims = {height, width} for
// 2D, {n} for 1D. Forward uses exp(-i<x,xi>).
void fft_forward(std::span<Complex> data, std::span<const int> dims);
// Inverse including the 1/N normalization.
void fft_inverse(std::span<Complex> data, std::span<const int> dims);

// Signed frequency index for bin k of an n-point transform: k for k <= n/2,
// k - n otherwise.
inline int signed_frequency_index(int k, int n) { return 2 * k <= n ? k : k - n; }
inline bool is_nyquist(int k, int n) { return n % 2 == 0 && 2 * k == n; }

}  // namespace monogenic::detail
