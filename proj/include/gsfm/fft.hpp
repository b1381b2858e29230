#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace gsfm::fft {

using cd = std::complex<double>;

// In-place unnormalized forward DFT, X[k] = sum x[n] exp(-j2πkn/N).
void forward(std::span<cd> data);
// In-place inverse DFT including the 1/N factor.
void inverse(std::span<cd> data);
// In-place unnormalized inverse DFT (no 1/N).
void backward(std::span<cd> data);

// Smallest n' >= n whose prime factors are 2, 3, 5 and 7.
std::size_t fast_length(std::size_t n);
std::size_t next_pow2(std::size_t n);

// Full linear cross-correlation c[k] = sum_i a[i] conj(b[i + k]) for
// k in [-(a.size()-1), b.size()-1]; result index is k + a.size() - 1.
std::vector<cd> xcorr(std::span<const cd> a, std::span<const cd> b);

}  // namespace gsfm::fft
