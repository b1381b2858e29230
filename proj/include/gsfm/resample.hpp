#pragma once

#include <complex>
#include <span>
#include <vector>

namespace gsfm {

// Kaiser-windowed sinc interpolation of a uniformly sampled sequence x_k,
// k = 0..n-1, at fractional positions pos (in samples). Samples outside
// the sequence are zero.
class SincInterpolator {
 public:
  static constexpr int kTaps = 16;

  SincInterpolator();
  std::complex<double> operator()(std::span<const std::complex<double>> x, double pos) const;

 private:
  double kernel(double d) const;

  static constexpr int kPhases = 4096;
  std::vector<double> table_;
};

const SincInterpolator& sinc_interpolator();

// Values of a baseband sequence sampled at t_k = t0 + (k + 0.5)/fs, evaluated at times t.
std::vector<std::complex<double>> interpolate_at(std::span<const std::complex<double>> x, double t0,
                                                 double fs, std::span<const double> t);

}  // namespace gsfm
