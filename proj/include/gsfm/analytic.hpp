#pragma once

#include <complex>
#include <span>
#include <vector>

#include "gsfm/wavegen.hpp"

namespace gsfm {

// Phase model s(t) = T^-1/2 exp(j[2πF t + Σ_m P_m sin(2πmt/T_h) - Q_m cos(2πmt/T_h)])
// on [start, start + T].
struct HarmonicPhase {
  double F = 0.0;
  double period = 1.0;  // T_h
  double duration = 1.0;
  double start = 0.0;
  std::vector<double> P, Q;
};

HarmonicPhase harmonic_phase(const GsfmParams& p, std::size_t M = 0);
HarmonicPhase harmonic_phase(const SfmParams& p);

// Complex spectrum S(f) = ∫ s(t) exp(-j2πft) dt.
std::vector<std::complex<double>> analytic_spectrum(const HarmonicPhase& h, std::span<const double> freq);

// Narrowband AF on a grid, rows = Doppler shifts φ (Hz), columns = delays.
std::vector<std::complex<double>> analytic_naaf(const HarmonicPhase& h, std::span<const double> delay,
                                                std::span<const double> phi);

// Broadband AF under the small-compression approximation, rows = η.
std::vector<std::complex<double>> analytic_baaf(const HarmonicPhase& h, std::span<const double> delay,
                                                std::span<const double> eta);

// Single-harmonic (SFM) versions evaluated with Bessel functions instead of the FFT-based GBF.
std::vector<std::complex<double>> sfm_spectrum(const SfmParams& p, std::span<const double> freq);
std::vector<std::complex<double>> sfm_naaf(const SfmParams& p, std::span<const double> delay,
                                           std::span<const double> phi);
std::vector<std::complex<double>> sfm_baaf(const SfmParams& p, std::span<const double> delay,
                                           std::span<const double> eta);

}  // namespace gsfm
