#pragma once

#include <utility>
#include <vector>

#include "gsfm/ambiguity.hpp"
#include "gsfm/wavegen.hpp"

namespace gsfm {

// ε = β²τ² + 2γτd + λ²d², d = η - 1 (broadband) or φ in Hz (narrowband).
struct EoaParams {
  AfModel model = AfModel::broadband;
  double beta2 = 0.0;    // rad²/s²
  double lambda2 = 0.0;
  double gamma = 0.0;
};

EoaParams eoa_numeric(const Waveform& w, AfModel model);
// Closed forms for the even-symmetric GSFI/GCFI GSFM.
EoaParams eoa_closed_form(const GsfmParams& p, AfModel model);

struct EstimationVariance {
  double delay = 0.0;
  double doppler = 0.0;
};
EstimationVariance estimation_variances(const EoaParams& e, double snr);

// n points (τ, d) on the ellipse at level ε.
std::vector<std::pair<double, double>> eoa_contour(const EoaParams& e, double epsilon, std::size_t n = 128);

struct WoodwardRatios {
  double area_delay = 0.0;     // ∫|χ(τ,0)|² dτ
  double area_doppler = 0.0;   // ∫|χ(0,d)|² dd
  double width_delay = 0.0;    // -3 dB widths in τ and d
  double width_doppler = 0.0;
  double ratio_delay() const { return area_delay / width_delay; }
  double ratio_doppler() const { return area_doppler / width_doppler; }
};
WoodwardRatios woodward_ratios(const AmbiguitySurface& s);

struct EllipseFit {
  EoaParams eoa;
  double cross_ratio = 0.0;  // |γ| / sqrt(β²λ²)
  std::size_t points = 0;
};
// Least-squares fit of 1 - |χ|² over mainlobe cells with |χ|² in [0.4, 0.6].
EllipseFit fit_mainlobe_ellipse(const AmbiguitySurface& s);

}  // namespace gsfm
