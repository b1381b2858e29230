#pragma once

#include <vector>

#include "gsfm/ambiguity.hpp"

namespace gsfm {

inline constexpr double kMmfBandFactor = 1.8;

// Kaiser taper (β = alpha_k) about the spectral centroid over band_factor
// times the 99.9% occupied band, then a Tukey(alpha_t) taper in time,
// renormalized to unit energy. alpha_k = alpha_t = 0 returns w unchanged.
Waveform design_mmf(const Waveform& w, double alpha_k, double alpha_t, double band_factor = kMmfBandFactor);

struct MmfReport {
  double psl_db = 0.0;
  double mf_psl_db = 0.0;
  double snrl_db = 0.0;       // -20 log10 |χ(0, unity)|
  double width_delay = 0.0;   // -3 dB, s
  double width_doppler = 0.0; // -3 dB, m/s
  double widen_delay = 1.0;   // ratios to the matched filter
  double widen_doppler = 1.0;
  double widen_product() const { return widen_delay * widen_doppler; }
  double psl_delay = 0.0, psl_velocity = 0.0;
};

// Cross-ambiguity of the echo w against `filter`, compared to the matched filter.
MmfReport mmf_report(const Waveform& w, const Waveform& filter, const AfOptions& opt = {});

struct MmfSearchCell {
  double alpha_k = 0.0, alpha_t = 0.0;
  MmfReport report;
};
struct MmfSearch {
  std::vector<MmfSearchCell> cells;
  std::size_t best = 0;  // lowest PSL, ties to the lower SNRL
};
// Defaults: α_K = 0..20 step 2, α_T = 0..1 step 0.1.
MmfSearch mmf_grid_search(const Waveform& w, std::vector<double> alpha_k = {}, std::vector<double> alpha_t = {},
                          const AfOptions& opt = {}, unsigned threads = 0);

}  // namespace gsfm
