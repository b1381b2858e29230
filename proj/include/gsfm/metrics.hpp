#pragma once

#include <cstdint>
#include <vector>

#include "gsfm/ambiguity.hpp"
#include "gsfm/wavegen.hpp"

namespace gsfm {

struct PslReport {
  double psl_db = 0.0;       // highest sidelobe relative to the mainlobe peak
  double peak = 0.0;         // mainlobe peak |χ|
  std::size_t peak_row = 0, peak_col = 0;
  std::size_t row = 0, col = 0;  // location of the peak sidelobe
  std::vector<std::uint8_t> mainlobe;  // mask, same layout as the surface
};

// Mainlobe = -3 dB connected component around the peak nearest the origin,
// dilated by 2 cells, joined with every cell reachable from the peak along
// a non-increasing path.
PslReport psl(const AmbiguitySurface& s);

enum class Axis { delay, doppler };

// Width of a cut at `level_db` below its peak, crossings interpolated linearly in |χ|.
double cut_width(const std::vector<double>& x, const std::vector<double>& mag, std::size_t peak, double level_db);
// Along the zero-Doppler row (delay, s) or zero-delay column (velocity, m/s).
double mainlobe_width(const AmbiguitySurface& s, Axis axis, double level_db = -3.0);

struct SweepResult {
  std::vector<double> rho, cycles;
  std::vector<double> psl_db;  // rho-major: psl_db[i * cycles.size() + j]
  double tbp = 0.0;
  double best_rho = 0.0, best_cycles = 0.0, best_psl_db = 0.0;
  double at(std::size_t i, std::size_t j) const { return psl_db[i * cycles.size() + j]; }
};

// Cells run on `threads` workers (0 = hardware concurrency).
SweepResult psl_sweep(const GsfmParams& base, const std::vector<double>& rho, const std::vector<double>& cycles,
                      const AfOptions& opt = {}, unsigned threads = 0);

struct NotchReport {
  double depth_db = 0.0;
  double min_db = 0.0;
  double median_db = 0.0;
  double velocity = 0.0;
};
NotchReport notch_depth(const QFunction& q, double v_exclude = 1.0);

// Δf + 2αρT^(ρ-1); for the SFM Δf + 2f_m.
double carson_bandwidth(const GsfmParams& p);
double carson_bandwidth(const SfmParams& p);

}  // namespace gsfm
