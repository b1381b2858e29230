#include "gsfm/mmf.hpp"

#include <cmath>

#include "gsfm/errors.hpp"
#include "gsfm/metrics.hpp"
#include "parallel.hpp"

namespace gsfm {
namespace {

struct Widths {
  double delay, doppler;
};

// -3 dB widths from fine cuts through the peak at τ = 0, unity Doppler.
Widths fine_widths(const Waveform& filter, const Waveform& w, const AfOptions& opt) {
  XafEngine e(filter, w, opt.model);
  const double fs = e.sample_rate();
  const double d0 = opt.model == AfModel::broadband ? 1.0 : 0.0;
  long first = 0;
  const auto row = e.full_row(d0, first);
  std::vector<double> x(row.size()), y(row.size());
  std::size_t pk = 0;
  for (std::size_t i = 0; i < row.size(); ++i) {
    x[i] = static_cast<double>(first + static_cast<long>(i)) / fs;
    y[i] = std::abs(row[i]);
    if (std::fabs(x[i]) < std::fabs(x[pk])) pk = i;
  }
  while (pk > 0 && y[pk - 1] > y[pk]) --pk;
  while (pk + 1 < y.size() && y[pk + 1] > y[pk]) ++pk;
  const double wd = cut_width(x, y, pk, -3.0);

  // Doppler cut: the span scales with the carrier and duration.
  const double c = opt.sound_speed;
  const double step = 0.005 * c / (2.0 * std::max(w.carrier, 1.0) * w.duration);
  const long half = 600;
  std::vector<double> v(2 * half + 1), z(v.size());
  for (long k = -half; k <= half; ++k) {
    const auto i = static_cast<std::size_t>(k + half);
    v[i] = static_cast<double>(k) * step;
    z[i] = std::abs(e.zero_delay(doppler_value(opt.model, v[i], w.carrier, c)));
  }
  return {wd, cut_width(v, z, static_cast<std::size_t>(half), -3.0)};
}

}  // namespace

Waveform design_mmf(const Waveform& w, double alpha_k, double alpha_t, double band_factor) {
  require(alpha_k >= 0.0, "MMF: Kaiser parameter must be >= 0");
  require(alpha_t >= 0.0 && alpha_t <= 1.0, "MMF: Tukey fraction must lie in [0, 1]");
  require(band_factor > 0.0, "MMF: band factor must be > 0");
  Waveform out = w;
  if (alpha_k > 0.0) {
    SpectralDensity sd(w);
    const double band = band_factor * sd.percent_bandwidth(sd.centroid(), 0.999);
    out = apply_taper(out, TaperSpec::kaiser(alpha_k), TaperDomain::frequency, band);
  }
  if (alpha_t > 0.0) out = apply_taper(out, TaperSpec::tukey(alpha_t), TaperDomain::time);
  if (alpha_k > 0.0 || alpha_t > 0.0) normalize_energy(out);
  out.label = w.label.empty() ? "mmf" : w.label + " mmf";
  return out;
}

MmfReport mmf_report(const Waveform& w, const Waveform& filter, const AfOptions& opt) {
  MmfReport r;
  const auto mf = xaf(w, w, opt);
  const auto caf = xaf(filter, w, opt);
  r.mf_psl_db = psl(mf).psl_db;
  const auto p = psl(caf);
  r.psl_db = p.psl_db;
  r.psl_delay = caf.delay[p.col];
  r.psl_velocity = caf.velocity[p.row];
  XafEngine e(filter, w, opt.model);
  const double unity = opt.model == AfModel::broadband ? 1.0 : 0.0;
  r.snrl_db = -20.0 * std::log10(std::abs(e.zero_delay(unity)));
  const Widths m = fine_widths(w, w, opt), f = fine_widths(filter, w, opt);
  r.width_delay = f.delay;
  r.width_doppler = f.doppler;
  r.widen_delay = f.delay / m.delay;
  r.widen_doppler = f.doppler / m.doppler;
  return r;
}

MmfSearch mmf_grid_search(const Waveform& w, std::vector<double> alpha_k, std::vector<double> alpha_t,
                          const AfOptions& opt, unsigned threads) {
  if (alpha_k.empty())
    for (int i = 0; i <= 10; ++i) alpha_k.push_back(2.0 * i);
  if (alpha_t.empty())
    for (int i = 0; i <= 10; ++i) alpha_t.push_back(0.1 * i);
  MmfSearch out;
  for (double k : alpha_k)
    for (double t : alpha_t) out.cells.push_back({k, t, {}});
  detail::parallel_for(out.cells.size(), threads, [&](std::size_t i) {
    auto& c = out.cells[i];
    c.report = mmf_report(w, design_mmf(w, c.alpha_k, c.alpha_t), opt);
  });
  for (std::size_t i = 1; i < out.cells.size(); ++i) {
    const auto& a = out.cells[i].report;
    const auto& b = out.cells[out.best].report;
    if (a.psl_db < b.psl_db || (a.psl_db == b.psl_db && a.snrl_db < b.snrl_db)) out.best = i;
  }
  return out;
}

}  // namespace gsfm
