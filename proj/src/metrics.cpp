#include "gsfm/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "gsfm/errors.hpp"
#include "parallel.hpp"

namespace gsfm {
namespace {

// Steepest ascent over the 8-neighbourhood.
std::pair<std::size_t, std::size_t> climb(const AmbiguitySurface& s, std::size_t r, std::size_t c) {
  const long nr = static_cast<long>(s.rows()), nc = static_cast<long>(s.cols());
  for (;;) {
    std::size_t br = r, bc = c;
    for (long dr = -1; dr <= 1; ++dr)
      for (long dc = -1; dc <= 1; ++dc) {
        const long rr = static_cast<long>(r) + dr, cc = static_cast<long>(c) + dc;
        if (rr < 0 || cc < 0 || rr >= nr || cc >= nc) continue;
        if (s.at(static_cast<std::size_t>(rr), static_cast<std::size_t>(cc)) > s.at(br, bc)) {
          br = static_cast<std::size_t>(rr);
          bc = static_cast<std::size_t>(cc);
        }
      }
    if (br == r && bc == c) return {r, c};
    r = br;
    c = bc;
  }
}

std::size_t climb1d(const std::vector<double>& y, std::size_t i) {
  for (;;) {
    std::size_t b = i;
    if (i > 0 && y[i - 1] > y[b]) b = i - 1;
    if (i + 1 < y.size() && y[i + 1] > y[b]) b = i + 1;
    if (b == i) return i;
    i = b;
  }
}

}  // namespace

PslReport psl(const AmbiguitySurface& s) {
  require(s.rows() > 0 && s.cols() > 0 && s.magnitude.size() == s.rows() * s.cols(), "PSL: empty or malformed surface");
  const std::size_t nr = s.rows(), nc = s.cols();
  PslReport rep;
  std::tie(rep.peak_row, rep.peak_col) = climb(s, s.origin_row(), s.origin_col());
  rep.peak = s.at(rep.peak_row, rep.peak_col);
  require(rep.peak > 0.0, "PSL: zero surface");
  const double level = rep.peak * std::pow(10.0, -3.0 / 20.0);
  const double tol = 1e-9 * rep.peak;

  auto& mask = rep.mainlobe;
  mask.assign(nr * nc, 0);
  // -3 dB component, 4-connected.
  std::vector<std::uint8_t> core(nr * nc, 0);
  std::deque<std::size_t> q{rep.peak_row * nc + rep.peak_col};
  core[q.front()] = 1;
  const long d4r[4] = {-1, 1, 0, 0}, d4c[4] = {0, 0, -1, 1};
  while (!q.empty()) {
    const std::size_t idx = q.front();
    q.pop_front();
    const long r = static_cast<long>(idx / nc), c = static_cast<long>(idx % nc);
    require(r > 0 && c > 0 && r + 1 < static_cast<long>(nr) && c + 1 < static_cast<long>(nc),
            "PSL: -3 dB mainlobe touches the grid boundary (grid too small)");
    for (int k = 0; k < 4; ++k) {
      const std::size_t j = static_cast<std::size_t>(r + d4r[k]) * nc + static_cast<std::size_t>(c + d4c[k]);
      if (!core[j] && s.magnitude[j] >= level) {
        core[j] = 1;
        q.push_back(j);
      }
    }
  }
  // Dilate by two cells.
  for (std::size_t r = 0; r < nr; ++r)
    for (std::size_t c = 0; c < nc; ++c) {
      if (!core[r * nc + c]) continue;
      for (long dr = -2; dr <= 2; ++dr)
        for (long dc = -2; dc <= 2; ++dc) {
          const long rr = static_cast<long>(r) + dr, cc = static_cast<long>(c) + dc;
          if (rr < 0 || cc < 0 || rr >= static_cast<long>(nr) || cc >= static_cast<long>(nc)) continue;
          mask[static_cast<std::size_t>(rr) * nc + static_cast<std::size_t>(cc)] = 1;
        }
    }
  // Descent basin of the peak: shoulders of the mainlobe are never sidelobes.
  std::vector<std::uint8_t> basin(nr * nc, 0);
  q.push_back(rep.peak_row * nc + rep.peak_col);
  basin[q.front()] = 1;
  while (!q.empty()) {
    const std::size_t idx = q.front();
    q.pop_front();
    mask[idx] = 1;
    const long r = static_cast<long>(idx / nc), c = static_cast<long>(idx % nc);
    for (long dr = -1; dr <= 1; ++dr)
      for (long dc = -1; dc <= 1; ++dc) {
        const long rr = r + dr, cc = c + dc;
        if (rr < 0 || cc < 0 || rr >= static_cast<long>(nr) || cc >= static_cast<long>(nc)) continue;
        const std::size_t j = static_cast<std::size_t>(rr) * nc + static_cast<std::size_t>(cc);
        if (basin[j] || s.magnitude[j] > s.magnitude[idx] + tol) continue;
        basin[j] = 1;
        q.push_back(j);
      }
  }

  double best = -1.0, floor = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < nr * nc; ++i) {
    floor = std::min(floor, s.magnitude[i]);
    if (!mask[i] && s.magnitude[i] > best) {
      best = s.magnitude[i];
      rep.row = i / nc;
      rep.col = i % nc;
    }
  }
  if (best < 0.0) {
    // Nothing outside the mainlobe: report the grid floor.
    best = floor;
    rep.row = rep.peak_row;
    rep.col = rep.peak_col;
  }
  rep.psl_db = 20.0 * std::log10(std::max(best, 1e-15 * rep.peak) / rep.peak);
  return rep;
}

double cut_width(const std::vector<double>& x, const std::vector<double>& mag, std::size_t peak, double level_db) {
  require(x.size() == mag.size() && peak < x.size(), "cut width: bad cut");
  const double lv = mag[peak] * std::pow(10.0, level_db / 20.0);
  std::size_t i = peak;
  while (i > 0 && mag[i - 1] >= lv) --i;
  require(i > 0, "cut width: level not crossed (grid too small)");
  const double xl = x[i - 1] + (lv - mag[i - 1]) / (mag[i] - mag[i - 1]) * (x[i] - x[i - 1]);
  std::size_t j = peak;
  while (j + 1 < x.size() && mag[j + 1] >= lv) ++j;
  require(j + 1 < x.size(), "cut width: level not crossed (grid too small)");
  const double xr = x[j] + (mag[j] - lv) / (mag[j] - mag[j + 1]) * (x[j + 1] - x[j]);
  return xr - xl;
}

double mainlobe_width(const AmbiguitySurface& s, Axis axis, double level_db) {
  std::vector<double> cut;
  if (axis == Axis::delay) {
    const std::size_t r = s.origin_row();
    for (std::size_t c = 0; c < s.cols(); ++c) cut.push_back(s.at(r, c));
    return cut_width(s.delay, cut, climb1d(cut, s.origin_col()), level_db);
  }
  const std::size_t c = s.origin_col();
  for (std::size_t r = 0; r < s.rows(); ++r) cut.push_back(s.at(r, c));
  return cut_width(s.velocity, cut, climb1d(cut, s.origin_row()), level_db);
}

SweepResult psl_sweep(const GsfmParams& base, const std::vector<double>& rho, const std::vector<double>& cycles,
                      const AfOptions& opt, unsigned threads) {
  require(!rho.empty() && !cycles.empty(), "PSL sweep: empty grid");
  SweepResult res;
  res.rho = rho;
  res.cycles = cycles;
  res.tbp = base.duration * base.bandwidth;
  const std::size_t n = rho.size() * cycles.size();
  res.psl_db.assign(n, 0.0);
  detail::parallel_for(n, threads, [&](std::size_t k) {
    GsfmParams p = base;
    p.rho = rho[k / cycles.size()];
    p.alpha = GsfmParams::alpha_for_cycles(cycles[k % cycles.size()], p.duration, p.rho, p.symmetry);
    res.psl_db[k] = psl(xaf(gen_gsfm(p), opt)).psl_db;
  });
  // Ties go to the smallest ρ, then the smallest C.
  std::size_t best = 0;
  for (std::size_t k = 1; k < n; ++k)
    if (res.psl_db[k] < res.psl_db[best]) best = k;
  res.best_rho = rho[best / cycles.size()];
  res.best_cycles = cycles[best % cycles.size()];
  res.best_psl_db = res.psl_db[best];
  return res;
}

NotchReport notch_depth(const QFunction& q, double v_exclude) {
  std::vector<double> vals;
  NotchReport r;
  r.min_db = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < q.velocity.size(); ++i) {
    if (std::fabs(q.velocity[i]) <= v_exclude) continue;
    vals.push_back(q.q_db[i]);
    if (q.q_db[i] < r.min_db) {
      r.min_db = q.q_db[i];
      r.velocity = q.velocity[i];
    }
  }
  require(!vals.empty(), "notch depth: no velocities beyond the exclusion zone");
  const std::size_t h = vals.size() / 2;
  std::nth_element(vals.begin(), vals.begin() + static_cast<long>(h), vals.end());
  double med = vals[h];
  if (vals.size() % 2 == 0) med = 0.5 * (med + *std::max_element(vals.begin(), vals.begin() + static_cast<long>(h)));
  r.median_db = med;
  r.depth_db = med - r.min_db;
  return r;
}

double carson_bandwidth(const GsfmParams& p) {
  return p.bandwidth + 2.0 * p.alpha * p.rho * std::pow(p.duration, p.rho - 1.0);
}

double carson_bandwidth(const SfmParams& p) { return p.bandwidth + 2.0 * p.mod_freq; }

}  // namespace gsfm
