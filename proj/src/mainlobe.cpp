#include "gsfm/mainlobe.hpp"

#include <array>
#include <cstdint>
#include <cmath>
#include <deque>
#include <numbers>

#include "gsfm/errors.hpp"
#include "gsfm/metrics.hpp"
#include "gsfm/specfun.hpp"

namespace gsfm {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * kPi;

// First derivative by central differences of order 8, reduced near the ends.
std::vector<cd> derivative(const std::vector<cd>& x, double fs) {
  static const std::array<std::vector<double>, 4> central = {
      std::vector<double>{0.5},
      std::vector<double>{2.0 / 3.0, -1.0 / 12.0},
      std::vector<double>{3.0 / 4.0, -3.0 / 20.0, 1.0 / 60.0},
      std::vector<double>{4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0}};
  const auto n = static_cast<long>(x.size());
  std::vector<cd> d(x.size());
  if (n < 3) return d;
  for (long i = 0; i < n; ++i) {
    const long room = std::min(i, n - 1 - i);
    if (room == 0) {
      const long s = i == 0 ? 1 : -1;
      d[static_cast<std::size_t>(i)] =
          static_cast<double>(s) * (-3.0 * x[static_cast<std::size_t>(i)] + 4.0 * x[static_cast<std::size_t>(i + s)] -
                                    x[static_cast<std::size_t>(i + 2 * s)]) * 0.5 * fs;
      continue;
    }
    const auto& c = central[static_cast<std::size_t>(std::min<long>(room, 4) - 1)];
    cd acc{};
    for (std::size_t k = 0; k < c.size(); ++k) {
      const long o = static_cast<long>(k) + 1;
      acc += c[k] * (x[static_cast<std::size_t>(i + o)] - x[static_cast<std::size_t>(i - o)]);
    }
    d[static_cast<std::size_t>(i)] = acc * fs;
  }
  return d;
}

}  // namespace

EoaParams eoa_numeric(const Waveform& w, AfModel model) {
  const auto m = w.baseband();
  const auto dm = derivative(m, w.sample_rate);
  const double wc = kTwoPi * w.carrier;
  double e = 0.0, sd2 = 0.0, tsd2 = 0.0, t2sd2 = 0.0, t1 = 0.0, t2 = 0.0;
  cd mu{}, tmu{};
  for (std::size_t i = 0; i < m.size(); ++i) {
    const double t = w.time_at(i);
    const cd sd = dm[i] + cd(0.0, wc) * m[i];  // carrier-removed ṡ
    const double p = std::norm(m[i]);
    e += p;
    t1 += t * p;
    t2 += t * t * p;
    const double q = std::norm(sd);
    sd2 += q;
    tsd2 += t * q;
    t2sd2 += t * t * q;
    mu += m[i] * std::conj(sd);
    tmu += t * m[i] * std::conj(sd);
  }
  require(e > 0.0, "EOA: zero-energy waveform");
  // Normalize to unit energy; the sample spacing cancels.
  sd2 /= e;
  tsd2 /= e;
  t2sd2 /= e;
  mu /= e;
  tmu /= e;
  t1 /= e;
  t2 /= e;
  EoaParams out;
  out.model = model;
  out.beta2 = sd2 - std::norm(mu);
  if (model == AfModel::broadband) {
    out.lambda2 = t2sd2 - std::norm(tmu);
    out.gamma = tsd2 - (std::conj(mu) * tmu).real();
  } else {
    out.lambda2 = 4.0 * kPi * kPi * (t2 - t1 * t1);
    // Baseband moment; the carrier only contributes through the time centroid.
    const cd tmu_bb = tmu + cd(0.0, wc) * t1;
    out.gamma = kTwoPi * tmu_bb.imag();
  }
  return out;
}

EoaParams eoa_closed_form(const GsfmParams& p, AfModel model) {
  p.validate();
  require(p.symmetry == IfSymmetry::even, "closed-form EOA needs an even-symmetric IF");
  require(p.variant != GsfmVariant::approx, "closed-form EOA covers the GSFI and GCFI phases");
  require(p.taper.kind == TaperSpec::Kind::rectangular, "closed-form EOA assumes a rectangular envelope");
  const double T = p.duration, r = p.rho, a = p.alpha, df = p.bandwidth, fc = p.carrier;
  const double h = std::pow(0.5 * T, r);
  const double x4 = 4.0 * kPi * a * h, x2 = 2.0 * kPi * a * h;
  const double k4 = 4.0 * kPi * a, k2 = 2.0 * kPi * a;
  const bool gsfi = p.variant == GsfmVariant::gsfi;
  const FresnelPair g4 = gen_fresnel(x4, 1.0 / r);
  const FresnelPair g2 = gen_fresnel(x2, 1.0 / r);
  const double e4 = 2.0 * g4.c / (r * T * std::pow(k4, 1.0 / r));  // mean of cos(4παt^ρ)
  const double e2 = 2.0 * (gsfi ? g2.s : g2.c) / (r * T * std::pow(k2, 1.0 / r));
  EoaParams out;
  out.model = model;
  out.beta2 = 0.5 * kPi * kPi * df * df * (1.0 + (gsfi ? -e4 : e4) - 2.0 * e2 * e2);
  if (model == AfModel::narrowband) {
    out.lambda2 = kPi * kPi * T * T / 3.0;
  } else {
    const FresnelPair m4 = gen_fresnel_moment(x4, 3.0 / r);
    const FresnelPair m2 = gen_fresnel_moment(x2, 3.0 / r);
    const double c4 = kPi * kPi * df * df * m4.c / (r * T * std::pow(k4, 3.0 / r));
    const double cross = 8.0 * kPi * kPi * df * fc * (gsfi ? m2.s : m2.c) / (r * T * std::pow(k2, 3.0 / r));
    out.lambda2 = kPi * kPi * fc * fc * T * T / 3.0 + kPi * kPi * df * df * T * T / 24.0 + (gsfi ? -c4 : c4) + cross;
  }
  out.gamma = 0.0;
  return out;
}

EstimationVariance estimation_variances(const EoaParams& e, double snr) {
  require(snr > 0.0, "estimation variances: SNR must be > 0");
  const double den = e.beta2 * e.lambda2 - e.gamma * e.gamma;
  require(den > 0.0, "estimation variances: β²λ² - γ² must be > 0");
  const double k = (1.0 + snr) / (2.0 * snr * snr);
  return {k * e.lambda2 / den, k * e.beta2 / den};
}

std::vector<std::pair<double, double>> eoa_contour(const EoaParams& e, double epsilon, std::size_t n) {
  require(epsilon > 0.0 && epsilon < 1.0, "EOA contour: epsilon must lie in (0, 1)");
  require(e.beta2 > 0.0 && e.beta2 * e.lambda2 - e.gamma * e.gamma > 0.0, "EOA contour: quadratic form not positive definite");
  require(n >= 3, "EOA contour: at least 3 points");
  const double l11 = std::sqrt(e.beta2);
  const double l21 = e.gamma / l11;
  const double l22 = std::sqrt(e.lambda2 - l21 * l21);
  const double se = std::sqrt(epsilon);
  std::vector<std::pair<double, double>> pts(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double th = kTwoPi * static_cast<double>(i) / static_cast<double>(n);
    const double x2 = se * std::sin(th) / l22;
    const double x1 = (se * std::cos(th) - l21 * x2) / l11;
    pts[i] = {x1, x2};
  }
  return pts;
}

WoodwardRatios woodward_ratios(const AmbiguitySurface& s) {
  const std::size_t r0 = s.origin_row(), c0 = s.origin_col();
  std::vector<double> drow(s.cols()), dcol(s.rows()), dop(s.rows());
  for (std::size_t c = 0; c < s.cols(); ++c) drow[c] = s.at(r0, c);
  for (std::size_t r = 0; r < s.rows(); ++r) {
    dcol[r] = s.at(r, c0);
    dop[r] = s.model == AfModel::broadband ? s.doppler[r] - 1.0 : s.doppler[r];
  }
  auto trapz2 = [](const std::vector<double>& x, const std::vector<double>& y) {
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) acc += 0.5 * (y[i] * y[i] + y[i + 1] * y[i + 1]) * (x[i + 1] - x[i]);
    return acc;
  };
  WoodwardRatios w;
  w.area_delay = trapz2(s.delay, drow);
  w.area_doppler = trapz2(dop, dcol);
  w.width_delay = cut_width(s.delay, drow, c0, -3.0);
  w.width_doppler = cut_width(dop, dcol, r0, -3.0);
  return w;
}

EllipseFit fit_mainlobe_ellipse(const AmbiguitySurface& s) {
  const auto rep = psl(s);
  const double pk = rep.peak;
  const double tau0 = s.delay[rep.peak_col];
  const double d0 = s.model == AfModel::broadband ? s.doppler[rep.peak_row] - 1.0 : s.doppler[rep.peak_row];
  // Flood the connected region |χ|²/peak² >= 0.4 from the peak.
  std::vector<std::uint8_t> seen(s.magnitude.size(), 0);
  std::deque<std::pair<std::size_t, std::size_t>> queue{{rep.peak_row, rep.peak_col}};
  seen[rep.peak_row * s.cols() + rep.peak_col] = 1;
  double ts = 0.0, dsc = 0.0;
  std::vector<std::array<double, 3>> raw;
  while (!queue.empty()) {
    auto [r, c] = queue.front();
    queue.pop_front();
    const double v = s.at(r, c) / pk;
    const double p2 = v * v;
    if (p2 <= 0.6) {
      const double tau = s.delay[c] - tau0;
      const double d = (s.model == AfModel::broadband ? s.doppler[r] - 1.0 : s.doppler[r]) - d0;
      raw.push_back({tau, d, 1.0 - p2});
      ts = std::max(ts, std::fabs(tau));
      dsc = std::max(dsc, std::fabs(d));
    }
    const long dr[4] = {-1, 1, 0, 0}, dc[4] = {0, 0, -1, 1};
    for (int k = 0; k < 4; ++k) {
      const long rr = static_cast<long>(r) + dr[k], cc = static_cast<long>(c) + dc[k];
      if (rr < 0 || cc < 0 || rr >= static_cast<long>(s.rows()) || cc >= static_cast<long>(s.cols())) continue;
      const std::size_t idx = static_cast<std::size_t>(rr) * s.cols() + static_cast<std::size_t>(cc);
      if (seen[idx]) continue;
      const double vv = s.magnitude[idx] / pk;
      if (vv * vv < 0.4) continue;
      seen[idx] = 1;
      queue.emplace_back(static_cast<std::size_t>(rr), static_cast<std::size_t>(cc));
    }
  }
  require(raw.size() >= 3 && ts > 0.0 && dsc > 0.0, "ellipse fit: too few mainlobe points in [0.4, 0.6]");
  // Normal equations in scaled coordinates.
  std::array<std::array<double, 3>, 3> A{};
  std::array<double, 3> b{};
  for (const auto& p : raw) {
    const double x = p[0] / ts, y = p[1] / dsc;
    const std::array<double, 3> f = {x * x, 2.0 * x * y, y * y};
    for (int i = 0; i < 3; ++i) {
      b[i] += f[i] * p[2];
      for (int j = 0; j < 3; ++j) A[i][j] += f[i] * f[j];
    }
  }
  // Gaussian elimination with partial pivoting.
  for (int col = 0; col < 3; ++col) {
    int piv = col;
    for (int r = col + 1; r < 3; ++r)
      if (std::fabs(A[r][col]) > std::fabs(A[piv][col])) piv = r;
    std::swap(A[col], A[piv]);
    std::swap(b[col], b[piv]);
    require(std::fabs(A[col][col]) > 1e-14, "ellipse fit: singular system");
    for (int r = col + 1; r < 3; ++r) {
      const double f = A[r][col] / A[col][col];
      for (int k = col; k < 3; ++k) A[r][k] -= f * A[col][k];
      b[r] -= f * b[col];
    }
  }
  std::array<double, 3> x{};
  for (int r = 2; r >= 0; --r) {
    double acc = b[r];
    for (int k = r + 1; k < 3; ++k) acc -= A[r][k] * x[k];
    x[r] = acc / A[r][r];
  }
  EllipseFit fit;
  fit.points = raw.size();
  fit.eoa.model = s.model;
  fit.eoa.beta2 = x[0] / (ts * ts);
  fit.eoa.gamma = x[1] / (ts * dsc);
  fit.eoa.lambda2 = x[2] / (dsc * dsc);
  const double gm = std::sqrt(std::fabs(fit.eoa.beta2 * fit.eoa.lambda2));
  fit.cross_ratio = gm > 0.0 ? std::fabs(fit.eoa.gamma) / gm : 0.0;
  return fit;
}

}  // namespace gsfm
