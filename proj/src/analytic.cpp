#include "gsfm/analytic.hpp"

#include <cmath>
#include <functional>
#include <memory>
#include <numbers>

#include "gsfm/errors.hpp"
#include "gsfm/specfun.hpp"

namespace gsfm {
namespace {

using cd = std::complex<double>;
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * kPi;

// ∫_lo^hi exp(jνt) dt
cd exp_integral(double nu, double lo, double hi) {
  const double L = hi - lo;
  if (L <= 0.0) return {};
  const double x = 0.5 * nu * L;
  const double sinc = std::fabs(x) < 1e-12 ? 1.0 : std::sin(x) / x;
  return L * sinc * std::polar(1.0, 0.5 * nu * (hi + lo));
}

// GBF orders for one argument set; uses Bessel functions for a single harmonic.
using GbfFn = std::function<cd(int)>;

struct GbfEval {
  int n_max = 0;
  GbfFn at;
};

GbfEval make_gbf(const std::vector<double>& x, const std::vector<double>& y, bool bessel) {
  GbfEval ev;
  if (bessel && x.size() == 1) {
    const double R = std::hypot(x[0], y[0]);
    const double delta = std::atan2(y[0], x[0]);
    ev.n_max = static_cast<int>(std::ceil(R + 10.0 * std::cbrt(R + 1.0) + 20.0));
    ev.at = [R, delta](int n) { return bessel_j(n, R) * std::polar(1.0, -n * delta); };
    return ev;
  }
  auto series = std::make_shared<GbfSeries>(GbfArgs(x, y));
  ev.n_max = series->n_max();
  ev.at = [series](int n) { return (*series)(n); };
  return ev;
}

// Args X_m = -2 Q_m s_m, Y_m = 2 P_m s_m with s_m = sin(πm x/T_h).
void shifted_args(const HarmonicPhase& h, double x, std::vector<double>& X, std::vector<double>& Y) {
  const std::size_t M = h.P.size();
  X.assign(M, 0.0);
  Y.assign(M, 0.0);
  for (std::size_t m = 0; m < M; ++m) {
    const double s = std::sin(kPi * static_cast<double>(m + 1) * x / h.period);
    X[m] = -2.0 * h.Q[m] * s;
    Y[m] = 2.0 * h.P[m] * s;
  }
}

std::vector<cd> spectrum_impl(const HarmonicPhase& h, std::span<const double> freq, bool bessel) {
  const auto g = make_gbf(h.P, h.Q, bessel);
  std::vector<cd> coef(static_cast<std::size_t>(2 * g.n_max + 1));
  double cmax = 0.0;
  for (int n = -g.n_max; n <= g.n_max; ++n) {
    coef[static_cast<std::size_t>(n + g.n_max)] = g.at(n);
    cmax = std::max(cmax, std::abs(coef[static_cast<std::size_t>(n + g.n_max)]));
  }
  const double amp = 1.0 / std::sqrt(h.duration);
  std::vector<cd> out(freq.size());
  for (std::size_t i = 0; i < freq.size(); ++i) {
    cd acc{};
    for (int n = -g.n_max; n <= g.n_max; ++n) {
      const cd c = coef[static_cast<std::size_t>(n + g.n_max)];
      if (std::abs(c) < 1e-15 * cmax) continue;
      const double nu = -kTwoPi * (freq[i] - h.F - n / h.period);
      acc += c * exp_integral(nu, h.start, h.start + h.duration);
    }
    out[i] = amp * acc;
  }
  return out;
}

std::vector<cd> naaf_impl(const HarmonicPhase& h, std::span<const double> delay, std::span<const double> phi,
                          bool bessel) {
  const std::size_t nd = delay.size();
  std::vector<cd> out(phi.size() * nd);
  std::vector<double> X, Y;
  const double lo0 = h.start, hi0 = h.start + h.duration;
  for (std::size_t c = 0; c < nd; ++c) {
    const double tau = delay[c];
    const double lo = std::max(lo0, lo0 - tau), hi = std::min(hi0, hi0 - tau);
    if (hi <= lo) continue;
    shifted_args(h, tau, X, Y);
    const auto g = make_gbf(X, Y, bessel);
    const cd pre = std::polar(1.0 / h.duration, -kTwoPi * h.F * tau);
    std::vector<cd> coef;
    double cmax = 0.0;
    for (int n = -g.n_max; n <= g.n_max; ++n) {
      coef.push_back(g.at(n) * std::polar(1.0, kPi * n * tau / h.period));
      cmax = std::max(cmax, std::abs(coef.back()));
    }
    for (std::size_t r = 0; r < phi.size(); ++r) {
      cd acc{};
      for (int n = -g.n_max; n <= g.n_max; ++n) {
        const cd cn = coef[static_cast<std::size_t>(n + g.n_max)];
        if (std::abs(cn) < 1e-15 * cmax) continue;
        acc += cn * exp_integral(kTwoPi * (n / h.period + phi[r]), lo, hi);
      }
      out[r * nd + c] = pre * acc;
    }
  }
  return out;
}

std::vector<cd> baaf_impl(const HarmonicPhase& h, std::span<const double> delay, std::span<const double> eta,
                          bool bessel) {
  const std::size_t nd = delay.size();
  std::vector<cd> out(eta.size() * nd);
  std::vector<double> X, Y;
  const double lo0 = h.start, hi0 = h.start + h.duration;
  for (std::size_t r = 0; r < eta.size(); ++r) {
    const double e = eta[r];
    require(e > 0.0, "analytic BAAF: eta must be > 0");
    for (std::size_t c = 0; c < nd; ++c) {
      const double tau = delay[c];
      const double lo = std::max(lo0, lo0 / e - tau), hi = std::min(hi0, hi0 / e - tau);
      if (hi <= lo) continue;
      shifted_args(h, e * tau, X, Y);
      const auto g = make_gbf(X, Y, bessel);
      cd acc{};
      for (int n = -g.n_max; n <= g.n_max; ++n) {
        const cd cn = g.at(n);
        if (std::abs(cn) < 1e-15) continue;
        const double nu = kTwoPi * h.F * (1.0 - e) + kPi * n * (1.0 + e) / h.period;
        acc += cn * std::polar(1.0, kPi * n * e * tau / h.period) * exp_integral(nu, lo, hi);
      }
      out[r * nd + c] = std::sqrt(e) / h.duration * std::polar(1.0, -kTwoPi * h.F * e * tau) * acc;
    }
  }
  return out;
}

}  // namespace

HarmonicPhase harmonic_phase(const GsfmParams& p, std::size_t M) {
  const auto fsr = gsfm_fourier_coeffs(p, M);
  HarmonicPhase h;
  h.period = fsr.period;
  h.duration = p.duration;
  h.start = p.symmetry == IfSymmetry::even ? -0.5 * p.duration : 0.0;
  h.F = p.carrier + fsr.a0 * p.bandwidth / 4.0;
  const double A = p.bandwidth * fsr.period / 2.0;
  for (std::size_t m = 0; m < fsr.harmonics(); ++m) {
    h.P.push_back(A * fsr.a[m] / static_cast<double>(m + 1));
    h.Q.push_back(A * fsr.b[m] / static_cast<double>(m + 1));
  }
  return h;
}

HarmonicPhase harmonic_phase(const SfmParams& p) {
  require(p.mod_freq > 0.0 && p.duration > 0.0, "SFM: f_m and T must be > 0");
  HarmonicPhase h;
  h.period = 1.0 / p.mod_freq;
  h.duration = p.duration;
  h.start = p.origin == TimeOrigin::centered ? -0.5 * p.duration : 0.0;
  h.F = p.carrier;
  const double beta = p.bandwidth / (2.0 * p.mod_freq);
  if (p.phase == SfmParams::Phase::sine) {
    h.P = {beta};
    h.Q = {0.0};
  } else {
    h.P = {0.0};
    h.Q = {-beta};
  }
  return h;
}

std::vector<cd> analytic_spectrum(const HarmonicPhase& h, std::span<const double> freq) {
  return spectrum_impl(h, freq, false);
}
std::vector<cd> analytic_naaf(const HarmonicPhase& h, std::span<const double> delay, std::span<const double> phi) {
  return naaf_impl(h, delay, phi, false);
}
std::vector<cd> analytic_baaf(const HarmonicPhase& h, std::span<const double> delay, std::span<const double> eta) {
  return baaf_impl(h, delay, eta, false);
}
std::vector<cd> sfm_spectrum(const SfmParams& p, std::span<const double> freq) {
  return spectrum_impl(harmonic_phase(p), freq, true);
}
std::vector<cd> sfm_naaf(const SfmParams& p, std::span<const double> delay, std::span<const double> phi) {
  return naaf_impl(harmonic_phase(p), delay, phi, true);
}
std::vector<cd> sfm_baaf(const SfmParams& p, std::span<const double> delay, std::span<const double> eta) {
  return baaf_impl(harmonic_phase(p), delay, eta, true);
}

}  // namespace gsfm
