#include "gsfm/waveform.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gsfm/errors.hpp"
#include "gsfm/fft.hpp"
#include "gsfm/resample.hpp"

namespace gsfm {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

}  // namespace

double Waveform::energy() const {
  double e = 0.0;
  for (const auto& v : samples) e += std::norm(v);
  return e / sample_rate;
}

std::vector<cd> Waveform::baseband() const {
  std::vector<cd> m(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i)
    m[i] = samples[i] * std::polar(1.0, -kTwoPi * carrier * time_at(i));
  return m;
}

std::size_t sample_count(double duration, double sample_rate) {
  require(std::isfinite(duration) && duration > 0.0, "duration must be > 0");
  require(std::isfinite(sample_rate) && sample_rate > 0.0, "sample_rate must be > 0");
  const double n = std::round(duration * sample_rate);
  require(n >= 2.0, "waveform needs at least 2 samples");
  return static_cast<std::size_t>(n);
}

Waveform from_baseband(std::vector<cd> m, double sample_rate, double duration, double carrier,
                       TimeOrigin origin, std::string label) {
  Waveform w;
  w.sample_rate = sample_rate;
  w.duration = duration;
  w.carrier = carrier;
  w.origin = origin;
  w.label = std::move(label);
  require(m.size() == sample_count(duration, sample_rate), "sample count must equal round(T*fs)");
  for (std::size_t i = 0; i < m.size(); ++i) m[i] *= std::polar(1.0, kTwoPi * carrier * w.time_at(i));
  w.samples = std::move(m);
  return w;
}

void normalize_energy(Waveform& w) {
  const double e = w.energy();
  require(e > 0.0, "cannot normalize a zero-energy waveform");
  const double g = 1.0 / std::sqrt(e);
  for (auto& v : w.samples) v *= g;
}

double window_value(const TaperSpec& spec, double x) {
  x = std::clamp(x, 0.0, 1.0);
  switch (spec.kind) {
    case TaperSpec::Kind::rectangular:
      return 1.0;
    case TaperSpec::Kind::hanning:
      return 0.5 * (1.0 - std::cos(kTwoPi * x));
    case TaperSpec::Kind::tukey: {
      const double r = 0.5 * spec.shape;
      if (r <= 0.0) return 1.0;
      if (x < r) return 0.5 * (1.0 - std::cos(std::numbers::pi * x / r));
      if (x > 1.0 - r) return 0.5 * (1.0 - std::cos(std::numbers::pi * (1.0 - x) / r));
      return 1.0;
    }
    case TaperSpec::Kind::kaiser: {
      const double u = 2.0 * x - 1.0;
      return std::cyl_bessel_i(0.0, spec.shape * std::sqrt(std::max(0.0, 1.0 - u * u))) /
             std::cyl_bessel_i(0.0, spec.shape);
    }
  }
  return 1.0;
}

std::vector<double> window(const TaperSpec& spec, std::size_t n) {
  if (spec.kind == TaperSpec::Kind::tukey)
    require(spec.shape >= 0.0 && spec.shape <= 1.0, "Tukey taper fraction must lie in [0, 1]");
  if (spec.kind == TaperSpec::Kind::kaiser) require(spec.shape >= 0.0, "Kaiser beta must be >= 0");
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = window_value(spec, (i + 0.5) / static_cast<double>(n));
  return out;
}

Waveform apply_taper(const Waveform& w, const TaperSpec& spec, TaperDomain domain, double band) {
  Waveform out = w;
  const std::size_t n = w.size();
  if (domain == TaperDomain::time) {
    const auto win = window(spec, n);
    for (std::size_t i = 0; i < n; ++i) out.samples[i] *= win[i];
    return out;
  }
  (void)window(spec, 2);  // parameter validation
  SpectralDensity sd(w);
  const double centroid = sd.centroid();
  if (band <= 0.0) band = sd.percent_bandwidth(centroid, 0.999);
  const double fs = w.sample_rate;
  auto m = w.baseband();
  const std::size_t L = fft::fast_length(2 * n);
  std::vector<cd> buf(L);
  std::copy(m.begin(), m.end(), buf.begin());
  fft::forward(buf);
  for (std::size_t k = 0; k < L; ++k) {
    const double kk = k < (L + 1) / 2 ? static_cast<double>(k) : static_cast<double>(k) - static_cast<double>(L);
    const double f = w.carrier + kk * fs / static_cast<double>(L);
    buf[k] *= window_value(spec, (f - centroid) / band + 0.5);
  }
  fft::inverse(buf);
  std::copy(buf.begin(), buf.begin() + static_cast<long>(n), m.begin());
  return from_baseband(std::move(m), w.sample_rate, w.duration, w.carrier, w.origin, w.label);
}

SpectralDensity::SpectralDensity(const Waveform& w, std::size_t min_length) {
  const std::size_t n = w.size();
  const std::size_t L = fft::next_pow2(std::max(min_length, 8 * n));
  std::vector<cd> buf(L);
  auto m = w.baseband();
  std::copy(m.begin(), m.end(), buf.begin());
  fft::forward(buf);
  df_ = w.sample_rate / static_cast<double>(L);
  const double dt = w.dt();
  freq_.resize(L);
  density_.resize(L);
  cdf_.resize(L + 1);
  const long half = static_cast<long>(L / 2);
  for (long j = 0; j < static_cast<long>(L); ++j) {
    const long k = j - half;
    const std::size_t src = static_cast<std::size_t>(k >= 0 ? k : k + static_cast<long>(L));
    freq_[j] = w.carrier + static_cast<double>(k) * df_;
    density_[j] = std::norm(buf[src] * dt);
  }
  cdf_[0] = 0.0;
  for (std::size_t j = 0; j < L; ++j) cdf_[j + 1] = cdf_[j] + density_[j] * df_;
  total_ = cdf_[L];
}

double SpectralDensity::cumulative(double f) const {
  const double u = (f - f_lo()) / df_;
  if (u <= 0.0) return 0.0;
  const auto n = density_.size();
  if (u >= static_cast<double>(n)) return total_;
  const auto i = static_cast<std::size_t>(u);
  return cdf_[i] + (u - static_cast<double>(i)) * density_[i] * df_;
}

double SpectralDensity::containment(double center, double width) const {
  require(width > 0.0, "containment band width must be > 0");
  const double lo = center - 0.5 * width, hi = center + 0.5 * width;
  require(lo >= f_lo() - df_ && hi <= f_hi() + df_, "containment band lies outside the Nyquist range");
  require(total_ > 0.0, "zero-energy waveform");
  return std::clamp((cumulative(hi) - cumulative(lo)) / total_, 0.0, 1.0);
}

double SpectralDensity::percent_bandwidth(double center, double p) const {
  require(p > 0.0 && p <= 1.0, "percent_bandwidth: p must lie in (0, 1]");
  const double wmax = 2.0 * std::min(center - f_lo(), f_hi() - center);
  require(wmax > 0.0, "percent_bandwidth: centre frequency outside the Nyquist range");
  require(containment(center, wmax) >= p * (1.0 - 1e-12), "percent_bandwidth: fraction not reachable");
  double lo = 0.0, hi = wmax;
  for (int it = 0; it < 100 && hi - lo > 1e-12 * wmax; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (containment(center, mid) >= p)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

double SpectralDensity::centroid() const {
  double num = 0.0, den = 0.0;
  for (std::size_t j = 0; j < freq_.size(); ++j) {
    num += freq_[j] * density_[j];
    den += density_[j];
  }
  require(den > 0.0, "zero-energy waveform");
  return num / den;
}

double spectral_containment(const Waveform& w, double center, double width) {
  return SpectralDensity(w).containment(center, width);
}

double percent_bandwidth(const Waveform& w, double p) {
  return SpectralDensity(w).percent_bandwidth(w.carrier, p);
}

double papr_db(const Waveform& w) {
  const double half_band = 0.5 * SpectralDensity(w).percent_bandwidth(w.carrier, 0.98);
  require(w.sample_rate >= 4.0 * (std::fabs(w.carrier) + half_band),
          "papr: sample rate must be at least 4x the highest occupied frequency");
  const std::size_t n = w.size();
  double mean = 0.0, peak = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = w.samples[i].real();
    mean += x * x;
    peak = std::max(peak, x * x);
  }
  mean /= static_cast<double>(n);
  // Between samples the envelope and phase are interpolated linearly; the
  // real part peaks wherever the phase crosses a multiple of π.
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double a0 = std::abs(w.samples[i]), a1 = std::abs(w.samples[i + 1]);
    if (a0 == 0.0 || a1 == 0.0) continue;
    const double ph0 = std::arg(w.samples[i]);
    const double dph = std::arg(w.samples[i + 1] * std::conj(w.samples[i]));
    if (dph == 0.0) continue;
    const double lo = std::min(ph0, ph0 + dph), hi = std::max(ph0, ph0 + dph);
    const double k = std::ceil(lo / std::numbers::pi);
    const double cross = k * std::numbers::pi;
    if (cross <= hi) {
      const double a = a0 + (a1 - a0) * (cross - ph0) / dph;
      peak = std::max(peak, a * a);
    }
  }
  require(mean > 0.0, "papr: zero-power waveform");
  return 10.0 * std::log10(peak / mean);
}

Waveform doppler_scale(const Waveform& w, double eta) {
  require(std::isfinite(eta) && eta > 0.0, "doppler_scale: eta must be > 0");
  const double T2 = w.duration / eta;
  const std::size_t n2 = sample_count(T2, w.sample_rate);
  Waveform out;
  out.sample_rate = w.sample_rate;
  out.duration = T2;
  out.carrier = w.carrier * eta;
  out.origin = w.origin;
  out.label = w.label;
  std::vector<double> u(n2);
  for (std::size_t i = 0; i < n2; ++i) u[i] = eta * out.time_at(i);
  const auto m = w.baseband();
  auto y = interpolate_at(m, w.start_time(), w.sample_rate, u);
  const double g = std::sqrt(eta);
  for (std::size_t i = 0; i < n2; ++i) y[i] *= g * std::polar(1.0, kTwoPi * w.carrier * u[i]);
  out.samples = std::move(y);
  return out;
}

Spectrogram spectrogram(const Waveform& w, double window_fraction, double overlap) {
  require(window_fraction > 0.0 && window_fraction <= 1.0, "spectrogram: window fraction must lie in (0, 1]");
  require(overlap >= 0.0 && overlap < 1.0, "spectrogram: overlap must lie in [0, 1)");
  const std::size_t n = w.size();
  const std::size_t lw = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::llround(window_fraction * static_cast<double>(n))), 8, n);
  const std::size_t hop = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(lw * (1.0 - overlap))));
  const std::size_t nfft = fft::next_pow2(4 * lw);
  const auto win = window(TaperSpec::hanning(), lw);
  const auto m = w.baseband();
  Spectrogram sg;
  const long half = static_cast<long>(nfft / 2);
  for (long k = -half; k < half; ++k)
    sg.freq.push_back(w.carrier + static_cast<double>(k) * w.sample_rate / static_cast<double>(nfft));
  std::vector<cd> buf(nfft);
  double pmax = 0.0;
  for (std::size_t start = 0; start + lw <= n; start += hop) {
    std::fill(buf.begin(), buf.end(), cd{});
    for (std::size_t i = 0; i < lw; ++i) buf[i] = m[start + i] * win[i];
    fft::forward(buf);
    sg.time.push_back(w.start_time() + (static_cast<double>(start) + 0.5 * lw) / w.sample_rate);
    for (long k = -half; k < half; ++k) {
      const double p = std::norm(buf[static_cast<std::size_t>(k >= 0 ? k : k + static_cast<long>(nfft))]);
      sg.power_db.push_back(p);
      pmax = std::max(pmax, p);
    }
  }
  for (auto& p : sg.power_db) p = 10.0 * std::log10(std::max(p / pmax, 1e-30));
  return sg;
}

double eta_from_velocity(double v, double c) {
  require(c > 0.0 && std::fabs(v) < c, "velocity must be smaller than the propagation speed");
  return (1.0 + v / c) / (1.0 - v / c);
}

double velocity_from_eta(double eta, double c) { return c * (eta - 1.0) / (eta + 1.0); }

double doppler_shift(double v, double carrier, double c) { return 2.0 * v * carrier / c; }

}  // namespace gsfm
