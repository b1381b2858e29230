#include "gsfm/ambiguity.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gsfm/errors.hpp"
#include "gsfm/fft.hpp"
#include "gsfm/resample.hpp"

namespace gsfm {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::size_t nearest_index(const std::vector<double>& v, double x) {
  require(!v.empty(), "empty grid");
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (std::fabs(v[i] - x) < std::fabs(v[best] - x)) best = i;
  return best;
}

}  // namespace

std::vector<double> velocity_grid(double vmax, double step) {
  require(vmax >= 0.0 && step > 0.0, "velocity grid: vmax >= 0 and step > 0 required");
  const auto n = static_cast<long>(std::floor(vmax / step + 1e-9));
  std::vector<double> v;
  for (long i = -n; i <= n; ++i) v.push_back(static_cast<double>(i) * step);
  return v;
}

std::size_t AmbiguitySurface::origin_col() const { return nearest_index(delay, 0.0); }
std::size_t AmbiguitySurface::origin_row() const { return nearest_index(velocity, 0.0); }
double AmbiguitySurface::peak() const { return *std::max_element(magnitude.begin(), magnitude.end()); }

double doppler_value(AfModel model, double velocity, double carrier, double c) {
  return model == AfModel::broadband ? eta_from_velocity(velocity, c) : doppler_shift(velocity, carrier, c);
}

XafEngine::XafEngine(const Waveform& w1, const Waveform& w2, AfModel model)
    : model_(model),
      fs_(w1.sample_rate),
      t0_(w1.start_time()),
      f1_(w1.carrier),
      f2_(w2.carrier),
      start2_(w2.start_time()),
      dur2_(w2.duration),
      m1_(w1.baseband()),
      m2_(w2.baseband()) {
  require(std::fabs(w1.sample_rate - w2.sample_rate) <= 1e-9 * w1.sample_rate,
          "cross-ambiguity needs equal sample rates");
  t1_.resize(m1_.size());
  for (std::size_t i = 0; i < m1_.size(); ++i) t1_[i] = w1.time_at(i);
  const double off = (start2_ - t0_) * fs_;
  aligned_ = std::fabs(off - std::round(off)) < 1e-9;
}

std::vector<std::complex<double>> XafEngine::second(double d, long& j0) const {
  const double eta = model_ == AfModel::broadband ? d : 1.0;
  require(eta > 0.0, "Doppler scale must be > 0");
  if (model_ == AfModel::narrowband && aligned_) {
    j0 = std::lround((start2_ - t0_) * fs_);
    return m2_;
  }
  const double lo = start2_ / eta, hi = (start2_ + dur2_) / eta;
  const long jlo = static_cast<long>(std::floor((lo - t0_) * fs_ - 0.5)) - 9;
  const long jhi = static_cast<long>(std::ceil((hi - t0_) * fs_ - 0.5)) + 9;
  j0 = jlo;
  std::vector<double> times(static_cast<std::size_t>(jhi - jlo + 1));
  for (long j = jlo; j <= jhi; ++j)
    times[static_cast<std::size_t>(j - jlo)] = eta * (t0_ + (static_cast<double>(j) + 0.5) / fs_);
  return interpolate_at(m2_, start2_, fs_, times);
}

std::vector<std::complex<double>> XafEngine::full_row(double d, long& first_lag) const {
  long j0 = 0;
  const auto b = second(d, j0);
  const double eta = model_ == AfModel::broadband ? d : 1.0;
  const double shift = model_ == AfModel::broadband ? f1_ - eta * f2_ : f1_ - f2_ + d;
  std::vector<std::complex<double>> a(m1_.size());
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = m1_[i] * std::polar(1.0, kTwoPi * shift * t1_[i]);
  auto c = fft::xcorr(a, b);
  const long na = static_cast<long>(a.size());
  first_lag = j0 - (na - 1);
  const double g = std::sqrt(eta) / fs_;
  for (std::size_t idx = 0; idx < c.size(); ++idx) {
    const double tau = static_cast<double>(first_lag + static_cast<long>(idx)) / fs_;
    c[idx] *= g * std::polar(1.0, -kTwoPi * f2_ * eta * tau);
  }
  return c;
}

std::vector<std::complex<double>> XafEngine::row(double d, long max_lag) const {
  long first = 0;
  const auto c = full_row(d, first);
  std::vector<std::complex<double>> out(static_cast<std::size_t>(2 * max_lag + 1));
  for (long k = -max_lag; k <= max_lag; ++k) {
    const long idx = k - first;
    if (idx >= 0 && idx < static_cast<long>(c.size())) out[static_cast<std::size_t>(k + max_lag)] = c[static_cast<std::size_t>(idx)];
  }
  return out;
}

std::complex<double> XafEngine::zero_delay(double d) const {
  long j0 = 0;
  const auto b = second(d, j0);
  const double eta = model_ == AfModel::broadband ? d : 1.0;
  const double shift = model_ == AfModel::broadband ? f1_ - eta * f2_ : f1_ - f2_ + d;
  std::complex<double> acc{};
  for (std::size_t i = 0; i < m1_.size(); ++i) {
    const long j = static_cast<long>(i) - j0;
    if (j < 0 || j >= static_cast<long>(b.size())) continue;
    acc += m1_[i] * std::polar(1.0, kTwoPi * shift * t1_[i]) * std::conj(b[static_cast<std::size_t>(j)]);
  }
  return acc * std::sqrt(eta) / fs_;
}

namespace {

struct DelayAxis {
  long max_lag;
  std::vector<long> lags;
};

DelayAxis delay_axis(double max_delay, double fs, std::size_t stride) {
  require(stride >= 1, "delay stride must be >= 1");
  require(max_delay > 0.0, "max delay must be > 0");
  DelayAxis ax;
  const long s = static_cast<long>(stride);
  ax.max_lag = std::lround(max_delay * fs);
  const long kmax = (ax.max_lag / s) * s;
  for (long k = -kmax; k <= kmax; k += s) ax.lags.push_back(k);
  return ax;
}

AmbiguitySurface make_surface(AfModel model, const std::vector<double>& vel, double carrier, double c,
                              const DelayAxis& ax, double fs) {
  AmbiguitySurface s;
  s.model = model;
  s.velocity = vel;
  for (double v : vel) s.doppler.push_back(doppler_value(model, v, carrier, c));
  for (long k : ax.lags) s.delay.push_back(static_cast<double>(k) / fs);
  s.magnitude.assign(s.rows() * s.cols(), 0.0);
  return s;
}

}  // namespace

AmbiguitySurface xaf(const Waveform& w1, const Waveform& w2, const AfOptions& opt) {
  const auto vel = opt.velocities.empty() ? velocity_grid(20.0, 0.25) : opt.velocities;
  const auto ax = delay_axis(opt.max_delay > 0.0 ? opt.max_delay : w1.duration, w1.sample_rate, opt.delay_stride);
  auto s = make_surface(opt.model, vel, w1.carrier, opt.sound_speed, ax, w1.sample_rate);
  XafEngine eng(w1, w2, opt.model);
  for (std::size_t r = 0; r < s.rows(); ++r) {
    const auto row = eng.row(s.doppler[r], ax.max_lag);
    for (std::size_t c = 0; c < s.cols(); ++c)
      s.at(r, c) = std::abs(row[static_cast<std::size_t>(ax.lags[c] + ax.max_lag)]);
  }
  return s;
}

AmbiguitySurface xaf(const Waveform& w, const AfOptions& opt) { return xaf(w, w, opt); }

QFunction qfunction(const AmbiguitySurface& s) {
  require(s.cols() >= 2, "Q-function needs at least two delay samples");
  QFunction q;
  q.velocity = s.velocity;
  for (std::size_t r = 0; r < s.rows(); ++r) {
    double acc = 0.0;
    for (std::size_t c = 0; c + 1 < s.cols(); ++c) {
      const double a = s.at(r, c), b = s.at(r, c + 1);
      acc += 0.5 * (a * a + b * b) * (s.delay[c + 1] - s.delay[c]);
    }
    q.q.push_back(acc);
    q.q_db.push_back(10.0 * std::log10(std::max(acc, 1e-300)));
  }
  return q;
}

AmbiguitySurface composite_af(const std::vector<Waveform>& pulses, double pri, const AfOptions& opt) {
  require(!pulses.empty(), "composite AF needs at least one pulse");
  const double fs = pulses.front().sample_rate;
  const double pf = pri * fs;
  const long P = std::lround(pf);
  require(P >= 1 && std::fabs(pf - static_cast<double>(P)) < 1e-6, "PRI must be a whole number of samples");
  const auto N = static_cast<long>(pulses.size());
  const auto vel = opt.velocities.empty() ? velocity_grid(20.0, 0.25) : opt.velocities;
  const auto ax = delay_axis(opt.max_delay > 0.0 ? opt.max_delay : static_cast<double>(N) * pri, fs, opt.delay_stride);
  auto s = make_surface(opt.model, vel, pulses.front().carrier, opt.sound_speed, ax, fs);
  const long K = ax.max_lag;
  for (std::size_t r = 0; r < s.rows(); ++r) {
    std::vector<std::complex<double>> acc(static_cast<std::size_t>(2 * K + 1));
    for (long m = 0; m < N; ++m) {
      for (long n = 0; n < N; ++n) {
        XafEngine eng(pulses[static_cast<std::size_t>(m)], pulses[static_cast<std::size_t>(n)], opt.model);
        long first = 0;
        const auto c = eng.full_row(s.doppler[r], first);
        for (std::size_t idx = 0; idx < c.size(); ++idx) {
          const long k = first + static_cast<long>(idx) - (m - n) * P;
          if (k >= -K && k <= K) acc[static_cast<std::size_t>(k + K)] += c[idx];
        }
      }
    }
    for (std::size_t c = 0; c < s.cols(); ++c)
      s.at(r, c) = std::abs(acc[static_cast<std::size_t>(ax.lags[c] + K)]) / static_cast<double>(N);
  }
  return s;
}

}  // namespace gsfm
