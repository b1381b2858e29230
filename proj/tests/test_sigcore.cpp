#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "gsfm/errors.hpp"
#include "gsfm/fft.hpp"
#include "gsfm/resample.hpp"
#include "gsfm/wavegen.hpp"
#include "oracles.hpp"

using namespace gsfm;

namespace {

Waveform cw(double T, double fc, double fs, TaperSpec taper = {}) {
  ClassicParams p;
  p.kind = ClassicKind::cw;
  p.duration = T;
  p.carrier = fc;
  p.bandwidth = 0.0;
  p.sample_rate = fs;
  p.taper = taper;
  return gen_classic(p);
}

double rms_diff(const std::vector<cd>& a, const std::vector<cd>& b, std::size_t lo, std::size_t hi) {
  double e = 0, n = 0;
  for (std::size_t i = lo; i < hi; ++i) {
    e += std::norm(a[i] - b[i]);
    n += std::norm(a[i]);
  }
  return std::sqrt(e / n);
}

}  // namespace

TEST_CASE("fft: round trip and direct DFT") {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  std::vector<cd> x(60);
  for (auto& v : x) v = {g(rng), g(rng)};
  auto y = x;
  fft::forward(y);
  for (int k : {0, 7, 31}) {
    cd d = 0;
    for (int n = 0; n < 60; ++n) d += x[n] * std::polar(1.0, -2 * M_PI * k * n / 60.0);
    CHECK(std::abs(y[k] - d) < 1e-10);
  }
  fft::inverse(y);
  for (int i = 0; i < 60; ++i) CHECK(std::abs(y[i] - x[i]) < 1e-12);
  CHECK(fft::fast_length(1031) == 1050);
  CHECK(fft::next_pow2(1025) == 2048);
}

TEST_CASE("fft: xcorr matches the direct sum") {
  std::vector<cd> a{{1, 2}, {0, -1}, {3, 0}}, b{{2, 0}, {1, 1}, {0, 0}, {-1, 4}};
  const auto c = fft::xcorr(a, b);
  REQUIRE(c.size() == a.size() + b.size() - 1);
  for (int k = -2; k <= 3; ++k) {
    cd d = 0;
    for (int i = 0; i < 3; ++i)
      if (i + k >= 0 && i + k < 4) d += a[i] * std::conj(b[i + k]);
    CHECK(std::abs(c[k + 2] - d) < 1e-12);
  }
}

TEST_CASE("waveform: midpoint sampling and sample count") {
  auto w = cw(0.5, 1000, 8000);
  CHECK(w.size() == 4000);
  CHECK(w.time_at(0) == doctest::Approx(0.5 / 8000));
  CHECK(sample_count(0.25, 4000) == 1000);
}

TEST_CASE("normalize_energy: unit energy, idempotent, scale invariant") {
  auto w = cw(0.5, 1000, 8000);
  CHECK(w.energy() == doctest::Approx(1.0).epsilon(1e-12));
  // A CW of unit energy has amplitude 1/√T.
  CHECK(std::abs(w.samples[100]) == doctest::Approx(1 / std::sqrt(0.5)).epsilon(1e-12));
  auto v = w;
  for (auto& s : v.samples) s *= cd(3.0, -2.0);
  normalize_energy(v);
  for (std::size_t i = 0; i < w.size(); i += 97) CHECK(std::abs(std::abs(v.samples[i]) - std::abs(w.samples[i])) < 1e-12);
  normalize_energy(v);
  CHECK(v.energy() == doctest::Approx(1.0).epsilon(1e-14));
  auto z = w;
  for (auto& s : z.samples) s = 0;
  CHECK_THROWS_AS(normalize_energy(z), DomainError);
}

TEST_CASE("windows: identities") {
  for (double x : {0.0, 0.1, 0.5, 0.77, 1.0}) {
    CHECK(window_value(TaperSpec::rectangular(), x) == 1.0);
    CHECK(window_value(TaperSpec::tukey(0.0), x) == doctest::Approx(1.0));
    CHECK(window_value(TaperSpec::tukey(1.0), x) == doctest::Approx(window_value(TaperSpec::hanning(), x)).epsilon(1e-12));
    CHECK(window_value(TaperSpec::kaiser(0.0), x) == doctest::Approx(1.0));
    CHECK(window_value(TaperSpec::hanning(), x) == doctest::Approx(0.5 - 0.5 * std::cos(2 * M_PI * x)).epsilon(1e-12));
  }
  for (auto spec : {TaperSpec::tukey(0.3), TaperSpec::hanning(), TaperSpec::kaiser(8.0)}) {
    const auto v = window(spec, 501);
    CHECK(*std::max_element(v.begin(), v.end()) == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(*std::min_element(v.begin(), v.end()) >= 0.0);
    for (std::size_t i = 0; i < v.size(); ++i) CHECK(v[i] == doctest::Approx(v[v.size() - 1 - i]).epsilon(1e-12));
  }
}

TEST_CASE("papr: closed-form values") {
  // Rectangular CW: peak 1, mean cos² = 1/2.
  CHECK(papr_db(cw(0.5, 1000, 16000)) == doctest::Approx(10 * std::log10(2.0)).epsilon(0.05 / 3.01));
  // Hanning CW: peak 1, mean hann² cos² = (3/8)(1/2), so 10 log10(16/3) = 7.27 dB.
  const double hann_oracle = 10 * std::log10(16.0 / 3.0);
  CHECK(hann_oracle == doctest::Approx(7.27).epsilon(1e-3));
  CHECK(papr_db(cw(0.5, 1000, 16000, TaperSpec::hanning())) == doctest::Approx(hann_oracle).epsilon(0.01));
}

TEST_CASE("papr: tapering never lowers the CW PAPR") {
  const double rect = papr_db(cw(0.5, 1000, 16000));
  for (auto t : {TaperSpec::tukey(0.1), TaperSpec::tukey(0.5), TaperSpec::kaiser(4), TaperSpec::hanning()}) {
    CHECK(papr_db(cw(0.5, 1000, 16000, t)) >= rect - 1e-3);
  }
}

TEST_CASE("spectral density: Parseval, containment and CW nulls") {
  auto w = cw(0.5, 1000, 8000);
  SpectralDensity sd(w);
  double e = 0;
  for (double d : sd.density()) e += d * sd.bin_width();
  CHECK(e == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(sd.containment(0.5 * (sd.f_lo() + sd.f_hi()), sd.f_hi() - sd.f_lo()) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(sd.centroid() == doctest::Approx(1000).epsilon(1e-3));
  double prev = 0;
  for (double width : {1.0, 4.0, 10.0, 50.0, 200.0}) {
    const double c = sd.containment(1000, width);
    CHECK(c >= prev);
    prev = c;
  }
  // Main lobe of a rectangular CW spans 2/T null to null; sinc² holds 90.3% inside.
  const double sinc_main = oracle::integrate([](double x) { return x == 0 ? 1.0 : std::pow(std::sin(M_PI * x) / (M_PI * x), 2); }, -1, 1);
  CHECK(sd.containment(1000, 2 / 0.5) == doctest::Approx(sinc_main).epsilon(2e-3));
  CHECK(percent_bandwidth(w, 0.5) < percent_bandwidth(w, 0.9));
}

TEST_CASE("doppler: velocity conversions") {
  CHECK(eta_from_velocity(25, 1500) == doctest::Approx(1525.0 / 1475.0).epsilon(1e-14));
  CHECK(eta_from_velocity(25, 1500) == doctest::Approx(1.0339).epsilon(1e-4));
  CHECK(velocity_from_eta(eta_from_velocity(-7.5, 1500), 1500) == doctest::Approx(-7.5).epsilon(1e-12));
  CHECK(doppler_shift(3, 2000, 1500) == doctest::Approx(8.0).epsilon(1e-14));
}

TEST_CASE("doppler_scale: identity, energy and round trip") {
  ClassicParams p;
  p.kind = ClassicKind::lfm;
  p.duration = 0.25;
  p.carrier = 2000;
  p.bandwidth = 200;
  p.taper = TaperSpec::tukey(0.2);
  const auto w = gen_classic(p);
  const auto same = doppler_scale(w, 1.0);
  CHECK(rms_diff(w.samples, same.samples, 0, w.size()) < 1e-6);
  for (double eta : {0.97, 0.99, 1.013, 1.03}) {
    const auto s = doppler_scale(w, eta);
    CHECK(s.energy() == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(s.duration == doctest::Approx(w.duration / eta));
    const auto back = doppler_scale(s, 1 / eta);
    const std::size_t n = std::min(back.size(), w.size());
    CHECK(rms_diff(w.samples, back.samples, 20, n - 20) < 1e-4);
  }
  CHECK_THROWS_AS(doppler_scale(w, 0.0), DomainError);
  CHECK_THROWS_AS(doppler_scale(w, -1.0), DomainError);
}

TEST_CASE("doppler_scale: matches the closed-form scaled LFM") {
  ClassicParams p;
  p.kind = ClassicKind::lfm;
  p.duration = 0.25;
  p.carrier = 2000;
  p.bandwidth = 200;
  p.taper = TaperSpec::hanning();
  const auto w = gen_classic(p);
  const double eta = 1.02, T = p.duration, k = p.bandwidth / T;
  // s(t) = hann(t/T) exp(j[2πf_c t + πk(t - T/2)²]) / norm, scaled to √η s(ηt).
  auto s = [&](double t) -> cd {
    if (t < 0 || t > T) return 0;
    return (0.5 - 0.5 * std::cos(2 * M_PI * t / T)) * std::polar(1.0, 2 * M_PI * p.carrier * t + M_PI * k * (t - T / 2) * (t - T / 2));
  };
  const double norm = std::sqrt(0.375 * T);
  const auto d = doppler_scale(w, eta);
  double e = 0, n = 0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const cd ref = std::sqrt(eta) * s(eta * d.time_at(i)) / norm;
    e += std::norm(d.samples[i] - ref);
    n += std::norm(ref);
  }
  CHECK(std::sqrt(e / n) < 1e-3);
}

TEST_CASE("sinc interpolator: reproduces samples and band-limited tones") {
  std::vector<cd> x(256);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::polar(1.0, 2 * M_PI * 0.11 * i);
  const auto& si = sinc_interpolator();
  for (int k : {40, 100, 200}) CHECK(std::abs(si(x, k) - x[k]) < 1e-9);
  for (double pos : {50.25, 99.5, 170.875}) CHECK(std::abs(si(x, pos) - std::polar(1.0, 2 * M_PI * 0.11 * pos)) < 1e-4);
  CHECK(std::abs(si(x, -30.0)) < 1e-12);
}

TEST_CASE("spectrogram: LFM ridge follows the IF") {
  ClassicParams p;
  p.kind = ClassicKind::lfm;
  p.duration = 1.0;
  p.carrier = 2000;
  p.bandwidth = 500;
  p.sample_rate = 8000;
  const auto sg = spectrogram(gen_classic(p));
  const std::size_t nf = sg.freq.size();
  for (std::size_t r = sg.time.size() / 4; r < 3 * sg.time.size() / 4; r += 5) {
    std::size_t best = 0;
    for (std::size_t c = 0; c < nf; ++c)
      if (sg.power_db[r * nf + c] > sg.power_db[r * nf + best]) best = c;
    const double expected = 1750 + 500 * sg.time[r];
    CHECK(std::fabs(sg.freq[best] - expected) < 40.0);
  }
}
