#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gsfm/ambiguity.hpp"
#include "gsfm/errors.hpp"
#include "gsfm/wavegen.hpp"
#include "oracles.hpp"

using namespace gsfm;

namespace {

// Instantaneous frequency from the phase difference of neighbouring samples.
std::vector<double> measured_if(const Waveform& w) {
  std::vector<double> f(w.size(), 0.0);
  for (std::size_t i = 1; i < w.size(); ++i)
    f[i] = std::arg(w.samples[i] * std::conj(w.samples[i - 1])) * w.sample_rate / (2 * M_PI);
  return f;
}

// Brute-force check: all displacement vectors (i-j, c_i-c_j) are distinct.
bool costas_brute(const std::vector<int>& c) {
  const int n = static_cast<int>(c.size());
  std::vector<int> sorted = c;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < n; ++i)
    if (sorted[i] != i + 1) return false;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          if (i == j || k == l || (i == k && j == l)) continue;
          if (i - j == k - l && c[i] - c[j] == c[k] - c[l]) return false;
        }
  return true;
}

GsfmParams tbp50(GsfmVariant v, IfSymmetry s) {
  GsfmParams g;
  g.duration = 0.25;
  g.carrier = 2000;
  g.bandwidth = 200;
  g.rho = 2.0;
  g.alpha = 80;
  g.variant = v;
  g.symmetry = s;
  return g;
}

}  // namespace

TEST_CASE("every generator returns unit energy and finite samples") {
  std::vector<Waveform> ws;
  for (auto v : {GsfmVariant::gsfi, GsfmVariant::gcfi, GsfmVariant::approx})
    for (auto s : {IfSymmetry::nonsymmetric, IfSymmetry::even}) ws.push_back(gen_gsfm(tbp50(v, s)));
  ws.push_back(gen_sfm({}));
  for (auto k : {ClassicKind::cw, ClassicKind::lfm, ClassicKind::hfm}) {
    ClassicParams p;
    p.kind = k;
    ws.push_back(gen_classic(p));
  }
  CostasParams cp;
  cp.code = welch_costas(11, 2);
  ws.push_back(gen_costas(cp));
  PskParams pp;
  pp.bits = mlsr_code(6);
  ws.push_back(gen_psk(pp));
  pp.kind = PskKind::qpsk;
  ws.push_back(gen_psk(pp));
  for (const auto& w : ws) {
    CHECK(w.energy() == doctest::Approx(1.0).epsilon(1e-9));
    for (const auto& s : w.samples) REQUIRE(std::isfinite(std::abs(s)));
  }
}

TEST_CASE("gsfm: cycles and alpha") {
  CHECK(tbp50(GsfmVariant::gsfi, IfSymmetry::nonsymmetric).cycles() == doctest::Approx(5.0));
  CHECK(GsfmParams::alpha_for_cycles(5, 0.25, 2, IfSymmetry::nonsymmetric) == doctest::Approx(80.0));
  const double a = GsfmParams::alpha_for_cycles(27, 1.0, 1.25, IfSymmetry::even);
  GsfmParams g;
  g.duration = 1.0;
  g.rho = 1.25;
  g.alpha = a;
  CHECK(g.cycles() == doctest::Approx(27.0));
  g.rho = 0.9;
  CHECK_THROWS_AS(gen_gsfm(g), DomainError);
}

TEST_CASE("gsfm: measured IF follows the design away from the ends") {
  for (auto v : {GsfmVariant::gsfi, GsfmVariant::gcfi})
    for (auto s : {IfSymmetry::nonsymmetric, IfSymmetry::even}) {
      auto p = tbp50(v, s);
      const auto w = gen_gsfm(p);
      const auto bb = w;
      Waveform base = w;
      base.samples = w.baseband();
      const auto f = measured_if(base);
      const std::size_t edge = w.size() / 50;
      double worst = 0.0, peak = 0.0;
      for (std::size_t i = edge; i + edge < w.size(); ++i) {
        const double t = w.time_at(i) - 0.5 / w.sample_rate;
        worst = std::max(worst, std::fabs(f[i] - 0.5 * p.bandwidth * gsfm_if_shape(p, t)));
        peak = std::max(peak, std::fabs(f[i]));
      }
      CHECK(worst < 0.005 * p.bandwidth);
      CHECK(peak <= 0.5 * p.bandwidth * (1 + 1e-6));
    }
}

TEST_CASE("gsfm: IF shape formulas") {
  auto p = tbp50(GsfmVariant::gsfi, IfSymmetry::nonsymmetric);
  CHECK(gsfm_if_shape(p, 0.1) == doctest::Approx(std::sin(2 * M_PI * 80 * 0.01)));
  p.variant = GsfmVariant::gcfi;
  CHECK(gsfm_if_shape(p, 0.1) == doctest::Approx(std::cos(2 * M_PI * 80 * 0.01)));
  p.symmetry = IfSymmetry::even;
  CHECK(gsfm_if_shape(p, -0.07) == doctest::Approx(gsfm_if_shape(p, 0.07)));
}

TEST_CASE("gsfm rho = 1 GCFI equals the SFM") {
  GsfmParams g;
  g.duration = 0.25;
  g.bandwidth = 200;
  g.rho = 1.0;
  g.alpha = 20;
  g.variant = GsfmVariant::gcfi;
  g.symmetry = IfSymmetry::nonsymmetric;
  g.sample_rate = 4000;
  SfmParams s;
  s.duration = 0.25;
  s.bandwidth = 200;
  s.mod_freq = 20;
  s.sample_rate = 4000;
  const auto a = gen_gsfm(g), b = gen_sfm(s);
  REQUIRE(a.size() == b.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a.samples[i] - b.samples[i]));
  CHECK(worst < 1e-9);
}

TEST_CASE("sfm: line spectrum weights are Bessel values") {
  // f_m T integer puts every other line on a sinc null at each line centre.
  SfmParams s;
  s.duration = 1.0;
  s.bandwidth = 200;
  s.mod_freq = 20;
  s.carrier = 2000;
  s.sample_rate = 2000;
  const double beta = s.bandwidth / (2 * s.mod_freq);
  CHECK(beta == 5.0);
  const auto w = gen_sfm(s);
  const auto bb = w.baseband();
  auto line = [&](double f) {
    cd acc = 0;
    for (std::size_t i = 0; i < bb.size(); ++i) acc += bb[i] * std::polar(1.0, -2 * M_PI * f * (w.time_at(i)));
    return std::abs(acc) / w.sample_rate;
  };
  const double l0 = line(0.0);
  CHECK(l0 == doctest::Approx(std::fabs(oracle::bessel_series(0, beta))).epsilon(1e-3));
  for (int n : {1, 2, 3, 6}) {
    CHECK(line(n * s.mod_freq) == doctest::Approx(std::fabs(oracle::bessel_series(n, beta))).epsilon(2e-3));
    CHECK(line(-n * s.mod_freq) == doctest::Approx(std::fabs(oracle::bessel_series(n, beta))).epsilon(2e-3));
  }
}

TEST_CASE("classic: LFM and HFM instantaneous frequency") {
  ClassicParams p;
  p.kind = ClassicKind::lfm;
  p.duration = 0.5;
  p.carrier = 2000;
  p.bandwidth = 400;
  p.sample_rate = 4000;
  auto w = gen_classic(p);
  Waveform b = w;
  b.samples = w.baseband();
  auto f = measured_if(b);
  CHECK(f[1] == doctest::Approx(-200).epsilon(0.01));
  CHECK(f.back() == doctest::Approx(200).epsilon(0.01));
  p.kind = ClassicKind::hfm;
  w = gen_classic(p);
  b.samples = w.baseband();
  f = measured_if(b);
  // HFM sweeps down from f_c + Δf/2 with IF ∝ 1/(t + b).
  CHECK(f[1] == doctest::Approx(200).epsilon(0.01));
  CHECK(f.back() == doctest::Approx(-200).epsilon(0.01));
  const double bb = p.duration * (p.carrier - 200) / 400, a = (p.carrier + 200) * bb;
  const std::size_t mid = w.size() / 2;
  CHECK(f[mid] + p.carrier == doctest::Approx(a / (w.time_at(mid) - 0.5 / w.sample_rate + bb)).epsilon(1e-4));
}

TEST_CASE("costas: Welch construction and validator") {
  CHECK(welch_costas(5, 2, 1) == std::vector<int>{2, 4, 3, 1});
  CHECK(is_costas({2, 4, 3, 1}));
  CHECK(costas_brute({2, 4, 3, 1}));
  CHECK_FALSE(is_costas({4, 2, 3, 1}));
  CHECK_FALSE(costas_brute({4, 2, 3, 1}));
  for (int p : {7, 11, 13, 17})
    for (int g = 2; g < p; ++g) {
      if (!is_primitive_root(g, p)) continue;
      const auto c = welch_costas(p, g);
      CHECK(is_costas(c) == costas_brute(c));
      CHECK(is_costas(c));
      auto d = welch_costas(p, g, 0, true);
      CHECK(d.size() == static_cast<std::size_t>(p - 2));
      CHECK(is_costas(d));
      std::swap(d[0], d[3]);
      CHECK(is_costas(d) == costas_brute(d));
    }
  CHECK_FALSE(is_primitive_root(4, 7));
  CHECK_THROWS_AS(welch_costas(9, 2), DomainError);
  // Minimum chip count for T = 0.25 s, B = 200 Hz.
  CHECK(static_cast<int>(std::ceil(std::sqrt(0.25 * 200))) == 8);
  CostasParams cp;
  cp.code = {1, 2, 2, 3};
  CHECK_THROWS_AS(gen_costas(cp), DomainError);
}

TEST_CASE("costas: phase is continuous across chip boundaries") {
  CostasParams cp;
  cp.code = welch_costas(11, 2);
  cp.chip_taper = TaperSpec::rectangular();
  cp.duration = 0.5;
  cp.bandwidth = 500;
  cp.sample_rate = 8000;
  const auto w = gen_costas(cp);
  const auto m = w.baseband();
  double worst = 0.0;
  for (std::size_t i = 1; i < m.size(); ++i) worst = std::max(worst, std::fabs(std::arg(m[i] * std::conj(m[i - 1]))));
  // The largest step is one sample of the highest chip offset.
  CHECK(worst < 2 * M_PI * 0.5 * cp.bandwidth / cp.sample_rate + 1e-9);
}

TEST_CASE("psk: MLSR and QPSK phases") {
  const auto c = mlsr_code(5);
  CHECK(c.size() == 31);
  CHECK(std::accumulate(c.begin(), c.end(), 0) == 16);
  // Maximal period: no shorter period divides the sequence.
  for (std::size_t shift = 1; shift < 31; ++shift) {
    int agree = 0;
    for (std::size_t i = 0; i < 31; ++i) agree += c[i] == c[(i + shift) % 31] ? 1 : -1;
    CHECK(agree == -1);
  }
  CHECK_THROWS_AS(mlsr_code(13), DomainError);

  PskParams p;
  p.kind = PskKind::qpsk;
  p.bits.assign(8, 0);
  p.duration = 0.9;
  p.carrier = 1000;
  p.sample_rate = 40000;
  const auto w = gen_psk(p);
  const auto m = w.baseband();
  const double tc = p.duration / 9;
  for (int k = 0; k < 8; ++k) {
    // Sub-pulse k peaks at (k + 1)T_c where its neighbours vanish.
    const auto i = static_cast<std::size_t>(std::lround((k + 1) * tc * p.sample_rate - 0.5));
    const double expected = std::remainder(k * M_PI / 2, 2 * M_PI);
    CHECK(std::fabs(std::remainder(std::arg(m[i]) - expected, 2 * M_PI)) < 0.01);
  }
}

TEST_CASE("psk: untapered BPSK sidelobes fall 6 dB per octave") {
  PskParams p;
  p.bits = random_bits(256, 4);
  p.duration = 1.0;
  p.carrier = 6000;
  const auto w = gen_psk(p);
  SpectralDensity sd(w);
  const double rc = 256.0;
  auto band_mean = [&](double lo, double hi) {
    double s = 0;
    int n = 0;
    for (std::size_t i = 0; i < sd.freq().size(); ++i) {
      const double off = sd.freq()[i] - p.carrier;
      if (off >= lo * rc && off < hi * rc) {
        s += sd.density()[i];
        ++n;
      }
    }
    return 10 * std::log10(s / n);
  };
  const double o1 = band_mean(2, 4), o2 = band_mean(4, 8), o3 = band_mean(8, 16);
  CHECK(o1 - o2 == doctest::Approx(6.02).epsilon(1.0 / 6.02));
  CHECK(o2 - o3 == doctest::Approx(6.02).epsilon(1.0 / 6.02));
}

TEST_CASE("fourier coefficients: closed forms against an independent quadrature") {
  for (auto v : {GsfmVariant::gsfi, GsfmVariant::gcfi})
    for (auto s : {IfSymmetry::nonsymmetric, IfSymmetry::even}) {
      GsfmParams p;
      p.duration = 1.0;
      p.bandwidth = 100;
      p.rho = 2.0;
      p.alpha = 40;
      p.variant = v;
      p.symmetry = s;
      const auto f = gsfm_fourier_coeffs(p, 60);
      CHECK(f.closed_form);
      const bool even = s == IfSymmetry::even;
      const double lo = even ? -0.5 : 0.0;
      auto g = [&](double t) {
        const double u = 2 * M_PI * 40 * (even ? t * t : t * t);
        return v == GsfmVariant::gsfi ? std::sin(u) : std::cos(u);
      };
      CHECK(std::fabs(f.a0 - 2 * oracle::integrate_pieces(g, lo, lo + 1, 64)) < 1e-6);
      for (int m : {1, 2, 5, 17, 40, 59}) {
        const double am = 2 * oracle::integrate_pieces([&](double t) { return g(t) * std::cos(2 * M_PI * m * t); }, lo, lo + 1, 64);
        const double bm = 2 * oracle::integrate_pieces([&](double t) { return g(t) * std::sin(2 * M_PI * m * t); }, lo, lo + 1, 64);
        CHECK(std::fabs(f.a[m - 1] - am) < 1e-6);
        CHECK(std::fabs(f.b[m - 1] - (even ? 0.0 : bm)) < 1e-6);
        if (even) CHECK(std::fabs(bm) < 1e-9);
      }
    }
}

TEST_CASE("fourier coefficients: quadrature path for other rho, SFM limit, decay") {
  GsfmParams p;
  p.duration = 1.0;
  p.bandwidth = 100;
  p.rho = 1.5;
  p.alpha = 30;
  p.symmetry = IfSymmetry::nonsymmetric;
  const auto f = gsfm_fourier_coeffs(p, 30);
  CHECK_FALSE(f.closed_form);
  auto g = [&](double t) { return std::sin(2 * M_PI * 30 * std::pow(t, 1.5)); };
  for (int m : {1, 9, 30})
    CHECK(std::fabs(f.a[m - 1] - 2 * oracle::integrate_pieces([&](double t) { return g(t) * std::cos(2 * M_PI * m * t); }, 0, 1, 64)) < 1e-6);
  CHECK_THROWS_AS(gsfm_fourier_coeffs_quadrature(p, 0), DomainError);

  p.rho = 1.0;
  p.variant = GsfmVariant::gcfi;
  const auto s = gsfm_fourier_coeffs(p, 4);
  CHECK(s.a[0] == 1.0);
  CHECK(s.a[1] == 0.0);
  CHECK(s.period == doctest::Approx(1.0 / 30));

  // Even GSFM, T = 1, Δf = 100, ρ = 2, α = 40: harmonics beyond the largest
  // modulation rate (2ρα(T/2) = 80 per period) decay.
  GsfmParams e;
  e.duration = 1.0;
  e.bandwidth = 100;
  e.rho = 2.0;
  e.alpha = 40;
  e.symmetry = IfSymmetry::even;
  const auto fe = gsfm_fourier_coeffs(e, 400);
  auto env = [&](int m) {
    double mx = 0;
    for (int k = m; k < m + 10; ++k) mx = std::max(mx, std::fabs(fe.a[k - 1]));
    return mx;
  };
  for (int M : {100, 150, 180}) CHECK(env(2 * M) < 0.9 * env(M));
}

TEST_CASE("reflections: six unit-energy pulses in the same band") {
  GsfmParams p;
  p.duration = 1.0;
  p.bandwidth = 1000;
  p.carrier = 2000;
  p.rho = 2.0;
  p.alpha = 20;
  p.sample_rate = 4000;
  const auto fam = gsfm_reflections(p);
  const auto all = fam.all();
  REQUIRE(all.size() == 6);
  const double b0 = percent_bandwidth(all[0], 0.98);
  for (const auto& w : all) {
    CHECK(w.energy() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(percent_bandwidth(w, 0.98) == doctest::Approx(b0).epsilon(0.02));
  }
  const auto f = fam.forward.baseband(), fc = fam.forward_conj.baseband(), r = fam.reversed.baseband();
  for (std::size_t i = 0; i < f.size(); i += 101) {
    CHECK(std::abs(fc[i] - std::conj(f[i])) < 1e-12);
    CHECK(std::abs(r[i] - f[f.size() - 1 - i]) < 1e-12);
  }
  // TBP 1000: the forward/reversed cross-ambiguity stays 15 dB down.
  AfOptions o;
  o.velocities = velocity_grid(20, 1.0);
  const auto x = xaf(fam.forward, fam.reversed, o);
  CHECK(20 * std::log10(x.peak()) <= -15.0);
}
