#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "gsfm/errors.hpp"
#include "gsfm/mainlobe.hpp"
#include "gsfm/metrics.hpp"
#include "oracles.hpp"

using namespace gsfm;

namespace {

GsfmParams even_gsfm(double T, double df, double rho, double C, GsfmVariant v) {
  GsfmParams p;
  p.duration = T;
  p.bandwidth = df;
  p.carrier = 2000;
  p.rho = rho;
  p.variant = v;
  p.symmetry = IfSymmetry::even;
  p.alpha = GsfmParams::alpha_for_cycles(C, T, rho, IfSymmetry::even);
  return p;
}

// Bilinear |χ|² on the surface at (τ, d), d = η - 1 for broadband.
double sample2(const AmbiguitySurface& s, double tau, double d) {
  const double x = (tau - s.delay.front()) / (s.delay[1] - s.delay[0]);
  const double d0 = s.doppler.front() - 1.0, dd = s.doppler[1] - s.doppler[0];
  const double y = (d - d0) / dd;
  const auto c = static_cast<std::size_t>(std::floor(x)), r = static_cast<std::size_t>(std::floor(y));
  const double fx = x - c, fy = y - r;
  auto v = [&](std::size_t rr, std::size_t cc) { return s.at(rr, cc) * s.at(rr, cc); };
  return (1 - fy) * ((1 - fx) * v(r, c) + fx * v(r, c + 1)) + fy * ((1 - fx) * v(r + 1, c) + fx * v(r + 1, c + 1));
}

}  // namespace

TEST_CASE("eoa numeric: LFM bandwidth and narrowband Doppler term") {
  ClassicParams p;
  p.kind = ClassicKind::lfm;
  p.duration = 1.0;
  p.bandwidth = 200;
  p.carrier = 2000;
  p.origin = TimeOrigin::centered;
  const auto e = eoa_numeric(gen_classic(p), AfModel::narrowband);
  // Uniform IF over ±Δf/2: β² = (2π)² Δf²/12; uniform time over T: λ²_N = π²T²/3.
  CHECK(e.beta2 == doctest::Approx(M_PI * M_PI * 200 * 200 / 3).epsilon(1e-3));
  CHECK(e.lambda2 == doctest::Approx(M_PI * M_PI / 3).epsilon(1e-3));
  CHECK(M_PI * M_PI / 3 == doctest::Approx(3.2899).epsilon(1e-4));
  // LFM couples delay and Doppler: |γ| ~ √(β²λ²).
  CHECK(std::fabs(e.gamma) > 0.5 * std::sqrt(e.beta2 * e.lambda2));
}

TEST_CASE("eoa closed form: narrowband terms and zero coupling") {
  const auto p = even_gsfm(1.0, 500, 2.0, 20, GsfmVariant::gsfi);
  const auto n = eoa_closed_form(p, AfModel::narrowband);
  CHECK(n.lambda2 == doctest::Approx(M_PI * M_PI / 3).epsilon(1e-12));
  CHECK(n.gamma == 0.0);
  CHECK(eoa_closed_form(p, AfModel::broadband).gamma == 0.0);
  auto a = p;
  a.variant = GsfmVariant::approx;
  CHECK_THROWS_AS(eoa_closed_form(a, AfModel::broadband), DomainError);
  auto ns = p;
  ns.symmetry = IfSymmetry::nonsymmetric;
  CHECK_THROWS_AS(eoa_closed_form(ns, AfModel::broadband), DomainError);
}

TEST_CASE("eoa closed form against numeric on random even GSFMs") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> uT(0.25, 1.0), udf(100, 500), urho(1.5, 3.0), uC(5, 30);
  for (int i = 0; i < 5; ++i) {
    const auto v = i % 2 ? GsfmVariant::gcfi : GsfmVariant::gsfi;
    // Whole number of samples so the midpoint grid is symmetric about t = 0.
    auto p = even_gsfm(std::round(64 * uT(rng)) / 64, udf(rng), urho(rng), uC(rng), v);
    p.sample_rate = 19200;
    const auto w = gen_gsfm(p);
    const auto cb = eoa_closed_form(p, AfModel::broadband), nb = eoa_numeric(w, AfModel::broadband);
    CHECK(nb.beta2 == doctest::Approx(cb.beta2).epsilon(1e-3));
    CHECK(nb.lambda2 == doctest::Approx(cb.lambda2).epsilon(1e-3));
    CHECK(std::fabs(nb.gamma) < 1e-6 * std::sqrt(nb.beta2 * nb.lambda2));
    const auto nn = eoa_numeric(w, AfModel::narrowband);
    CHECK(nn.lambda2 == doctest::Approx(M_PI * M_PI * p.duration * p.duration / 3).epsilon(1e-3));
    CHECK(std::fabs(nn.gamma) < 1e-6 * std::sqrt(nn.beta2 * nn.lambda2));
  }
}

TEST_CASE("eoa closed form: narrowband limit of the broadband Doppler term") {
  double prev = 1e9;
  for (double df : {400.0, 200.0, 100.0, 50.0, 10.0}) {
    const auto p = even_gsfm(0.5, df, 2.0, 10, GsfmVariant::gsfi);
    const double lb = eoa_closed_form(p, AfModel::broadband).lambda2;
    const double limit = M_PI * M_PI * p.carrier * p.carrier * p.duration * p.duration / 3;
    const double rel = std::fabs(lb / limit - 1);
    CHECK(rel < prev);
    prev = rel;
  }
  CHECK(prev < 1e-2);
}

TEST_CASE("GCFI has the larger RMS bandwidth") {
  const auto s = eoa_closed_form(even_gsfm(0.5, 500, 2.75, 35, GsfmVariant::gsfi), AfModel::broadband);
  const auto c = eoa_closed_form(even_gsfm(0.5, 500, 2.75, 35, GsfmVariant::gcfi), AfModel::broadband);
  CHECK(c.beta2 > s.beta2);
}

TEST_CASE("estimation variances") {
  EoaParams e;
  e.beta2 = 4e5;
  e.lambda2 = 3.3;
  e.gamma = 0.0;
  for (double snr : {1.0, 10.0, 100.0}) {
    const auto v = estimation_variances(e, snr);
    CHECK(v.delay == doctest::Approx((1 + snr) / (2 * snr * snr) / e.beta2));
    CHECK(v.doppler == doctest::Approx((1 + snr) / (2 * snr * snr) / e.lambda2));
  }
  double pd = 1e300, pv = 1e300;
  for (double snr : {0.5, 1.0, 3.0, 30.0, 300.0}) {
    const auto v = estimation_variances(e, snr);
    CHECK(v.delay < pd);
    CHECK(v.doppler < pv);
    pd = v.delay;
    pv = v.doppler;
  }
  auto g = e;
  g.gamma = 0.7 * std::sqrt(e.beta2 * e.lambda2);
  CHECK(estimation_variances(g, 10).delay > estimation_variances(e, 10).delay);
  CHECK(estimation_variances(g, 10).doppler > estimation_variances(e, 10).doppler);
  g.gamma = std::sqrt(e.beta2 * e.lambda2);
  CHECK_THROWS_AS(estimation_variances(g, 10), DomainError);
  CHECK_THROWS_AS(estimation_variances(e, 0), DomainError);
}

TEST_CASE("eoa contour") {
  EoaParams e;
  e.beta2 = 4.0;
  e.lambda2 = 9.0;
  for (double eps : {0.5, 0.1}) {
    const auto pts = eoa_contour(e, eps, 64);
    double mt = 0, md = 0;
    for (auto [t, d] : pts) {
      CHECK(e.beta2 * t * t + e.lambda2 * d * d == doctest::Approx(eps).epsilon(1e-12));
      mt = std::max(mt, std::fabs(t));
      md = std::max(md, std::fabs(d));
    }
    CHECK(mt == doctest::Approx(std::sqrt(eps / e.beta2)).epsilon(1e-2));
    CHECK(md == doctest::Approx(std::sqrt(eps / e.lambda2)).epsilon(1e-2));
  }
  e.gamma = 4.0;
  for (auto [t, d] : eoa_contour(e, 0.3, 32))
    CHECK(e.beta2 * t * t + 2 * e.gamma * t * d + e.lambda2 * d * d == doctest::Approx(0.3).epsilon(1e-12));
  double r = 0;
  for (auto [t, d] : eoa_contour(e, 1e-10, 32)) r = std::max(r, std::hypot(t, d));
  CHECK(r < 1e-4);
  CHECK_THROWS_AS(eoa_contour(e, 1.5), DomainError);
}

TEST_CASE("eoa contour against the numeric mainlobe level sets") {
  auto p = even_gsfm(0.25, 200, 2.0, 10, GsfmVariant::gsfi);
  const auto w = gen_gsfm(p);
  const auto e = eoa_numeric(w, AfModel::broadband);
  AfOptions o;
  o.velocities = velocity_grid(3, 0.05);
  o.max_delay = 0.02;
  const auto s = xaf(w, o);
  const double cell_t = s.delay[1] - s.delay[0], cell_d = s.doppler[1] - s.doppler[0];
  // Radial scale at which the numeric |χ|² crosses 1 - ε along the ray through a contour point.
  auto crossing = [&](double t, double d, double level) {
    double lo = 0.2, hi = 2.0;
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      (sample2(s, mid * t, mid * d) > level ? lo : hi) = mid;
    }
    return lo;
  };
  // -3 dB: the quartic term pushes the true boundary outward by a near-constant factor.
  double rmin = 9, rmax = 0;
  for (auto [t, d] : eoa_contour(e, 0.5, 24)) {
    const double r = crossing(t, d, 0.5);
    rmin = std::min(rmin, r);
    rmax = std::max(rmax, r);
  }
  CHECK(cell_t < 0.05 * std::sqrt(0.5 / e.beta2));
  CHECK(cell_d < 0.1 * std::sqrt(0.5 / e.lambda2));
  CHECK(rmin > 1.0);
  CHECK(rmax < 1.2);
  CHECK(rmax - rmin < 0.05);
}

TEST_CASE("eoa parameters are the curvature of |chi|^2 at the peak") {
  auto p = even_gsfm(0.25, 200, 2.0, 10, GsfmVariant::gsfi);
  const auto w = gen_gsfm(p);
  const auto e = eoa_numeric(w, AfModel::broadband);
  AfOptions o;
  o.velocities = velocity_grid(0.1, 0.05);
  o.max_delay = 5.0 / w.sample_rate;
  const auto s = xaf(w, o);
  const auto r0 = s.origin_row(), c0 = s.origin_col();
  // The rectangular envelope adds the 2|τ|/T cusp of the overlap triangle.
  for (std::size_t k = 1; k <= 3; ++k) {
    const double tau = s.delay[c0 + k], a = s.at(r0, c0 + k);
    CHECK((1 - a * a - 2 * tau / p.duration) / (e.beta2 * tau * tau) == doctest::Approx(1.0).epsilon(0.03));
  }
  for (std::size_t k = 1; k <= 2; ++k) {
    const double d = s.doppler[r0 + k] - 1.0, a = s.at(r0 + k, c0);
    CHECK((1 - a * a) / (e.lambda2 * d * d) == doctest::Approx(1.0).epsilon(0.03));
  }
}

TEST_CASE("woodward ratios: CW constant and peak normalization") {
  ClassicParams p;
  p.kind = ClassicKind::cw;
  p.duration = 0.5;
  p.bandwidth = 0;
  p.sample_rate = 1000;
  AfOptions o;
  o.model = AfModel::narrowband;
  o.velocities = velocity_grid(5, 0.1);
  const auto s = xaf(gen_classic(p), o);
  const auto wr = woodward_ratios(s);
  CHECK(s.at(s.origin_row(), s.origin_col()) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(wr.area_delay == doctest::Approx(2 * p.duration / 3).epsilon(1e-4));
  // Triangle |χ| = 1 - |τ|/T crosses -3 dB at |τ| = T(1 - 1/√2).
  CHECK(wr.width_delay == doctest::Approx(2 * p.duration * (1 - M_SQRT1_2)).epsilon(1e-3));
}

TEST_CASE("GSFI and GCFI autocorrelations") {
  auto pg = even_gsfm(0.5, 500, 2.75, 35, GsfmVariant::gsfi);
  auto pc = pg;
  pc.variant = GsfmVariant::gcfi;
  AfOptions o;
  o.velocities = velocity_grid(2, 0.25);
  o.max_delay = 0.5;
  const auto sg = xaf(gen_gsfm(pg), o), sc = xaf(gen_gsfm(pc), o);
  auto acf_psl = [](const AmbiguitySurface& s) {
    const auto r = s.origin_row();
    std::size_t k = s.origin_col();
    while (k + 1 < s.cols() && s.at(r, k + 1) < s.at(r, k)) ++k;
    double m = 0;
    for (std::size_t j = k; j < s.cols(); ++j) m = std::max(m, s.at(r, j));
    return 20 * std::log10(m);
  };
  CHECK(acf_psl(sg) == doctest::Approx(-12.36).epsilon(0.01));
  CHECK(acf_psl(sc) == doctest::Approx(-7.71).epsilon(0.01));
  const auto wg = woodward_ratios(sg), wc = woodward_ratios(sc);
  CHECK(wg.width_delay / wc.width_delay == doctest::Approx(1.114).epsilon(0.01));
  CHECK(wc.area_delay < wg.area_delay);
}

TEST_CASE("fitted mainlobe ellipse") {
  AfOptions o;
  o.velocities = velocity_grid(4, 0.1);
  o.max_delay = 0.02;
  const auto f = fit_mainlobe_ellipse(xaf(gen_gsfm(even_gsfm(0.25, 200, 2.0, 10, GsfmVariant::gsfi)), o));
  CHECK(f.points > 10);
  CHECK(f.cross_ratio < 0.01);

  // BPSK with a palindromic code.
  const auto bits = mlsr_code(5);
  std::vector<int> sym(bits.begin(), bits.begin() + 16);
  sym.insert(sym.end(), sym.rbegin() + 1, sym.rend());
  PskParams b;
  b.bits = sym;
  b.duration = 0.25;
  b.carrier = 2000;
  b.origin = TimeOrigin::centered;
  const auto fb = fit_mainlobe_ellipse(xaf(gen_psk(b), o));
  CHECK(fb.points > 10);
  CHECK(fb.cross_ratio < 0.01);

  ClassicParams l;
  l.kind = ClassicKind::lfm;
  l.duration = 0.25;
  l.bandwidth = 200;
  l.carrier = 2000;
  l.origin = TimeOrigin::centered;
  AfOptions ol;
  ol.velocities = velocity_grid(30, 0.5);
  ol.max_delay = 0.25;
  ol.delay_stride = 8;
  CHECK(fit_mainlobe_ellipse(xaf(gen_classic(l), ol)).cross_ratio > 0.5);
}
