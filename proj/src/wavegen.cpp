#include "gsfm/wavegen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <set>

#include "gsfm/errors.hpp"
#include "gsfm/specfun.hpp"
#include "quadrature.hpp"

namespace gsfm {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * kPi;
constexpr std::size_t kMaxHarmonics = 512;

double resolve_rate(double fs, double carrier, double bandwidth) {
  return fs > 0.0 ? fs : default_sample_rate(carrier, bandwidth);
}

double local_time(std::size_t i, double fs, double duration, TimeOrigin origin) {
  const double start = origin == TimeOrigin::centered ? -0.5 * duration : 0.0;
  return start + (static_cast<double>(i) + 0.5) / fs;
}

Waveform finish(std::vector<cd> m, double fs, double duration, double carrier, TimeOrigin origin,
                const TaperSpec& taper, std::string label) {
  Waveform w = from_baseband(std::move(m), fs, duration, carrier, origin, std::move(label));
  if (taper.kind != TaperSpec::Kind::rectangular) w = apply_taper(w, taper, TaperDomain::time);
  normalize_energy(w);
  return w;
}

// Phase of a GSFM at the sample times, πΔf ∫0^t g(s) ds.
std::vector<double> gsfm_phase(const GsfmParams& p, const std::vector<double>& t) {
  std::vector<double> phase(t.size());
  if (p.variant == GsfmVariant::approx) {
    const double beta = p.bandwidth / (2.0 * p.alpha * p.rho);
    for (std::size_t i = 0; i < t.size(); ++i) {
      const double at = std::fabs(t[i]);
      if (at == 0.0) continue;
      const double v = beta * std::sin(kTwoPi * p.alpha * std::pow(at, p.rho)) / std::pow(at, p.rho - 1.0);
      phase[i] = t[i] < 0.0 ? -v : v;
    }
    return phase;
  }
  // Cumulative Gauss-Legendre integration of the IF over |t| in ascending order.
  std::vector<std::size_t> order(t.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return std::fabs(t[x]) < std::fabs(t[y]); });
  const auto& gl = detail::gauss_legendre<8>();
  double prev = 0.0, acc = 0.0;
  for (std::size_t idx : order) {
    const double cur = std::fabs(t[idx]);
    if (cur > prev) {
      const double mid = 0.5 * (cur + prev), half = 0.5 * (cur - prev);
      double s = 0.0;
      for (const auto& node : gl) s += node.w * gsfm_if_shape(p, mid + half * node.x);
      acc += half * s;
      prev = cur;
    }
    const double v = kPi * p.bandwidth * acc;
    phase[idx] = t[idx] < 0.0 ? -v : v;
  }
  return phase;
}

}  // namespace

double default_sample_rate(double carrier, double bandwidth) { return 8.0 * (carrier + 0.5 * bandwidth); }

double GsfmParams::cycles() const {
  return symmetry == IfSymmetry::even ? 2.0 * alpha * std::pow(0.5 * duration, rho)
                                      : alpha * std::pow(duration, rho);
}

double GsfmParams::alpha_for_cycles(double cycles, double duration, double rho, IfSymmetry symmetry) {
  require(cycles > 0.0 && duration > 0.0 && rho >= 1.0, "alpha_for_cycles: invalid arguments");
  return symmetry == IfSymmetry::even ? cycles / (2.0 * std::pow(0.5 * duration, rho))
                                      : cycles / std::pow(duration, rho);
}

void GsfmParams::validate() const {
  require(std::isfinite(duration) && duration > 0.0, "GSFM: duration must be > 0");
  require(std::isfinite(bandwidth) && bandwidth > 0.0, "GSFM: bandwidth must be > 0");
  require(std::isfinite(carrier) && carrier >= 0.0, "GSFM: carrier must be >= 0");
  require(std::isfinite(rho) && rho >= 1.0, "GSFM: rho must be >= 1");
  require(std::isfinite(alpha) && alpha > 0.0, "GSFM: alpha must be > 0");
  require(sample_rate >= 0.0, "GSFM: sample_rate must be >= 0");
}

double gsfm_if_shape(const GsfmParams& p, double t) {
  const double at = p.symmetry == IfSymmetry::even ? std::fabs(t) : t;
  const double u = kTwoPi * p.alpha * std::pow(std::max(at, 0.0), p.rho);
  switch (p.variant) {
    case GsfmVariant::gsfi:
      return std::sin(u);
    case GsfmVariant::gcfi:
      return std::cos(u);
    case GsfmVariant::approx: {
      const double sinc = u == 0.0 ? 1.0 : std::sin(u) / u;
      return std::cos(u) - (p.rho - 1.0) / p.rho * sinc;
    }
  }
  return 0.0;
}

Waveform gen_gsfm(const GsfmParams& p) {
  p.validate();
  const double fs = resolve_rate(p.sample_rate, p.carrier, p.bandwidth);
  const std::size_t n = sample_count(p.duration, fs);
  std::vector<double> t(n);
  for (std::size_t i = 0; i < n; ++i) t[i] = local_time(i, fs, p.duration, p.origin());
  const auto phase = gsfm_phase(p, t);
  std::vector<cd> m(n);
  for (std::size_t i = 0; i < n; ++i) m[i] = std::polar(1.0, phase[i]);
  return finish(std::move(m), fs, p.duration, p.carrier, p.origin(), p.taper, "gsfm");
}

Waveform gen_sfm(const SfmParams& p) {
  require(p.duration > 0.0 && p.bandwidth > 0.0 && p.mod_freq > 0.0, "SFM: T, bandwidth and f_m must be > 0");
  const double fs = resolve_rate(p.sample_rate, p.carrier, p.bandwidth);
  const std::size_t n = sample_count(p.duration, fs);
  const double beta = p.bandwidth / (2.0 * p.mod_freq);
  std::vector<cd> m(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double arg = kTwoPi * p.mod_freq * local_time(i, fs, p.duration, p.origin);
    m[i] = std::polar(1.0, beta * (p.phase == SfmParams::Phase::sine ? std::sin(arg) : std::cos(arg)));
  }
  return finish(std::move(m), fs, p.duration, p.carrier, p.origin, p.taper, "sfm");
}

Waveform gen_classic(const ClassicParams& p) {
  require(p.duration > 0.0, "classic: duration must be > 0");
  require(p.kind == ClassicKind::cw || p.bandwidth > 0.0, "classic: bandwidth must be > 0");
  const double bw = p.kind == ClassicKind::cw ? 0.0 : p.bandwidth;
  const double fs = resolve_rate(p.sample_rate, p.carrier, bw);
  const std::size_t n = sample_count(p.duration, fs);
  std::vector<cd> m(n);
  const char* label = "cw";
  for (std::size_t i = 0; i < n; ++i) {
    const double t = local_time(i, fs, p.duration, p.origin);
    const double tr = t - (p.origin == TimeOrigin::centered ? -0.5 * p.duration : 0.0);  // from start
    double ph = 0.0;
    if (p.kind == ClassicKind::lfm) {
      const double tc = tr - 0.5 * p.duration;
      ph = kPi * (p.bandwidth / p.duration) * tc * tc;
      label = "lfm";
    } else if (p.kind == ClassicKind::hfm) {
      require(p.carrier > 0.5 * p.bandwidth, "HFM: carrier must exceed half the bandwidth");
      const double b = p.duration * (p.carrier - 0.5 * p.bandwidth) / p.bandwidth;
      const double a = (p.carrier + 0.5 * p.bandwidth) * b;
      // Total phase 2πa ln((t+b)/b) less the carrier term.
      ph = kTwoPi * (a * std::log1p(tr / b) - p.carrier * tr);
      label = "hfm";
    }
    m[i] = std::polar(1.0, ph);
  }
  // Carrier phase is referenced to the local start for the swept waveforms.
  Waveform w = finish(std::move(m), fs, p.duration, p.carrier, p.origin, p.taper, label);
  return w;
}

bool is_costas(const std::vector<int>& code) {
  const auto n = static_cast<int>(code.size());
  if (n == 0) return false;
  std::vector<int> sorted = code;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < n; ++i)
    if (sorted[i] != i + 1) return false;
  for (int d = 1; d < n; ++d) {
    std::set<int> seen;
    for (int i = 0; i + d < n; ++i)
      if (!seen.insert(code[i + d] - code[i]).second) return false;
  }
  return true;
}

bool is_primitive_root(int g, int p) {
  if (p < 3 || g <= 0 || g >= p) return false;
  for (int d = 2; d < p; ++d)
    if (p % d == 0) return false;
  long v = 1;
  for (int k = 1; k < p - 1; ++k) {
    v = v * g % p;
    if (v == 1) return false;
  }
  return true;
}

std::vector<int> welch_costas(int p, int g, int shift, bool drop_corner) {
  require(is_primitive_root(g, p), "welch_costas: g must be a primitive root of the prime p");
  const int n = p - 1;
  shift = ((shift % n) + n) % n;
  std::vector<int> c(n);
  long v = 1;
  for (int k = 0; k < shift; ++k) v = v * g % p;
  for (int i = 0; i < n; ++i) {
    c[i] = static_cast<int>(v);
    v = v * g % p;
  }
  if (drop_corner) {
    require(c.front() == 1, "welch_costas: corner removal needs shift = 0");
    c.erase(c.begin());
    for (auto& x : c) --x;
  }
  return c;
}

Waveform gen_costas(const CostasParams& p) {
  require(is_costas(p.code), "Costas: code is not a Costas permutation");
  require(p.duration > 0.0 && p.bandwidth > 0.0, "Costas: duration and bandwidth must be > 0");
  const double fs = resolve_rate(p.sample_rate, p.carrier, p.bandwidth);
  const std::size_t n = sample_count(p.duration, fs);
  const auto nc = p.code.size();
  const double spacing = p.bandwidth / static_cast<double>(nc);
  std::vector<cd> m(n);
  // θ carries the phase across chip boundaries.
  double theta = 0.0;
  for (std::size_t c = 0; c < nc; ++c) {
    const std::size_t lo = c * n / nc, hi = (c + 1) * n / nc;
    const auto win = window(p.chip_taper, hi - lo);
    const double off = (p.code[c] - 0.5 * (static_cast<double>(nc) + 1.0)) * spacing;
    for (std::size_t i = lo; i < hi; ++i)
      m[i] = win[i - lo] * std::polar(1.0, theta + kTwoPi * off * (static_cast<double>(i - lo) + 0.5) / fs);
    theta = std::fmod(theta + kTwoPi * off * static_cast<double>(hi - lo) / fs, kTwoPi);
  }
  return finish(std::move(m), fs, p.duration, p.carrier, p.origin, TaperSpec::rectangular(), "costas");
}

Waveform gen_psk(const PskParams& p) {
  const std::size_t nc = p.bits.size();
  require(nc >= 1, "PSK: code must not be empty");
  for (int b : p.bits) require(b == 0 || b == 1, "PSK: code bits must be 0 or 1");
  require(p.duration > 0.0, "PSK: duration must be > 0");
  require(p.qpsk_sign == 1 || p.qpsk_sign == -1, "PSK: qpsk_sign must be +1 or -1");
  const bool q = p.kind == PskKind::qpsk;
  const double tc = p.duration / static_cast<double>(q ? nc + 1 : nc);
  const double bw = p.bandwidth > 0.0 ? p.bandwidth : 2.0 / tc;
  const double fs = resolve_rate(p.sample_rate, p.carrier, bw);
  const std::size_t n = sample_count(p.duration, fs);
  std::vector<cd> m(n);
  if (!q) {
    for (std::size_t c = 0; c < nc; ++c) {
      const std::size_t lo = c * n / nc, hi = (c + 1) * n / nc;
      const auto win = window(p.chip_taper, hi - lo);
      for (std::size_t i = lo; i < hi; ++i) m[i] = p.bits[c] ? -win[i - lo] : win[i - lo];
    }
  } else {
    // Half-cosine sub-pulses of length 2T_c spaced T_c; the j^(i-1) rotation puts
    // neighbours in quadrature.
    const cd jrot(0.0, static_cast<double>(p.qpsk_sign));
    cd rot(1.0, 0.0);
    for (std::size_t c = 0; c < nc; ++c) {
      const cd qc = rot * (p.bits[c] ? -1.0 : 1.0);
      rot *= jrot;
      for (std::size_t i = 0; i < n; ++i) {
        const double tl = (static_cast<double>(i) + 0.5) / fs - static_cast<double>(c) * tc;
        if (tl <= 0.0 || tl >= 2.0 * tc) continue;
        m[i] += qc * std::sin(kPi * tl / (2.0 * tc));
      }
    }
  }
  return finish(std::move(m), fs, p.duration, p.carrier, p.origin, TaperSpec::rectangular(), q ? "qpsk" : "bpsk");
}

std::vector<int> mlsr_code(int degree) {
  static const std::vector<std::vector<int>> taps = {
      {},         {},         {2, 1},     {3, 2},         {4, 3},  {5, 3},  {6, 5},
      {7, 6},     {8, 6, 5, 4}, {9, 5},   {10, 7},        {11, 9}, {12, 11, 10, 4}};
  require(degree >= 2 && degree <= 12, "mlsr_code: degree must lie in [2, 12]");
  std::vector<int> state(static_cast<std::size_t>(degree), 1);  // state[k-1] is stage k
  const std::size_t len = (std::size_t{1} << degree) - 1;
  std::vector<int> out(len);
  for (std::size_t i = 0; i < len; ++i) {
    out[i] = state.back();
    int fb = 0;
    for (int t : taps[static_cast<std::size_t>(degree)]) fb ^= state[static_cast<std::size_t>(t - 1)];
    for (std::size_t k = state.size() - 1; k > 0; --k) state[k] = state[k - 1];
    state[0] = fb;
  }
  return out;
}

std::vector<int> random_bits(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<int> out(n);
  for (auto& b : out) b = static_cast<int>(rng() >> 63);
  return out;
}

FourierSeries gsfm_fourier_coeffs_quadrature(const GsfmParams& p, std::size_t M) {
  p.validate();
  require(M >= 1, "Fourier coefficients: at least one harmonic");
  FourierSeries fsr;
  const bool even = p.symmetry == IfSymmetry::even;
  const double lo = even ? -0.5 * p.duration : 0.0;
  const double hi = lo + p.duration;
  fsr.period = p.duration;
  const double T = fsr.period;
  const double cyc = p.cycles();
  const auto panels = static_cast<std::size_t>(2 * (M + static_cast<std::size_t>(std::ceil(cyc))) + 16);
  const double width = (hi - lo) / static_cast<double>(panels);
  const auto& gl = detail::gauss_legendre20();
  std::vector<double> sa(M, 0.0), sb(M, 0.0);
  double s0 = 0.0;
  // For the even case the integrand split at t=0 keeps panels smooth (panels is even).
  for (std::size_t k = 0; k < panels; ++k) {
    const double mid = lo + (k + 0.5) * width, half = 0.5 * width;
    for (const auto& node : gl) {
      const double t = mid + half * node.x;
      const double g = node.w * half * gsfm_if_shape(p, t);
      s0 += g;
      const cd step = std::polar(1.0, kTwoPi * t / T);
      cd e = step;
      for (std::size_t m = 0; m < M; ++m) {
        sa[m] += g * e.real();
        sb[m] += g * e.imag();
        e *= step;
      }
    }
  }
  fsr.a0 = 2.0 / T * s0;
  fsr.a.resize(M);
  fsr.b.resize(M);
  for (std::size_t m = 0; m < M; ++m) {
    fsr.a[m] = 2.0 / T * sa[m];
    fsr.b[m] = even ? 0.0 : 2.0 / T * sb[m];
  }
  return fsr;
}

namespace {

// Closed forms for ρ = 2 (GSFI/GCFI). S, C are the standard Fresnel integrals.
FourierSeries fourier_rho2(const GsfmParams& p, std::size_t M) {
  FourierSeries fsr;
  fsr.closed_form = true;
  const double T = p.duration, al = p.alpha, sa = std::sqrt(al);
  const bool even = p.symmetry == IfSymmetry::even;
  const bool gsfi = p.variant == GsfmVariant::gsfi;
  fsr.period = T;
  const double span = even ? 0.5 * T : T;  // integration runs over [0, span] (doubled if even)
  const double pref = even ? 1.0 / (sa * T) : 1.0 / (2.0 * sa * T);
  const FresnelPair full = fresnel(2.0 * sa * span);
  fsr.a0 = (even ? 2.0 : 1.0) * (gsfi ? full.s : full.c) / (sa * T);
  fsr.a.resize(M);
  fsr.b.resize(M);
  for (std::size_t m = 1; m <= M; ++m) {
    const double d = static_cast<double>(m) / (2.0 * T * al);
    const double D = kTwoPi * al * d * d;
    const double cD = std::cos(D), sD = std::sin(D);
    const FresnelPair f1 = fresnel(2.0 * sa * (span + d));
    const FresnelPair f2 = fresnel(2.0 * sa * (span - d));
    const FresnelPair fw = fresnel(2.0 * sa * d);
    double am, bm = 0.0;
    if (gsfi) {
      am = pref * (cD * (f1.s + f2.s) - sD * (f1.c + f2.c));
      if (!even) bm = pref * (cD * (f2.c - f1.c + 2.0 * fw.c) + sD * (f2.s - f1.s + 2.0 * fw.s));
    } else {
      am = pref * (cD * (f1.c + f2.c) + sD * (f1.s + f2.s));
      if (!even) bm = pref * (cD * (f1.s - f2.s - 2.0 * fw.s) - sD * (f1.c - f2.c - 2.0 * fw.c));
    }
    fsr.a[m - 1] = am;
    fsr.b[m - 1] = bm;
  }
  return fsr;
}

std::size_t truncation_point(const FourierSeries& f) {
  double mx = 0.0;
  for (std::size_t m = 0; m < f.a.size(); ++m) mx = std::max(mx, (std::fabs(f.a[m]) + std::fabs(f.b[m])) / (m + 1.0));
  std::size_t keep = 1;
  for (std::size_t m = 0; m < f.a.size(); ++m)
    if ((std::fabs(f.a[m]) + std::fabs(f.b[m])) / (m + 1.0) >= 1e-9 * mx) keep = m + 1;
  return keep;
}

}  // namespace

FourierSeries gsfm_fourier_coeffs(const GsfmParams& p, std::size_t M) {
  p.validate();
  const bool even = p.symmetry == IfSymmetry::even;
  // Pure sinusoidal IF: one harmonic at the modulation frequency α.
  if (p.rho == 1.0 && (p.variant != GsfmVariant::gsfi || !even)) {
    FourierSeries fsr;
    fsr.closed_form = true;
    fsr.period = 1.0 / p.alpha;
    fsr.a.assign(std::max<std::size_t>(M, 1), 0.0);
    fsr.b.assign(fsr.a.size(), 0.0);
    (p.variant == GsfmVariant::gsfi ? fsr.b : fsr.a)[0] = 1.0;
    return fsr;
  }
  const std::size_t Mq = M ? M : kMaxHarmonics;
  FourierSeries fsr = (p.rho == 2.0 && p.variant != GsfmVariant::approx) ? fourier_rho2(p, Mq)
                                                                          : gsfm_fourier_coeffs_quadrature(p, Mq);
  if (M == 0) {
    const std::size_t keep = truncation_point(fsr);
    fsr.a.resize(keep);
    fsr.b.resize(keep);
  }
  return fsr;
}

GsfmFamily gsfm_reflections(const GsfmParams& p) {
  GsfmParams ns = p;
  ns.symmetry = IfSymmetry::nonsymmetric;
  GsfmParams ev = p;
  ev.symmetry = IfSymmetry::even;
  GsfmFamily fam;
  fam.forward = gen_gsfm(ns);
  fam.even = gen_gsfm(ev);
  auto reflect = [](const Waveform& w, bool reverse, bool conj, const char* label) {
    auto m = w.baseband();
    if (reverse) std::reverse(m.begin(), m.end());
    if (conj)
      for (auto& v : m) v = std::conj(v);
    return from_baseband(std::move(m), w.sample_rate, w.duration, w.carrier, w.origin, label);
  };
  fam.reversed = reflect(fam.forward, true, false, "gsfm_r");
  fam.forward_conj = reflect(fam.forward, false, true, "gsfm_f_conj");
  fam.reversed_conj = reflect(fam.forward, true, true, "gsfm_r_conj");
  fam.even_conj = reflect(fam.even, false, true, "gsfm_e_conj");
  fam.forward.label = "gsfm_f";
  fam.even.label = "gsfm_e";
  return fam;
}

}  // namespace gsfm
