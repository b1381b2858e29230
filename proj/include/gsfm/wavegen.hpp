#pragma once

#include <cstdint>
#include <vector>

#include "gsfm/waveform.hpp"

namespace gsfm {

enum class GsfmVariant { gsfi, gcfi, approx };
enum class IfSymmetry { nonsymmetric, even };

double default_sample_rate(double carrier, double bandwidth);

struct GsfmParams {
  double duration = 1.0;   // T
  double carrier = 2000.0;
  double bandwidth = 500.0;  // Δf, peak-to-peak IF swing
  double rho = 2.0;
  double alpha = 0.0;  // s^-rho
  GsfmVariant variant = GsfmVariant::gsfi;
  IfSymmetry symmetry = IfSymmetry::even;
  double sample_rate = 0.0;  // 0 selects default_sample_rate
  TaperSpec taper;

  // Number of IF cycles: αT^ρ (nonsymmetric) or 2α(T/2)^ρ (even).
  double cycles() const;
  static double alpha_for_cycles(double cycles, double duration, double rho, IfSymmetry symmetry);
  TimeOrigin origin() const {
    return symmetry == IfSymmetry::even ? TimeOrigin::centered : TimeOrigin::zero_start;
  }
  void validate() const;
};

// Normalized IF g(t), IF(t) = (Δf/2) g(t), at local time t.
double gsfm_if_shape(const GsfmParams& p, double t);
Waveform gen_gsfm(const GsfmParams& p);

struct SfmParams {
  double duration = 1.0;
  double carrier = 2000.0;
  double bandwidth = 500.0;
  double mod_freq = 10.0;  // f_m
  enum class Phase { sine, cosine } phase = Phase::sine;
  TimeOrigin origin = TimeOrigin::zero_start;
  double sample_rate = 0.0;
  TaperSpec taper;
};
Waveform gen_sfm(const SfmParams& p);

enum class ClassicKind { cw, lfm, hfm };
struct ClassicParams {
  ClassicKind kind = ClassicKind::lfm;
  double duration = 1.0;
  double carrier = 2000.0;
  double bandwidth = 500.0;
  TimeOrigin origin = TimeOrigin::zero_start;
  double sample_rate = 0.0;
  TaperSpec taper;
};
Waveform gen_classic(const ClassicParams& p);

struct CostasParams {
  std::vector<int> code;  // permutation of 1..N
  double duration = 1.0;
  double carrier = 2000.0;
  double bandwidth = 500.0;  // N chips spaced bandwidth/N
  TimeOrigin origin = TimeOrigin::zero_start;
  double sample_rate = 0.0;
  TaperSpec chip_taper = TaperSpec::tukey(0.85);
};
Waveform gen_costas(const CostasParams& p);

bool is_costas(const std::vector<int>& code);
bool is_primitive_root(int g, int p);
// Welch array c_i = g^(i+shift) mod p, i = 0..p-2. With drop_corner the
// leading 1 (shift = 0) is removed and the rest shifted down, giving p-2.
std::vector<int> welch_costas(int p, int g, int shift = 0, bool drop_corner = false);

enum class PskKind { bpsk, qpsk };
struct PskParams {
  std::vector<int> bits;  // 0 -> phase 0, 1 -> phase π
  PskKind kind = PskKind::bpsk;
  int qpsk_sign = +1;  // q_i = j^(±(i-1)) exp(jθ_i)
  double duration = 1.0;
  double carrier = 2000.0;
  TimeOrigin origin = TimeOrigin::zero_start;
  double sample_rate = 0.0;
  double bandwidth = 0.0;  // only used for the default sample rate; 0 = 2/T_chip
  TaperSpec chip_taper;     // BPSK only; QPSK uses half-cosine sub-pulses
};
Waveform gen_psk(const PskParams& p);

// Maximal-length binary sequence (0/1) of length 2^degree - 1 from a
// Fibonacci LFSR seeded with all ones, degree 2..12.
std::vector<int> mlsr_code(int degree);
std::vector<int> random_bits(std::size_t n, std::uint64_t seed);

// Fourier series of the normalized IF on the waveform's local time axis,
//   g(t) = a0/2 + Σ a_m cos(2πmt/T_h) + b_m sin(2πmt/T_h).
struct FourierSeries {
  double a0 = 0.0;
  std::vector<double> a, b;  // m = 1..M
  double period = 0.0;       // T_h
  bool closed_form = false;
  std::size_t harmonics() const { return a.size(); }
};

// M = 0 selects the default truncation (1e-9 relative on a_m/m, b_m/m; at most 512).
FourierSeries gsfm_fourier_coeffs(const GsfmParams& p, std::size_t M = 0);
// Coefficients by numerical quadrature only.
FourierSeries gsfm_fourier_coeffs_quadrature(const GsfmParams& p, std::size_t M);

struct GsfmFamily {
  Waveform forward, reversed, forward_conj, reversed_conj, even, even_conj;
  std::vector<Waveform> all() const { return {forward, reversed, forward_conj, reversed_conj, even, even_conj}; }
};
GsfmFamily gsfm_reflections(const GsfmParams& p);

}  // namespace gsfm
