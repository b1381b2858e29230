#pragma once

#include <complex>
#include <span>
#include <vector>

#include "gsfm/waveform.hpp"

namespace gsfm {

enum class AfModel { broadband, narrowband };

std::vector<double> velocity_grid(double vmax, double step);

struct AfOptions {
  AfModel model = AfModel::broadband;
  double sound_speed = kSoundSpeed;
  std::vector<double> velocities;  // empty: ±20 m/s in 0.25 m/s steps
  double max_delay = 0.0;          // 0: ± duration of the first waveform
  std::size_t delay_stride = 1;    // in samples
};

// |χ| on a delay x Doppler grid; rows are Doppler values, columns delays.
struct AmbiguitySurface {
  AfModel model = AfModel::broadband;
  std::vector<double> delay;     // s
  std::vector<double> velocity;  // m/s
  std::vector<double> doppler;   // η (broadband) or φ in Hz (narrowband)
  std::vector<double> magnitude;

  std::size_t rows() const { return velocity.size(); }
  std::size_t cols() const { return delay.size(); }
  double at(std::size_t r, std::size_t c) const { return magnitude[r * delay.size() + c]; }
  double& at(std::size_t r, std::size_t c) { return magnitude[r * delay.size() + c]; }
  // Grid indices closest to τ = 0 and zero Doppler.
  std::size_t origin_col() const;
  std::size_t origin_row() const;
  double peak() const;
};

// Doppler value for a velocity under the given model (η or φ = 2v f_c / c).
double doppler_value(AfModel model, double velocity, double carrier, double c);

// Computes rows of χ(τ, d) for one pair of waveforms, reusing the baseband
// copies and, for the narrowband model, the transformed second waveform.
//   broadband:  χ(τ,η) = √η ∫ s1(t) s2*(η(t+τ)) dt
//   narrowband: χ(τ,φ) = ∫ s1(t) s2*(t+τ) exp(j2πφt) dt
class XafEngine {
 public:
  XafEngine(const Waveform& w1, const Waveform& w2, AfModel model);

  // Complex χ at lags k = -max_lag..max_lag (τ = k/fs).
  std::vector<std::complex<double>> row(double doppler, long max_lag) const;
  // Complex χ for every lag where the product can be non-zero; first() is the lag of element 0.
  std::vector<std::complex<double>> full_row(double doppler, long& first_lag) const;
  // χ(0, d) by direct inner product.
  std::complex<double> zero_delay(double doppler) const;

  double sample_rate() const { return fs_; }

 private:
  std::vector<std::complex<double>> second(double doppler, long& j0) const;

  AfModel model_;
  double fs_, t0_, f1_, f2_, start2_, dur2_;
  std::vector<std::complex<double>> m1_, m2_;
  std::vector<double> t1_;
  bool aligned_ = false;
};

AmbiguitySurface xaf(const Waveform& w1, const Waveform& w2, const AfOptions& opt = {});
AmbiguitySurface xaf(const Waveform& w, const AfOptions& opt = {});

struct QFunction {
  std::vector<double> velocity;
  std::vector<double> q;     // s
  std::vector<double> q_db;  // 10 log10 q
};

// Q(d) = ∫ |χ(τ,d)|² dτ by the trapezoidal rule over each row.
QFunction qfunction(const AmbiguitySurface& s);

// Auto-ambiguity of a pulse train from the pulse cross-ambiguities,
// Σ_m Σ_n χ_mn(τ + (m-n) T_PRI, d) / N. Default delay span ± N T_PRI.
AmbiguitySurface composite_af(const std::vector<Waveform>& pulses, double pri, const AfOptions& opt = {});

}  // namespace gsfm
