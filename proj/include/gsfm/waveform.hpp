#pragma once

#include <complex>
#include <span>
#include <string>
#include <vector>

namespace gsfm {

using cd = std::complex<double>;

enum class TimeOrigin { zero_start, centered };

// Sampled complex analytic signal s(t) = a(t) exp(jφ(t)) exp(j2πf_c t).
// Sample i sits at the centre of its cell: t_i = t_start + (i + 0.5)/fs.
struct Waveform {
  std::vector<cd> samples;
  double sample_rate = 0.0;
  double duration = 0.0;
  double carrier = 0.0;
  TimeOrigin origin = TimeOrigin::zero_start;
  std::string label;

  std::size_t size() const { return samples.size(); }
  double dt() const { return 1.0 / sample_rate; }
  double start_time() const { return origin == TimeOrigin::centered ? -0.5 * duration : 0.0; }
  double time_at(std::size_t i) const { return start_time() + (static_cast<double>(i) + 0.5) / sample_rate; }
  double energy() const;

  // Samples with the carrier removed, m_i = s_i exp(-j2πf_c t_i).
  std::vector<cd> baseband() const;
};

// Builds a waveform from modulation samples m_i by re-inserting the carrier.
Waveform from_baseband(std::vector<cd> m, double sample_rate, double duration, double carrier,
                       TimeOrigin origin, std::string label = {});

std::size_t sample_count(double duration, double sample_rate);

void normalize_energy(Waveform& w);

struct TaperSpec {
  enum class Kind { rectangular, tukey, hanning, kaiser };
  Kind kind = Kind::rectangular;
  double shape = 0.0;  // Tukey taper fraction or Kaiser beta

  static TaperSpec rectangular() { return {}; }
  static TaperSpec tukey(double alpha) { return {Kind::tukey, alpha}; }
  static TaperSpec hanning() { return {Kind::hanning, 0.0}; }
  static TaperSpec kaiser(double beta) { return {Kind::kaiser, beta}; }
};

// Window value at normalized position x in [0, 1].
double window_value(const TaperSpec& spec, double x);
// n samples at cell centres x_i = (i + 0.5)/n.
std::vector<double> window(const TaperSpec& spec, std::size_t n);

enum class TaperDomain { time, frequency };

// Frequency tapering multiplies the spectrum by the window laid over
// [centroid - band/2, centroid + band/2]; outside it takes the edge value.
// band <= 0 selects the 99.9% occupied band about the spectral centroid.
Waveform apply_taper(const Waveform& w, const TaperSpec& spec, TaperDomain domain, double band = 0.0);

// Energy spectral density |S(f)|² on an ascending absolute-frequency grid.
class SpectralDensity {
 public:
  explicit SpectralDensity(const Waveform& w, std::size_t min_length = 1u << 16);

  const std::vector<double>& freq() const { return freq_; }
  const std::vector<double>& density() const { return density_; }
  double bin_width() const { return df_; }
  double total_energy() const { return total_; }
  double f_lo() const { return freq_.front() - 0.5 * df_; }
  double f_hi() const { return freq_.back() + 0.5 * df_; }

  // Energy fraction inside [center - width/2, center + width/2].
  double containment(double center, double width) const;
  // Smallest width about center holding fraction p of the energy.
  double percent_bandwidth(double center, double p) const;
  double centroid() const;

 private:
  double cumulative(double f) const;

  std::vector<double> freq_, density_, cdf_;
  double df_ = 0.0, total_ = 0.0;
};

double spectral_containment(const Waveform& w, double center, double width);
double percent_bandwidth(const Waveform& w, double p);

// Peak-to-average power ratio of Re{s} in dB.
double papr_db(const Waveform& w);

// √η s(ηt) on the same sample rate; the duration becomes T/η.
Waveform doppler_scale(const Waveform& w, double eta);

struct Spectrogram {
  std::vector<double> time;
  std::vector<double> freq;
  std::vector<double> power_db;  // row-major, time x freq
};

Spectrogram spectrogram(const Waveform& w, double window_fraction = 1.0 / 32.0, double overlap = 0.75);

// Doppler scale factor and narrowband shift for radial velocity v (positive closing).
double eta_from_velocity(double v, double c);
double velocity_from_eta(double eta, double c);
double doppler_shift(double v, double carrier, double c);

inline constexpr double kSoundSpeed = 1500.0;

}  // namespace gsfm
