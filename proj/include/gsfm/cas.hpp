#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "gsfm/ambiguity.hpp"
#include "gsfm/wavegen.hpp"

namespace gsfm {

enum class TrainKind { fbpt, sbpt, obpt };

struct PulseTrainSpec {
  TrainKind kind = TrainKind::fbpt;
  std::size_t pulses = 12;    // N
  double pri = 1.0;           // T_PRI = pulse length
  double system_bandwidth = 900.0;
  double center = 2000.0;     // centre of the system band
  // (ρ, α) per family; pulse n uses family n / 6 and reflection n % 6.
  std::vector<std::pair<double, double>> families = {{2.0, 5.0}, {2.5, 5.0}};
  GsfmVariant variant = GsfmVariant::gsfi;
  TaperSpec taper = TaperSpec::tukey(0.1);
  // OBPT: instantaneous bandwidth, first pulse centre and step (0 = derived
  // from K so that the hops span the system band exactly).
  double band_divisor = 0.0;  // K
  double pulse_bandwidth = 0.0;
  double first_center = 0.0;
  double step = 0.0;
  std::vector<std::size_t> hop_code;  // SBPT band order, empty = linear
  double sample_rate = 0.0;           // complex baseband rate, 0 = 2.5 B_sys
};

struct PulseTrain {
  TrainKind kind = TrainKind::fbpt;
  std::vector<Waveform> pulses;  // unit energy, each on its own carrier
  double pri = 1.0;
  double system_bandwidth = 0.0;
  double pulse_bandwidth = 0.0;  // IB
  double step = 0.0;             // minimum hop spacing (OBPT)
  double reference = 0.0;        // demodulation frequency of the receiver
  double sample_rate = 0.0;

  std::size_t size() const { return pulses.size(); }
  double period() const { return pri * static_cast<double>(pulses.size()); }
  double max_range(double c) const { return 0.5 * c * period(); }
  // Time-bandwidth product for a coherent length of M pulses.
  double tbp(std::size_t M) const;
};

PulseTrain build_pulse_train(const PulseTrainSpec& spec);

struct AccelerationTolerance {
  bool tolerant = false;
  double margin = 0.0;  // (1/(T²B)) / (a/c)
  double max_acceleration = 0.0;
};
AccelerationTolerance acceleration_tolerance(double a, double c, double cpi, double bandwidth);

struct CasTarget {
  double range = 1000.0;        // m at t = 0
  double velocity = 0.0;        // m/s, positive closing
  double acceleration = 0.0;    // m/s², positive closing
  double strength_db = 0.0;     // TS
};

enum class Spreading { cylindrical, spherical };
enum class EchoModel { kinematic, scale };

struct CasScenario {
  std::vector<CasTarget> targets;
  double sound_speed = kSoundSpeed;
  double source_level_db = 185.0;
  bool direct_blast = true;
  double blast_spacing = 10.0;   // tx-rx separation, m
  double null_depth_db = 0.0;
  Spreading spreading = Spreading::cylindrical;
  EchoModel echo_model = EchoModel::scale;
  std::optional<double> noise_db;  // noise power re the DBL mean power
  std::uint64_t noise_seed = 0;

  double blast_level_db() const;
  // Received echo level in dB re the DBL level at the receiver.
  double echo_level_db(const CasTarget& t) const;
};

// Transmit time ψ(t) of the signal received at time t from target k.
double transmit_time(const CasScenario& s, const CasTarget& t, double receive_time);
// Receive time of the echo of transmit instant t_tx.
double receive_time(const CasScenario& s, const CasTarget& t, double transmit);

struct ReceivedSignal {
  std::vector<cd> samples;  // complex baseband about train.reference, t_i = i/fs
  double sample_rate = 0.0;
};

// targets_on selects targets (empty = all).
ReceivedSignal synth_received(const CasScenario& s, const PulseTrain& train, double duration,
                              std::vector<bool> targets_on = {}, bool blast_on = true, bool noise_on = true);

enum class CpiStrategy { fcpi, spcpi, acpi };

struct MfBankConfig {
  CpiStrategy strategy = CpiStrategy::spcpi;
  std::size_t coherent = 4;             // M for ACPI
  std::vector<double> velocities;       // empty: ±10 m/s in 0.25 m/s steps
  double max_delay = 0.0;               // 0: half the train period
  std::vector<std::size_t> revisits = {0};
  unsigned threads = 0;
  // Half-width in delay of the interference window used for detection, s.
  double detect_window = 0.1;

  std::size_t coherent_pulses(std::size_t n) const;
};

struct MfBankFrame {
  std::size_t revisit = 0;
  double time_offset = 0.0;  // start of the revisit's replica, s
  // |output| normalized to the coherent DBL-at-receiver reference, rows = velocity.
  AmbiguitySurface surface;
};

struct MfBankOutput {
  CpiStrategy strategy = CpiStrategy::spcpi;
  std::size_t coherent = 1;
  double revisit_period = 0.0;
  std::vector<MfBankFrame> frames;
};

MfBankOutput mf_bank_process(const ReceivedSignal& rx, const PulseTrain& train, const MfBankConfig& cfg,
                             double c = kSoundSpeed);

struct TargetReport {
  std::size_t target = 0;
  std::size_t revisit = 0;
  double expected_delay = 0.0, expected_velocity = 0.0;
  double peak_db = 0.0, peak_delay = 0.0, peak_velocity = 0.0;
  double interference_db = 0.0;  // strongest output of everything else near the target
  double delay_error_cells = 0.0, velocity_error_cells = 0.0;
  bool detected = false;
};

struct CasResult {
  MfBankOutput output;
  std::vector<TargetReport> reports;
  double blast_residual_db = 0.0;  // DBL-only output beyond one PRI of delay
  double tbp = 0.0;
};

// Full simulation: synthesis, MF bank, and per-target detection, where a
// target counts as detected when its peak exceeds the output of everything
// else within cfg.detect_window of its expected delay, over all velocities.
CasResult run_cas(const CasScenario& s, const PulseTrain& train, const MfBankConfig& cfg);

}  // namespace gsfm
