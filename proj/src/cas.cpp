#include "gsfm/cas.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "gsfm/errors.hpp"
#include "gsfm/fft.hpp"
#include "gsfm/resample.hpp"
#include "parallel.hpp"

namespace gsfm {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Periodic train evaluated at arbitrary transmit times.
class TrainSampler {
 public:
  explicit TrainSampler(const PulseTrain& t) : train_(t) {
    for (const auto& p : t.pulses) base_.push_back(p.baseband());
  }

  // Only slots in [first, first + count) contribute when count > 0.
  cd operator()(double u, long first = 0, long count = 0) const {
    const double T = train_.pri;
    const long j = static_cast<long>(std::floor(u / T));
    const auto n = static_cast<long>(train_.size());
    cd acc{};
    for (long s = j - 1; s <= j + 1; ++s) {
      if (count > 0 && (s < first || s >= first + count)) continue;
      const auto& w = train_.pulses[static_cast<std::size_t>(((s % n) + n) % n)];
      const double d = u - static_cast<double>(s) * T;
      const double pos = d * w.sample_rate - 0.5;
      if (pos < -SincInterpolator::kTaps || pos > static_cast<double>(w.size()) + SincInterpolator::kTaps) continue;
      const cd m = sinc_interpolator()(base_[static_cast<std::size_t>(((s % n) + n) % n)], pos);
      if (m == cd{}) continue;
      const double lt = w.start_time() + d;
      acc += m * std::polar(1.0, kTwoPi * w.carrier * lt);
    }
    return acc;
  }

 private:
  const PulseTrain& train_;
  std::vector<std::vector<cd>> base_;
};

double spread_db(Spreading s, double r) {
  require(r > 0.0, "CAS: ranges must be > 0");
  return (s == Spreading::cylindrical ? 10.0 : 20.0) * std::log10(r);
}

double range_at(const CasTarget& t, double time) {
  return t.range - t.velocity * time - 0.5 * t.acceleration * time * time;
}

double velocity_at(const CasTarget& t, double time) { return t.velocity + t.acceleration * time; }

// dψ/dt, the instantaneous compression of the echo.
double compression(const CasScenario& s, const CasTarget& t, double rx) {
  const double c = s.sound_speed;
  if (s.echo_model == EchoModel::scale) return eta_from_velocity(velocity_at(t, rx), c);
  const double tx = transmit_time(s, t, rx);
  return eta_from_velocity(velocity_at(t, 0.5 * (rx + tx)), c);
}

double median_step(const std::vector<double>& v) {
  if (v.size() < 2) return 1.0;
  std::vector<double> d;
  for (std::size_t i = 1; i < v.size(); ++i) d.push_back(v[i] - v[i - 1]);
  std::nth_element(d.begin(), d.begin() + static_cast<long>(d.size() / 2), d.end());
  return d[d.size() / 2];
}

}  // namespace

double PulseTrain::tbp(std::size_t M) const {
  const double m = static_cast<double>(M), n = static_cast<double>(size());
  switch (kind) {
    case TrainKind::fbpt:
      return pri * system_bandwidth * m;
    case TrainKind::sbpt:
      return pri * system_bandwidth * m * m / n;
    case TrainKind::obpt:
      return pri * (pulse_bandwidth + step * m) * m;
  }
  return 0.0;
}

PulseTrain build_pulse_train(const PulseTrainSpec& spec) {
  const std::size_t N = spec.pulses;
  require(N >= 1, "pulse train: at least one pulse");
  require(spec.pri > 0.0 && spec.system_bandwidth > 0.0, "pulse train: PRI and system bandwidth must be > 0");
  require(spec.families.size() * 6 >= N, "pulse train: need one (rho, alpha) family per six pulses");
  const double B = spec.system_bandwidth, T = spec.pri;
  PulseTrain out;
  out.kind = spec.kind;
  out.pri = T;
  out.system_bandwidth = B;
  out.reference = spec.center;
  out.sample_rate = spec.sample_rate > 0.0 ? spec.sample_rate : std::ceil(2.5 * B * T) / T;
  require(std::fabs(out.sample_rate * T - std::round(out.sample_rate * T)) < 1e-9,
          "pulse train: PRI must span a whole number of samples");

  std::vector<double> centers(N, spec.center);
  const double lo = spec.center - 0.5 * B;
  switch (spec.kind) {
    case TrainKind::fbpt:
      out.pulse_bandwidth = B;
      break;
    case TrainKind::sbpt: {
      out.pulse_bandwidth = B / static_cast<double>(N);
      std::vector<std::size_t> code = spec.hop_code;
      if (code.empty())
        for (std::size_t i = 0; i < N; ++i) code.push_back(i);
      require(code.size() == N, "pulse train: hop code length must equal the pulse count");
      auto sorted = code;
      std::sort(sorted.begin(), sorted.end());
      for (std::size_t i = 0; i < N; ++i) require(sorted[i] == i, "pulse train: hop code must be a permutation of 0..N-1");
      for (std::size_t i = 0; i < N; ++i)
        centers[i] = lo + (static_cast<double>(code[i]) + 0.5) * out.pulse_bandwidth;
      out.step = out.pulse_bandwidth;
      break;
    }
    case TrainKind::obpt: {
      double ib = spec.pulse_bandwidth;
      if (ib <= 0.0) {
        require(spec.band_divisor > 1.0 && spec.band_divisor < static_cast<double>(N),
                "pulse train: OBPT needs 1 < K < N or an explicit pulse bandwidth");
        ib = B / spec.band_divisor;
      }
      const double step = spec.step > 0.0 ? spec.step : (N > 1 ? (B - ib) / static_cast<double>(N - 1) : 0.0);
      const double first = spec.first_center > 0.0 ? spec.first_center : lo + 0.5 * ib;
      out.pulse_bandwidth = ib;
      out.step = step;
      for (std::size_t i = 0; i < N; ++i) centers[i] = first + step * static_cast<double>(i);
      break;
    }
  }
  const double tol = 1e-6 * B;
  for (double f : centers)
    require(f - 0.5 * out.pulse_bandwidth >= lo - tol && f + 0.5 * out.pulse_bandwidth <= lo + B + tol,
            "pulse train: pulse band extends beyond the system band");

  for (std::size_t i = 0; i < N; ++i) {
    GsfmParams p;
    p.duration = T;
    p.carrier = centers[i];
    p.bandwidth = out.pulse_bandwidth;
    p.rho = spec.families[i / 6].first;
    p.alpha = spec.families[i / 6].second;
    p.variant = spec.variant;
    p.taper = spec.taper;
    p.sample_rate = out.sample_rate;
    auto w = gsfm_reflections(p).all()[i % 6];
    normalize_energy(w);
    out.pulses.push_back(std::move(w));
  }
  return out;
}

AccelerationTolerance acceleration_tolerance(double a, double c, double cpi, double bandwidth) {
  require(c > 0.0 && cpi > 0.0 && bandwidth > 0.0, "acceleration tolerance: inputs must be > 0");
  AccelerationTolerance r;
  r.max_acceleration = c / (cpi * cpi * bandwidth);
  const double aa = std::fabs(a);
  r.tolerant = aa < r.max_acceleration;
  r.margin = aa > 0.0 ? r.max_acceleration / aa : std::numeric_limits<double>::infinity();
  return r;
}

double CasScenario::blast_level_db() const {
  return source_level_db - spread_db(spreading, blast_spacing) - null_depth_db;
}

double CasScenario::echo_level_db(const CasTarget& t) const {
  return source_level_db - 2.0 * spread_db(spreading, t.range) + t.strength_db - blast_level_db();
}

double transmit_time(const CasScenario& s, const CasTarget& t, double rx) {
  const double c = s.sound_speed;
  if (s.echo_model == EchoModel::scale)
    return eta_from_velocity(velocity_at(t, rx), c) * (rx - 2.0 * t.range / c);
  // Two-way delay with reflection at the midpoint time.
  double tau = 2.0 * range_at(t, rx) / c;
  for (int it = 0; it < 60; ++it) {
    const double next = 2.0 * range_at(t, rx - 0.5 * tau) / c;
    if (std::fabs(next - tau) < 1e-14) {
      tau = next;
      break;
    }
    tau = next;
  }
  return rx - tau;
}

double receive_time(const CasScenario& s, const CasTarget& t, double tx) {
  double rx = tx + 2.0 * t.range / s.sound_speed;
  for (int it = 0; it < 60; ++it) {
    const double err = tx - transmit_time(s, t, rx);
    rx += err / compression(s, t, rx);
    if (std::fabs(err) < 1e-13) break;
  }
  return rx;
}

ReceivedSignal synth_received(const CasScenario& s, const PulseTrain& train, double duration,
                              std::vector<bool> targets_on, bool blast_on, bool noise_on) {
  require(duration > 0.0, "CAS: simulation window must be > 0");
  require(s.sound_speed > 0.0, "CAS: sound speed must be > 0");
  for (const auto& t : s.targets) {
    require(t.range > 0.0, "CAS: target ranges must be > 0");
    require(std::fabs(t.velocity) < 0.05 * s.sound_speed, "CAS: |velocity| must stay below 0.05 c");
  }
  if (targets_on.empty()) targets_on.assign(s.targets.size(), true);
  require(targets_on.size() == s.targets.size(), "CAS: target mask size mismatch");
  ReceivedSignal rx;
  rx.sample_rate = train.sample_rate;
  const auto n = static_cast<std::size_t>(std::ceil(duration * rx.sample_rate));
  rx.samples.assign(n, cd{});
  const TrainSampler sampler(train);
  std::vector<double> amp(s.targets.size());
  for (std::size_t k = 0; k < s.targets.size(); ++k) amp[k] = std::pow(10.0, s.echo_level_db(s.targets[k]) / 20.0);
  const double blast_delay = s.blast_spacing / s.sound_speed;

  detail::parallel_for((n + 4095) / 4096, 0, [&](std::size_t blk) {
    const std::size_t end = std::min(n, (blk + 1) * 4096);
    for (std::size_t i = blk * 4096; i < end; ++i) {
      const double t = static_cast<double>(i) / rx.sample_rate;
      cd v{};
      if (blast_on && s.direct_blast) v += sampler(t - blast_delay);
      for (std::size_t k = 0; k < s.targets.size(); ++k) {
        if (!targets_on[k]) continue;
        const auto& tg = s.targets[k];
        v += amp[k] * std::sqrt(compression(s, tg, t)) * sampler(transmit_time(s, tg, t));
      }
      rx.samples[i] = v * std::polar(1.0, -kTwoPi * train.reference * t);
    }
  });

  if (noise_on && s.noise_db) {
    std::mt19937_64 rng(s.noise_seed);
    const double sigma = std::sqrt(std::pow(10.0, *s.noise_db / 10.0) / train.pri / 2.0);
    std::normal_distribution<double> g(0.0, sigma);
    for (auto& v : rx.samples) v += cd(g(rng), g(rng));
  }
  return rx;
}

std::size_t MfBankConfig::coherent_pulses(std::size_t n) const {
  switch (strategy) {
    case CpiStrategy::spcpi:
      return 1;
    case CpiStrategy::fcpi:
      return n;
    case CpiStrategy::acpi:
      require(coherent >= 1 && coherent <= n, "MF bank: ACPI needs 1 <= M <= N");
      return coherent;
  }
  return 1;
}

MfBankOutput mf_bank_process(const ReceivedSignal& rx, const PulseTrain& train, const MfBankConfig& cfg, double c) {
  const std::size_t N = train.size();
  const std::size_t M = cfg.coherent_pulses(N);
  const double fs = rx.sample_rate;
  require(std::fabs(fs - train.sample_rate) < 1e-9, "MF bank: sample rate differs from the train");
  const auto vel = cfg.velocities.empty() ? velocity_grid(10.0, 0.25) : cfg.velocities;
  const double max_delay = cfg.max_delay > 0.0 ? cfg.max_delay : 0.5 * train.period();
  double eta_min = 1.0;
  for (double v : vel) eta_min = std::min(eta_min, eta_from_velocity(v, c));
  const double span = static_cast<double>(M) * train.pri;
  const auto nd = static_cast<std::size_t>(std::floor(max_delay * fs)) + 1;
  const auto nh_max = static_cast<std::size_t>(std::ceil(span / eta_min * fs)) + 1;
  const std::size_t nr = nd + nh_max;
  const std::size_t L = fft::fast_length(nr + nh_max);
  const TrainSampler sampler(train);

  MfBankOutput out;
  out.strategy = cfg.strategy;
  out.coherent = M;
  out.revisit_period = train.pri;
  for (std::size_t k : cfg.revisits) {
    const auto i0 = static_cast<std::size_t>(std::llround(static_cast<double>(k) * train.pri * fs));
    require(i0 + nr <= rx.samples.size(), "MF bank: received signal too short for the requested revisits");
    std::vector<cd> R(L);
    std::copy_n(rx.samples.begin() + static_cast<long>(i0), nr, R.begin());
    fft::forward(R);

    MfBankFrame fr;
    fr.revisit = k;
    fr.time_offset = static_cast<double>(k) * train.pri;
    auto& s = fr.surface;
    s.model = AfModel::broadband;
    s.velocity = vel;
    for (double v : vel) s.doppler.push_back(eta_from_velocity(v, c));
    s.delay.resize(nd);
    for (std::size_t j = 0; j < nd; ++j) s.delay[j] = static_cast<double>(j) / fs;
    s.magnitude.assign(vel.size() * nd, 0.0);

    const double t0 = fr.time_offset;
    detail::parallel_for(vel.size(), cfg.threads, [&](std::size_t r) {
      const double eta = s.doppler[r];
      const auto nh = static_cast<std::size_t>(std::ceil(span / eta * fs)) + 1;
      std::vector<cd> H(L);
      const double se = std::sqrt(eta);
      for (std::size_t i = 0; i < nh; ++i) {
        const double u = static_cast<double>(i) / fs;
        H[i] = se * sampler(t0 + eta * u, static_cast<long>(k), static_cast<long>(M)) *
               std::polar(1.0, -kTwoPi * train.reference * u);
      }
      fft::forward(H);
      for (std::size_t i = 0; i < L; ++i) H[i] = R[i] * std::conj(H[i]);
      fft::inverse(H);
      const double scale = 1.0 / (fs * static_cast<double>(M));
      for (std::size_t j = 0; j < nd; ++j) s.magnitude[r * nd + j] = std::abs(H[j]) * scale;
    });
    out.frames.push_back(std::move(fr));
  }
  return out;
}

CasResult run_cas(const CasScenario& s, const PulseTrain& train, const MfBankConfig& cfg) {
  const double c = s.sound_speed;
  const std::size_t M = cfg.coherent_pulses(train.size());
  const auto vel = cfg.velocities.empty() ? velocity_grid(10.0, 0.25) : cfg.velocities;
  double eta_min = 1.0;
  for (double v : vel) eta_min = std::min(eta_min, eta_from_velocity(v, c));
  const double max_delay = cfg.max_delay > 0.0 ? cfg.max_delay : 0.5 * train.period();
  std::size_t last = 0;
  for (std::size_t k : cfg.revisits) last = std::max(last, k);
  const double duration =
      static_cast<double>(last) * train.pri + max_delay + static_cast<double>(M) * train.pri / eta_min + 1.0;

  CasResult res;
  res.tbp = train.tbp(M);
  res.output = mf_bank_process(synth_received(s, train, duration), train, cfg, c);

  auto db = [](double x) { return 20.0 * std::log10(std::max(x, 1e-300)); };
  const double dcell = 1.0 / train.pulse_bandwidth;
  const double vcell = median_step(vel);

  if (s.direct_blast) {
    const auto blast = mf_bank_process(synth_received(s, train, duration, std::vector<bool>(s.targets.size(), false),
                                                      true, false),
                                       train, cfg, c);
    double m = 0.0;
    for (const auto& f : blast.frames)
      for (std::size_t r = 0; r < f.surface.rows(); ++r)
        for (std::size_t j = 0; j < f.surface.cols(); ++j)
          if (f.surface.delay[j] >= train.pri) m = std::max(m, f.surface.at(r, j));
    res.blast_residual_db = db(m);
  } else {
    res.blast_residual_db = -std::numeric_limits<double>::infinity();
  }

  for (std::size_t k = 0; k < s.targets.size(); ++k) {
    std::vector<bool> mask(s.targets.size(), true);
    mask[k] = false;
    const auto rest = mf_bank_process(synth_received(s, train, duration, mask), train, cfg, c);
    const auto& tg = s.targets[k];
    for (std::size_t fi = 0; fi < res.output.frames.size(); ++fi) {
      const auto& full = res.output.frames[fi];
      const auto& other = rest.frames[fi].surface;
      const auto& sf = full.surface;
      TargetReport rep;
      rep.target = k;
      rep.revisit = full.revisit;
      const double rx = receive_time(s, tg, full.time_offset);
      rep.expected_delay = rx - full.time_offset;
      rep.expected_velocity = velocity_at(tg, 0.5 * (rx + full.time_offset));
      double best = -1.0, intf = 0.0;
      for (std::size_t r = 0; r < sf.rows(); ++r) {
        const bool near_v = std::fabs(sf.velocity[r] - rep.expected_velocity) <= 4.0 * vcell;
        for (std::size_t j = 0; j < sf.cols(); ++j) {
          const double dt = std::fabs(sf.delay[j] - rep.expected_delay);
          if (near_v && dt <= 2.0 * dcell && sf.at(r, j) > best) {
            best = sf.at(r, j);
            rep.peak_delay = sf.delay[j];
            rep.peak_velocity = sf.velocity[r];
          }
          if (dt <= cfg.detect_window) intf = std::max(intf, other.at(r, j));
        }
      }
      require(best >= 0.0, "CAS: target lies outside the processed delay/velocity window");
      rep.peak_db = db(best);
      rep.interference_db = db(intf);
      rep.delay_error_cells = (rep.peak_delay - rep.expected_delay) / dcell;
      rep.velocity_error_cells = (rep.peak_velocity - rep.expected_velocity) / vcell;
      rep.detected = rep.peak_db > rep.interference_db;
      res.reports.push_back(rep);
    }
  }
  return res;
}

}  // namespace gsfm
