#include "gsfm/io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <ostream>
#include <sstream>

#include "gsfm/errors.hpp"

namespace gsfm::io {
namespace {

constexpr char kWaveMagic[8] = {'G', 'S', 'F', 'M', 'W', 'A', 'V', '1'};
constexpr char kSurfMagic[8] = {'G', 'S', 'F', 'M', 'S', 'U', 'R', '1'};

void check_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& what) {
  if (!j.is_object()) throw ConfigError(what + ": expected a JSON object");
  for (const auto& [k, v] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || k == a;
    if (!ok) throw ConfigError(what + ": unknown field \"" + k + "\"");
  }
}

template <class T>
T get(const json& j, const char* key, T def) {
  if (!j.contains(key) || j.at(key).is_null()) return def;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("field \"") + key + "\" has the wrong type");
  }
}

template <class T>
T need(const json& j, const char* key, const std::string& what) {
  if (!j.contains(key)) throw ConfigError(what + ": missing field \"" + key + "\"");
  return get<T>(j, key, T{});
}

std::string fmt(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

double db20(double x) { return 20.0 * std::log10(std::max(x, 1e-15)); }

// Numbers in summaries must stay valid JSON.
json num(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

TimeOrigin origin_from(const json& j, TimeOrigin def) {
  const auto s = get<std::string>(j, "origin", "");
  if (s.empty()) return def;
  if (s == "zero_start") return TimeOrigin::zero_start;
  if (s == "centered") return TimeOrigin::centered;
  throw ConfigError("origin must be zero_start or centered");
}

std::string to_string(TimeOrigin o) { return o == TimeOrigin::centered ? "centered" : "zero_start"; }

const char* base64_chars = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

std::string base64_encode(const std::string& in) {
  std::string out;
  out.reserve((in.size() + 2) / 3 * 4);
  std::size_t i = 0;
  for (; i + 2 < in.size(); i += 3) {
    const std::uint32_t v = (std::uint8_t(in[i]) << 16) | (std::uint8_t(in[i + 1]) << 8) | std::uint8_t(in[i + 2]);
    for (int s = 18; s >= 0; s -= 6) out += base64_chars[(v >> s) & 63];
  }
  if (i < in.size()) {
    std::uint32_t v = std::uint8_t(in[i]) << 16;
    if (i + 1 < in.size()) v |= std::uint8_t(in[i + 1]) << 8;
    out += base64_chars[(v >> 18) & 63];
    out += base64_chars[(v >> 12) & 63];
    out += i + 1 < in.size() ? base64_chars[(v >> 6) & 63] : '=';
    out += '=';
  }
  return out;
}

std::string base64_decode(const std::string& in) {
  int lut[256];
  std::fill(std::begin(lut), std::end(lut), -1);
  for (int k = 0; k < 64; ++k) lut[static_cast<unsigned char>(base64_chars[k])] = k;
  std::string out;
  std::uint32_t acc = 0;
  int bits = 0;
  for (char c : in) {
    if (c == '=') break;
    const int v = lut[static_cast<unsigned char>(c)];
    if (v < 0) throw ConfigError("waveform data: invalid base64");
    acc = (acc << 6) | static_cast<std::uint32_t>(v);
    bits += 6;
    if (bits >= 8) {
      bits -= 8;
      out += static_cast<char>((acc >> bits) & 0xFF);
    }
  }
  return out;
}

static_assert(std::endian::native == std::endian::little, "binary formats assume a little-endian host");

std::string samples_to_bytes(const std::vector<cd>& v) {
  std::string out(v.size() * 16, '\0');
  std::memcpy(out.data(), v.data(), out.size());
  return out;
}

std::vector<cd> bytes_to_samples(const std::string& b, std::size_t n) {
  if (b.size() != n * 16) throw ConfigError("waveform data: length does not match the sample count");
  std::vector<cd> v(n);
  std::memcpy(v.data(), b.data(), b.size());
  return v;
}

std::string framed(const char (&magic)[8], const json& header, const std::string& payload) {
  const std::string h = header.dump();
  std::string out(magic, 8);
  const auto len = static_cast<std::uint32_t>(h.size());
  out.append(reinterpret_cast<const char*>(&len), 4);
  out += h;
  out += payload;
  return out;
}

Waveform waveform_from_header(const json& h, std::vector<cd> samples) {
  Waveform w;
  w.samples = std::move(samples);
  w.sample_rate = need<double>(h, "sample_rate", "waveform");
  w.duration = need<double>(h, "duration", "waveform");
  w.carrier = get<double>(h, "carrier", 0.0);
  w.label = get<std::string>(h, "label", "");
  const auto o = get<std::string>(h, "time_origin", "zero_start");
  if (o != "zero_start" && o != "centered") throw ConfigError("waveform: time_origin must be zero_start or centered");
  w.origin = o == "centered" ? TimeOrigin::centered : TimeOrigin::zero_start;
  if (w.sample_rate <= 0.0 || w.duration <= 0.0) throw ConfigError("waveform: sample_rate and duration must be > 0");
  return w;
}

std::vector<int> bits_from(const json& j) {
  if (j.contains("bits")) return get<std::vector<int>>(j, "bits", {});
  if (j.contains("mlsr")) return mlsr_code(get<int>(j, "mlsr", 0));
  if (j.contains("random")) {
    const auto& r = j.at("random");
    check_keys(r, {"n", "seed"}, "random bits");
    return random_bits(need<std::size_t>(r, "n", "random bits"), get<std::uint64_t>(r, "seed", 0));
  }
  throw ConfigError("psk: one of bits, mlsr or random is required");
}

}  // namespace

json parse_json(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(what + ": " + e.what());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& data) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot write " + path);
  f << data;
  if (!f) throw IoError("write failed for " + path);
}

json load_json(const std::string& src) {
  const auto p = src.find_first_not_of(" \t\r\n");
  if (p != std::string::npos && src[p] == '{') return parse_json(src, "inline JSON");
  return parse_json(read_file(src), src);
}

TaperSpec taper_from_json(const json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "rectangular") return {};
    if (j.get<std::string>() == "hanning") return TaperSpec::hanning();
    throw ConfigError("taper: unknown name " + j.get<std::string>());
  }
  check_keys(j, {"kind", "shape"}, "taper");
  const auto k = get<std::string>(j, "kind", "rectangular");
  const double s = get<double>(j, "shape", 0.0);
  if (k == "rectangular") return {};
  if (k == "tukey") return TaperSpec::tukey(s);
  if (k == "hanning") return TaperSpec::hanning();
  if (k == "kaiser") return TaperSpec::kaiser(s);
  throw ConfigError("taper: kind must be rectangular, tukey, hanning or kaiser");
}

json to_json(const TaperSpec& t) {
  static const char* names[] = {"rectangular", "tukey", "hanning", "kaiser"};
  return {{"kind", names[static_cast<int>(t.kind)]}, {"shape", t.shape}};
}

GsfmParams gsfm_params_from_json(const json& j) {
  check_keys(j,
             {"type", "duration", "carrier", "bandwidth", "rho", "alpha", "cycles", "variant", "symmetry",
              "sample_rate", "taper", "reflection", "label"},
             "gsfm");
  GsfmParams p;
  p.duration = get<double>(j, "duration", p.duration);
  p.carrier = get<double>(j, "carrier", p.carrier);
  p.bandwidth = get<double>(j, "bandwidth", p.bandwidth);
  p.rho = get<double>(j, "rho", p.rho);
  p.sample_rate = get<double>(j, "sample_rate", 0.0);
  const auto v = get<std::string>(j, "variant", "gsfi");
  if (v == "gsfi") p.variant = GsfmVariant::gsfi;
  else if (v == "gcfi") p.variant = GsfmVariant::gcfi;
  else if (v == "approx") p.variant = GsfmVariant::approx;
  else throw ConfigError("gsfm: variant must be gsfi, gcfi or approx");
  const auto s = get<std::string>(j, "symmetry", "even");
  if (s == "even") p.symmetry = IfSymmetry::even;
  else if (s == "nonsymmetric") p.symmetry = IfSymmetry::nonsymmetric;
  else throw ConfigError("gsfm: symmetry must be even or nonsymmetric");
  if (j.contains("taper")) p.taper = taper_from_json(j.at("taper"));
  if (j.contains("alpha") && j.contains("cycles")) throw ConfigError("gsfm: give alpha or cycles, not both");
  if (j.contains("cycles")) {
    p.alpha = GsfmParams::alpha_for_cycles(get<double>(j, "cycles", 0.0), p.duration, p.rho, p.symmetry);
  } else {
    p.alpha = need<double>(j, "alpha", "gsfm");
  }
  return p;
}

json to_json(const GsfmParams& p) {
  static const char* var[] = {"gsfi", "gcfi", "approx"};
  return {{"type", "gsfm"},
          {"duration", p.duration},
          {"carrier", p.carrier},
          {"bandwidth", p.bandwidth},
          {"rho", p.rho},
          {"alpha", p.alpha},
          {"variant", var[static_cast<int>(p.variant)]},
          {"symmetry", p.symmetry == IfSymmetry::even ? "even" : "nonsymmetric"},
          {"sample_rate", p.sample_rate},
          {"taper", to_json(p.taper)}};
}

SfmParams sfm_params_from_json(const json& j) {
  check_keys(j, {"type", "duration", "carrier", "bandwidth", "mod_freq", "phase", "origin", "sample_rate", "taper", "label"},
             "sfm");
  SfmParams p;
  p.duration = get<double>(j, "duration", p.duration);
  p.carrier = get<double>(j, "carrier", p.carrier);
  p.bandwidth = get<double>(j, "bandwidth", p.bandwidth);
  p.mod_freq = get<double>(j, "mod_freq", p.mod_freq);
  const auto ph = get<std::string>(j, "phase", "sine");
  if (ph != "sine" && ph != "cosine") throw ConfigError("sfm: phase must be sine or cosine");
  p.phase = ph == "sine" ? SfmParams::Phase::sine : SfmParams::Phase::cosine;
  p.origin = origin_from(j, p.origin);
  p.sample_rate = get<double>(j, "sample_rate", 0.0);
  if (j.contains("taper")) p.taper = taper_from_json(j.at("taper"));
  return p;
}

AfModel af_model_from_string(const std::string& s) {
  if (s == "broadband") return AfModel::broadband;
  if (s == "narrowband") return AfModel::narrowband;
  throw ConfigError("model must be broadband or narrowband");
}

std::string to_string(AfModel m) { return m == AfModel::broadband ? "broadband" : "narrowband"; }

Waveform waveform_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("waveform: expected a JSON object");
  if (j.contains("format")) {
    check_keys(j, {"format", "label", "duration", "carrier", "sample_rate", "time_origin", "samples", "data"},
               "waveform");
    if (get<std::string>(j, "format", "") != "gsfm-waveform") throw ConfigError("waveform: unknown format");
    const auto n = need<std::size_t>(j, "samples", "waveform");
    return waveform_from_header(j, bytes_to_samples(base64_decode(need<std::string>(j, "data", "waveform")), n));
  }
  const auto type = need<std::string>(j, "type", "waveform descriptor");
  const auto label = get<std::string>(j, "label", "");
  Waveform w;
  if (type == "gsfm") {
    const auto p = gsfm_params_from_json(j);
    const auto refl = get<std::string>(j, "reflection", "");
    if (refl.empty()) {
      w = gen_gsfm(p);
    } else {
      const auto f = gsfm_reflections(p);
      if (refl == "forward") w = f.forward;
      else if (refl == "reversed") w = f.reversed;
      else if (refl == "forward_conj") w = f.forward_conj;
      else if (refl == "reversed_conj") w = f.reversed_conj;
      else if (refl == "even") w = f.even;
      else if (refl == "even_conj") w = f.even_conj;
      else throw ConfigError("gsfm: unknown reflection " + refl);
    }
  } else if (type == "sfm") {
    w = gen_sfm(sfm_params_from_json(j));
  } else if (type == "cw" || type == "lfm" || type == "hfm") {
    check_keys(j, {"type", "duration", "carrier", "bandwidth", "origin", "sample_rate", "taper", "label"}, type);
    ClassicParams p;
    p.kind = type == "cw" ? ClassicKind::cw : type == "lfm" ? ClassicKind::lfm : ClassicKind::hfm;
    p.duration = get<double>(j, "duration", p.duration);
    p.carrier = get<double>(j, "carrier", p.carrier);
    p.bandwidth = get<double>(j, "bandwidth", p.bandwidth);
    p.origin = origin_from(j, p.origin);
    p.sample_rate = get<double>(j, "sample_rate", 0.0);
    if (j.contains("taper")) p.taper = taper_from_json(j.at("taper"));
    w = gen_classic(p);
  } else if (type == "costas") {
    check_keys(j, {"type", "code", "welch", "duration", "carrier", "bandwidth", "origin", "sample_rate", "chip_taper", "label"},
               "costas");
    CostasParams p;
    if (j.contains("code")) {
      p.code = get<std::vector<int>>(j, "code", {});
    } else if (j.contains("welch")) {
      const auto& wj = j.at("welch");
      check_keys(wj, {"p", "g", "shift", "drop_corner"}, "welch");
      p.code = welch_costas(need<int>(wj, "p", "welch"), need<int>(wj, "g", "welch"), get<int>(wj, "shift", 0),
                            get<bool>(wj, "drop_corner", false));
    } else {
      throw ConfigError("costas: code or welch is required");
    }
    p.duration = get<double>(j, "duration", p.duration);
    p.carrier = get<double>(j, "carrier", p.carrier);
    p.bandwidth = get<double>(j, "bandwidth", p.bandwidth);
    p.origin = origin_from(j, p.origin);
    p.sample_rate = get<double>(j, "sample_rate", 0.0);
    if (j.contains("chip_taper")) p.chip_taper = taper_from_json(j.at("chip_taper"));
    w = gen_costas(p);
  } else if (type == "bpsk" || type == "qpsk") {
    check_keys(j,
               {"type", "bits", "mlsr", "random", "qpsk_sign", "duration", "carrier", "bandwidth", "origin",
                "sample_rate", "chip_taper", "label"},
               type);
    PskParams p;
    p.kind = type == "bpsk" ? PskKind::bpsk : PskKind::qpsk;
    p.bits = bits_from(j);
    p.qpsk_sign = get<int>(j, "qpsk_sign", 1);
    p.duration = get<double>(j, "duration", p.duration);
    p.carrier = get<double>(j, "carrier", p.carrier);
    p.bandwidth = get<double>(j, "bandwidth", 0.0);
    p.origin = origin_from(j, p.origin);
    p.sample_rate = get<double>(j, "sample_rate", 0.0);
    if (j.contains("chip_taper")) p.chip_taper = taper_from_json(j.at("chip_taper"));
    w = gen_psk(p);
  } else {
    throw ConfigError("waveform descriptor: unknown type " + type);
  }
  if (!label.empty()) w.label = label;
  return w;
}

Waveform load_waveform(const std::string& src) {
  if (src.size() > 4 && src.substr(src.size() - 4) == ".bin") return waveform_from_binary(read_file(src));
  return waveform_from_json(load_json(src));
}

json waveform_header(const Waveform& w) {
  return {{"format", "gsfm-waveform"},
          {"label", w.label},
          {"duration", w.duration},
          {"carrier", w.carrier},
          {"sample_rate", w.sample_rate},
          {"time_origin", to_string(w.origin)},
          {"samples", w.size()}};
}

std::string waveform_to_json(const Waveform& w) {
  auto j = waveform_header(w);
  j["data"] = base64_encode(samples_to_bytes(w.samples));
  return j.dump(2) + "\n";
}

std::string waveform_to_binary(const Waveform& w) {
  return framed(kWaveMagic, waveform_header(w), samples_to_bytes(w.samples));
}

Waveform waveform_from_binary(const std::string& b) {
  if (b.size() < 12 || std::memcmp(b.data(), kWaveMagic, 8) != 0) throw ConfigError("not a binary waveform file");
  std::uint32_t len = 0;
  std::memcpy(&len, b.data() + 8, 4);
  if (b.size() < 12 + static_cast<std::size_t>(len)) throw ConfigError("binary waveform: truncated header");
  const auto h = parse_json(b.substr(12, len), "binary waveform header");
  return waveform_from_header(h, bytes_to_samples(b.substr(12 + len), need<std::size_t>(h, "samples", "waveform")));
}

void write_waveform_csv(const Waveform& w, std::ostream& os) {
  os << "t,re,im\n";
  for (std::size_t i = 0; i < w.size(); ++i)
    os << fmt(w.time_at(i)) << ',' << fmt(w.samples[i].real()) << ',' << fmt(w.samples[i].imag()) << '\n';
}

void save_waveform(const Waveform& w, const std::string& path, const std::string& format) {
  if (format == "json") {
    write_file(path, waveform_to_json(w));
  } else if (format == "bin") {
    write_file(path, waveform_to_binary(w));
  } else if (format == "csv") {
    std::ostringstream ss;
    write_waveform_csv(w, ss);
    write_file(path, ss.str());
  } else {
    throw ConfigError("waveform format must be json, bin or csv");
  }
}

void write_spectrum_csv(const Waveform& w, std::ostream& os) {
  const SpectralDensity sd(w);
  double peak = 0.0;
  for (double d : sd.density()) peak = std::max(peak, d);
  os << "freq_hz,density_db\n";
  for (std::size_t k = 0; k < sd.freq().size(); ++k)
    os << fmt(sd.freq()[k]) << ',' << fmt(10.0 * std::log10(std::max(sd.density()[k] / peak, 1e-30))) << '\n';
}

void write_spectrogram_csv(const Spectrogram& s, std::ostream& os) {
  os << "time_s,freq_hz,power_db\n";
  for (std::size_t i = 0; i < s.time.size(); ++i)
    for (std::size_t k = 0; k < s.freq.size(); ++k)
      os << fmt(s.time[i]) << ',' << fmt(s.freq[k]) << ',' << fmt(s.power_db[i * s.freq.size() + k]) << '\n';
}

void write_surface_csv(const AmbiguitySurface& s, std::ostream& os, double reference) {
  const double ref = reference > 0.0 ? reference : s.peak();
  os << "doppler,delay_s,magnitude_db\n";
  for (std::size_t r = 0; r < s.rows(); ++r)
    for (std::size_t c = 0; c < s.cols(); ++c)
      os << fmt(s.doppler[r]) << ',' << fmt(s.delay[c]) << ',' << fmt(db20(s.at(r, c) / ref)) << '\n';
}

std::string surface_to_binary(const AmbiguitySurface& s) {
  json h = {{"format", "gsfm-surface"}, {"model", to_string(s.model)}, {"rows", s.rows()}, {"cols", s.cols()},
            {"delay", s.delay},         {"velocity", s.velocity},      {"doppler", s.doppler}};
  std::string payload(s.magnitude.size() * 8, '\0');
  std::memcpy(payload.data(), s.magnitude.data(), payload.size());
  return framed(kSurfMagic, h, payload);
}

void write_qfunction_csv(const QFunction& q, std::ostream& os) {
  os << "velocity_mps,q_db\n";
  for (std::size_t i = 0; i < q.velocity.size(); ++i) os << fmt(q.velocity[i]) << ',' << fmt(q.q_db[i]) << '\n';
}

json to_json(const EoaParams& e) {
  return {{"model", to_string(e.model)}, {"beta2", e.beta2}, {"lambda2", e.lambda2}, {"gamma", e.gamma}};
}

EoaParams eoa_from_json(const json& j) {
  check_keys(j, {"model", "beta2", "lambda2", "gamma"}, "eoa");
  EoaParams e;
  e.model = af_model_from_string(get<std::string>(j, "model", "broadband"));
  e.beta2 = need<double>(j, "beta2", "eoa");
  e.lambda2 = need<double>(j, "lambda2", "eoa");
  e.gamma = get<double>(j, "gamma", 0.0);
  return e;
}

void write_contour_csv(const std::vector<std::pair<double, double>>& pts, std::ostream& os) {
  os << "delay_s,doppler\n";
  for (const auto& [t, d] : pts) os << fmt(t) << ',' << fmt(d) << '\n';
}

void write_sweep_csv(const SweepResult& r, std::ostream& os) {
  os << "rho,cycles,tbp,psl_db\n";
  for (std::size_t i = 0; i < r.rho.size(); ++i)
    for (std::size_t j = 0; j < r.cycles.size(); ++j)
      os << fmt(r.rho[i]) << ',' << fmt(r.cycles[j]) << ',' << fmt(r.tbp) << ',' << fmt(r.at(i, j)) << '\n';
}

json sweep_summary(const SweepResult& r) {
  return {{"tbp", r.tbp},
          {"cells", r.psl_db.size()},
          {"argmin", {{"rho", r.best_rho}, {"cycles", r.best_cycles}, {"psl_db", r.best_psl_db}}}};
}

std::vector<double> parse_range(const std::string& spec) {
  std::vector<double> parts;
  std::stringstream ss(spec);
  std::string tok;
  while (std::getline(ss, tok, ':')) {
    try {
      std::size_t used = 0;
      parts.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw ConfigError("range \"" + spec + "\": expected a:step:b or a number");
    }
  }
  if (parts.size() == 1) return parts;
  if (parts.size() != 3 || parts[1] <= 0.0 || parts[2] < parts[0])
    throw ConfigError("range \"" + spec + "\": expected a:step:b with step > 0 and b >= a");
  std::vector<double> v;
  const auto n = static_cast<std::size_t>(std::floor((parts[2] - parts[0]) / parts[1] + 1e-9));
  for (std::size_t i = 0; i <= n; ++i) v.push_back(parts[0] + static_cast<double>(i) * parts[1]);
  return v;
}

json to_json(const MmfReport& r) {
  return {{"psl_db", r.psl_db},
          {"mf_psl_db", r.mf_psl_db},
          {"snrl_db", r.snrl_db},
          {"width_delay_s", r.width_delay},
          {"width_doppler_mps", r.width_doppler},
          {"widen_delay", r.widen_delay},
          {"widen_doppler", r.widen_doppler},
          {"widen_product", r.widen_product()},
          {"psl_delay_s", r.psl_delay},
          {"psl_velocity_mps", r.psl_velocity}};
}

void write_mmf_trace_csv(const MmfSearch& s, std::ostream& os) {
  os << "alpha_k,alpha_t,psl_db,snrl_db,widen_delay,widen_doppler\n";
  for (const auto& c : s.cells)
    os << fmt(c.alpha_k) << ',' << fmt(c.alpha_t) << ',' << fmt(c.report.psl_db) << ',' << fmt(c.report.snrl_db) << ','
       << fmt(c.report.widen_delay) << ',' << fmt(c.report.widen_doppler) << '\n';
}

PulseTrainSpec train_spec_from_json(const json& j) {
  check_keys(j,
             {"kind", "pulses", "pri", "system_bandwidth", "center", "families", "variant", "taper", "band_divisor",
              "pulse_bandwidth", "first_center", "step", "hop_code", "sample_rate"},
             "train");
  PulseTrainSpec s;
  const auto k = get<std::string>(j, "kind", "fbpt");
  if (k == "fbpt") s.kind = TrainKind::fbpt;
  else if (k == "sbpt") s.kind = TrainKind::sbpt;
  else if (k == "obpt") s.kind = TrainKind::obpt;
  else throw ConfigError("train: kind must be fbpt, sbpt or obpt");
  s.pulses = get<std::size_t>(j, "pulses", s.pulses);
  s.pri = get<double>(j, "pri", s.pri);
  s.system_bandwidth = get<double>(j, "system_bandwidth", s.system_bandwidth);
  s.center = get<double>(j, "center", s.center);
  if (j.contains("families")) {
    s.families.clear();
    for (const auto& f : j.at("families")) {
      if (!f.is_array() || f.size() != 2 || !f[0].is_number() || !f[1].is_number())
        throw ConfigError("train: families must be [rho, alpha] pairs");
      s.families.emplace_back(f[0].get<double>(), f[1].get<double>());
    }
  }
  const auto v = get<std::string>(j, "variant", "gsfi");
  if (v == "gsfi") s.variant = GsfmVariant::gsfi;
  else if (v == "gcfi") s.variant = GsfmVariant::gcfi;
  else throw ConfigError("train: variant must be gsfi or gcfi");
  if (j.contains("taper")) s.taper = taper_from_json(j.at("taper"));
  s.band_divisor = get<double>(j, "band_divisor", 0.0);
  s.pulse_bandwidth = get<double>(j, "pulse_bandwidth", 0.0);
  s.first_center = get<double>(j, "first_center", 0.0);
  s.step = get<double>(j, "step", 0.0);
  s.hop_code = get<std::vector<std::size_t>>(j, "hop_code", {});
  s.sample_rate = get<double>(j, "sample_rate", 0.0);
  return s;
}

CasScenario scenario_from_json(const json& j) {
  check_keys(j,
             {"train", "targets", "sound_speed", "source_level_db", "direct_blast", "blast_spacing", "null_depth_db",
              "spreading", "echo_model", "noise_db", "noise_seed", "processing"},
             "scenario");
  CasScenario s;
  for (const auto& t : j.value("targets", json::array())) {
    check_keys(t, {"range", "velocity", "acceleration", "strength_db"}, "target");
    s.targets.push_back({need<double>(t, "range", "target"), get<double>(t, "velocity", 0.0),
                         get<double>(t, "acceleration", 0.0), get<double>(t, "strength_db", 0.0)});
  }
  s.sound_speed = get<double>(j, "sound_speed", s.sound_speed);
  s.source_level_db = get<double>(j, "source_level_db", s.source_level_db);
  s.direct_blast = get<bool>(j, "direct_blast", s.direct_blast);
  s.blast_spacing = get<double>(j, "blast_spacing", s.blast_spacing);
  s.null_depth_db = get<double>(j, "null_depth_db", s.null_depth_db);
  const auto sp = get<std::string>(j, "spreading", "cylindrical");
  if (sp != "cylindrical" && sp != "spherical") throw ConfigError("scenario: spreading must be cylindrical or spherical");
  s.spreading = sp == "cylindrical" ? Spreading::cylindrical : Spreading::spherical;
  const auto em = get<std::string>(j, "echo_model", "scale");
  if (em != "scale" && em != "kinematic") throw ConfigError("scenario: echo_model must be scale or kinematic");
  s.echo_model = em == "scale" ? EchoModel::scale : EchoModel::kinematic;
  if (j.contains("noise_db") && !j.at("noise_db").is_null()) s.noise_db = get<double>(j, "noise_db", 0.0);
  s.noise_seed = get<std::uint64_t>(j, "noise_seed", 0);
  return s;
}

CpiStrategy strategy_from_string(const std::string& s) {
  if (s == "fcpi") return CpiStrategy::fcpi;
  if (s == "spcpi") return CpiStrategy::spcpi;
  if (s == "acpi") return CpiStrategy::acpi;
  throw ConfigError("strategy must be fcpi, spcpi or acpi");
}

std::string to_string(CpiStrategy s) {
  switch (s) {
    case CpiStrategy::fcpi:
      return "fcpi";
    case CpiStrategy::spcpi:
      return "spcpi";
    case CpiStrategy::acpi:
      return "acpi";
  }
  return "";
}

MfBankConfig mf_config_from_json(const json& j) {
  check_keys(j, {"strategy", "coherent", "velocity_max", "velocity_step", "max_delay", "revisits", "detect_window", "threads"},
             "processing");
  MfBankConfig c;
  c.strategy = strategy_from_string(get<std::string>(j, "strategy", "spcpi"));
  c.coherent = get<std::size_t>(j, "coherent", c.coherent);
  const double vmax = get<double>(j, "velocity_max", 10.0), vstep = get<double>(j, "velocity_step", 0.25);
  if (vmax <= 0.0 || vstep <= 0.0) throw ConfigError("processing: velocity_max and velocity_step must be > 0");
  c.velocities = velocity_grid(vmax, vstep);
  c.max_delay = get<double>(j, "max_delay", 0.0);
  c.revisits = get<std::vector<std::size_t>>(j, "revisits", c.revisits);
  c.detect_window = get<double>(j, "detect_window", c.detect_window);
  c.threads = get<unsigned>(j, "threads", 0);
  return c;
}

void write_cas_frame_csv(const MfBankFrame& f, std::ostream& os) {
  const auto& s = f.surface;
  os << "delay_s,velocity_mps,magnitude_db\n";
  for (std::size_t r = 0; r < s.rows(); ++r)
    for (std::size_t c = 0; c < s.cols(); ++c)
      os << fmt(f.time_offset + s.delay[c]) << ',' << fmt(s.velocity[r]) << ',' << fmt(db20(s.at(r, c))) << '\n';
}

json cas_summary(const CasScenario& s, const CasResult& r) {
  json frames = json::array();
  for (const auto& f : r.output.frames) frames.push_back({{"revisit", f.revisit}, {"time_offset_s", f.time_offset}});
  json peaks = json::array();
  for (const auto& t : r.reports) {
    peaks.push_back({{"target", t.target},
                     {"revisit", t.revisit},
                     {"expected_delay_s", t.expected_delay},
                     {"expected_velocity_mps", t.expected_velocity},
                     {"peak_db", t.peak_db},
                     {"peak_delay_s", t.peak_delay},
                     {"peak_velocity_mps", t.peak_velocity},
                     {"interference_db", num(t.interference_db)},
                     {"margin_db", num(t.peak_db - t.interference_db)},
                     {"delay_error_cells", t.delay_error_cells},
                     {"velocity_error_cells", t.velocity_error_cells},
                     {"detected", t.detected}});
  }
  json levels = json::array();
  for (const auto& t : s.targets) levels.push_back(s.echo_level_db(t));
  return {{"strategy", to_string(r.output.strategy)},
          {"coherent_pulses", r.output.coherent},
          {"revisit_period_s", r.output.revisit_period},
          {"tbp", r.tbp},
          {"blast_level_db", s.blast_level_db()},
          {"echo_levels_db", levels},
          {"blast_residual_db", num(r.blast_residual_db)},
          {"frames", frames},
          {"peaks", peaks}};
}

}  // namespace gsfm::io
