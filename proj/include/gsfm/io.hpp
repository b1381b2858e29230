#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "gsfm/ambiguity.hpp"
#include "gsfm/cas.hpp"
#include "gsfm/mainlobe.hpp"
#include "gsfm/metrics.hpp"
#include "gsfm/mmf.hpp"
#include "gsfm/wavegen.hpp"

// Descriptor parsing and file formats. Parse failures throw ConfigError,
// file failures throw IoError. Schemas are documented in README.md.
namespace gsfm::io {

using nlohmann::json;

class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

json parse_json(const std::string& text, const std::string& what = "JSON");
// Inline JSON when the argument starts with '{', otherwise a file path.
json load_json(const std::string& path_or_inline);
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& data);

TaperSpec taper_from_json(const json& j);
json to_json(const TaperSpec& t);
GsfmParams gsfm_params_from_json(const json& j);
json to_json(const GsfmParams& p);
SfmParams sfm_params_from_json(const json& j);
AfModel af_model_from_string(const std::string& s);
std::string to_string(AfModel m);

// Waveform from a generator descriptor ({"type": "gsfm", ...}) or from a
// serialized waveform ({"format": "gsfm-waveform", ...}).
Waveform waveform_from_json(const json& j);
// By extension: .bin is binary, anything else JSON.
Waveform load_waveform(const std::string& path_or_inline);

json waveform_header(const Waveform& w);
std::string waveform_to_json(const Waveform& w);
std::string waveform_to_binary(const Waveform& w);
Waveform waveform_from_binary(const std::string& bytes);
void write_waveform_csv(const Waveform& w, std::ostream& os);
void save_waveform(const Waveform& w, const std::string& path, const std::string& format);

void write_spectrum_csv(const Waveform& w, std::ostream& os);
void write_spectrogram_csv(const Spectrogram& s, std::ostream& os);

// magnitude_db = 20 log10(|χ| / reference); reference <= 0 uses the surface peak.
void write_surface_csv(const AmbiguitySurface& s, std::ostream& os, double reference = 0.0);
std::string surface_to_binary(const AmbiguitySurface& s);
void write_qfunction_csv(const QFunction& q, std::ostream& os);

json to_json(const EoaParams& e);
EoaParams eoa_from_json(const json& j);
void write_contour_csv(const std::vector<std::pair<double, double>>& pts, std::ostream& os);

void write_sweep_csv(const SweepResult& r, std::ostream& os);
json sweep_summary(const SweepResult& r);
// "a:step:b" or a single value.
std::vector<double> parse_range(const std::string& spec);

json to_json(const MmfReport& r);
void write_mmf_trace_csv(const MmfSearch& s, std::ostream& os);

PulseTrainSpec train_spec_from_json(const json& j);
CasScenario scenario_from_json(const json& j);
MfBankConfig mf_config_from_json(const json& j);
CpiStrategy strategy_from_string(const std::string& s);
std::string to_string(CpiStrategy s);
void write_cas_frame_csv(const MfBankFrame& f, std::ostream& os);
json cas_summary(const CasScenario& s, const CasResult& r);

}  // namespace gsfm::io
