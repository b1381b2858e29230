#include "gsfm/gsfm.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <memory>
#include <sstream>
#include <string>

#include "gsfm/errors.hpp"
#include "gsfm/io.hpp"

struct gsfm_waveform {
  gsfm::Waveform w;
};

struct gsfm_surface {
  gsfm::AmbiguitySurface s;
};

namespace {

using gsfm::io::json;

thread_local std::string g_last_error;

template <class F>
int guarded(F&& f) {
  g_last_error.clear();
  try {
    f();
    return GSFM_OK;
  } catch (const gsfm::ConfigError& e) {
    g_last_error = e.what();
    return GSFM_ERR_CONFIG;
  } catch (const gsfm::DomainError& e) {
    g_last_error = e.what();
    return GSFM_ERR_DOMAIN;
  } catch (const gsfm::io::IoError& e) {
    g_last_error = e.what();
    // A missing input is a configuration problem; unwritable output is not.
    return std::strncmp(e.what(), "cannot open", 11) == 0 ? GSFM_ERR_CONFIG : GSFM_ERR_IO;
  } catch (const std::invalid_argument& e) {
    g_last_error = e.what();
    return GSFM_ERR_ARGUMENT;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return GSFM_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return GSFM_ERR_INTERNAL;
  }
}

void need(const void* p, const char* name) {
  if (p == nullptr) throw std::invalid_argument(std::string(name) + " must not be NULL");
}

char* dup(const std::string& s) {
  auto* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

json options(const char* text, const char* what) {
  if (text == nullptr || *text == '\0') return json::object();
  auto j = gsfm::io::parse_json(text, what);
  if (!j.is_object()) throw gsfm::ConfigError(std::string(what) + ": expected a JSON object");
  return j;
}

gsfm::AfOptions af_options(const json& j) {
  for (const auto& [k, v] : j.items())
    if (k != "model" && k != "velocity_max" && k != "velocity_step" && k != "max_delay" && k != "delay_stride" &&
        k != "sound_speed")
      throw gsfm::ConfigError("AF options: unknown field \"" + k + "\"");
  gsfm::AfOptions o;
  try {
    o.model = gsfm::io::af_model_from_string(j.value("model", std::string("broadband")));
    o.sound_speed = j.value("sound_speed", gsfm::kSoundSpeed);
    const double vmax = j.value("velocity_max", 20.0), vstep = j.value("velocity_step", 0.25);
    if (vmax <= 0.0 || vstep <= 0.0) throw gsfm::ConfigError("AF options: velocity_max and velocity_step must be > 0");
    o.velocities = gsfm::velocity_grid(vmax, vstep);
    o.max_delay = j.value("max_delay", 0.0);
    o.delay_stride = j.value("delay_stride", std::size_t{1});
  } catch (const json::exception& e) {
    throw gsfm::ConfigError(std::string("AF options: ") + e.what());
  }
  return o;
}

void save_stream(const std::string& path, const std::ostringstream& ss) { gsfm::io::write_file(path, ss.str()); }

}  // namespace

extern "C" {

const char* gsfm_version(void) { return "0.1.0"; }

const char* gsfm_last_error(void) { return g_last_error.c_str(); }

void gsfm_string_free(char* s) { std::free(s); }

int gsfm_waveform_load(const char* src, gsfm_waveform** out) {
  return guarded([&] {
    need(src, "src");
    need(out, "out");
    *out = nullptr;
    auto h = std::make_unique<gsfm_waveform>();
    h->w = gsfm::io::load_waveform(src);
    *out = h.release();
  });
}

int gsfm_waveform_save(const gsfm_waveform* w, const char* path, const char* format) {
  return guarded([&] {
    need(w, "waveform");
    need(path, "path");
    gsfm::io::save_waveform(w->w, path, format ? format : "json");
  });
}

int gsfm_waveform_info_get(const gsfm_waveform* w, gsfm_waveform_info* out) {
  return guarded([&] {
    need(w, "waveform");
    need(out, "out");
    *out = {w->w.size(), w->w.sample_rate, w->w.duration, w->w.carrier, w->w.energy()};
  });
}

int gsfm_waveform_samples(const gsfm_waveform* w, double* interleaved, size_t capacity) {
  return guarded([&] {
    need(w, "waveform");
    need(interleaved, "buffer");
    const std::size_t n = std::min(capacity, w->w.size());
    for (std::size_t i = 0; i < n; ++i) {
      interleaved[2 * i] = w->w.samples[i].real();
      interleaved[2 * i + 1] = w->w.samples[i].imag();
    }
  });
}

int gsfm_waveform_report(const gsfm_waveform* w, char** json_out) {
  return guarded([&] {
    need(w, "waveform");
    need(json_out, "json_out");
    const gsfm::SpectralDensity sd(w->w);
    const double c = sd.centroid();
    json j = {{"label", w->w.label},
              {"samples", w->w.size()},
              {"energy", w->w.energy()},
              {"centroid_hz", c},
              {"bandwidth_98_hz", sd.percent_bandwidth(c, 0.98)},
              {"papr_db", nullptr}};
    // PAPR needs the passband to be representable; leave it null otherwise.
    try {
      j["papr_db"] = gsfm::papr_db(w->w);
    } catch (const gsfm::DomainError&) {
    }
    *json_out = dup(j.dump(2));
  });
}

int gsfm_waveform_spectrum_save(const gsfm_waveform* w, const char* path) {
  return guarded([&] {
    need(w, "waveform");
    need(path, "path");
    std::ostringstream ss;
    gsfm::io::write_spectrum_csv(w->w, ss);
    save_stream(path, ss);
  });
}

int gsfm_waveform_spectrogram_save(const gsfm_waveform* w, const char* path) {
  return guarded([&] {
    need(w, "waveform");
    need(path, "path");
    std::ostringstream ss;
    gsfm::io::write_spectrogram_csv(gsfm::spectrogram(w->w), ss);
    save_stream(path, ss);
  });
}

void gsfm_waveform_free(gsfm_waveform* w) { delete w; }

int gsfm_af_compute(const gsfm_waveform* w1, const gsfm_waveform* w2, const char* options_json, gsfm_surface** out) {
  return guarded([&] {
    need(w1, "w1");
    need(out, "out");
    *out = nullptr;
    const auto opt = af_options(options(options_json, "AF options"));
    auto h = std::make_unique<gsfm_surface>();
    h->s = w2 ? gsfm::xaf(w1->w, w2->w, opt) : gsfm::xaf(w1->w, opt);
    *out = h.release();
  });
}

int gsfm_surface_dims(const gsfm_surface* s, size_t* rows, size_t* cols) {
  return guarded([&] {
    need(s, "surface");
    if (rows) *rows = s->s.rows();
    if (cols) *cols = s->s.cols();
  });
}

int gsfm_surface_save(const gsfm_surface* s, const char* path, const char* format) {
  return guarded([&] {
    need(s, "surface");
    need(path, "path");
    const std::string f = format ? format : "csv";
    if (f == "csv") {
      std::ostringstream ss;
      gsfm::io::write_surface_csv(s->s, ss);
      save_stream(path, ss);
    } else if (f == "bin") {
      gsfm::io::write_file(path, gsfm::io::surface_to_binary(s->s));
    } else {
      throw gsfm::ConfigError("surface format must be csv or bin");
    }
  });
}

int gsfm_surface_report(const gsfm_surface* s, char** json_out) {
  return guarded([&] {
    need(s, "surface");
    need(json_out, "json_out");
    const auto& sf = s->s;
    const auto p = gsfm::psl(sf);
    json j = {{"model", gsfm::io::to_string(sf.model)},
              {"rows", sf.rows()},
              {"cols", sf.cols()},
              {"peak", p.peak},
              {"psl_db", p.psl_db},
              {"psl_delay_s", sf.delay[p.col]},
              {"psl_velocity_mps", sf.velocity[p.row]},
              {"width_delay_s", gsfm::mainlobe_width(sf, gsfm::Axis::delay)},
              {"width_velocity_mps", gsfm::mainlobe_width(sf, gsfm::Axis::doppler)}};
    *json_out = dup(j.dump(2));
  });
}

int gsfm_surface_qfunction(const gsfm_surface* s, const char* csv_path, char** json_out) {
  return guarded([&] {
    need(s, "surface");
    const auto q = gsfm::qfunction(s->s);
    if (csv_path) {
      std::ostringstream ss;
      gsfm::io::write_qfunction_csv(q, ss);
      save_stream(csv_path, ss);
    }
    if (json_out) {
      const auto n = gsfm::notch_depth(q);
      json j = {{"notch_depth_db", n.depth_db},
                {"min_db", n.min_db},
                {"median_db", n.median_db},
                {"min_velocity_mps", n.velocity}};
      *json_out = dup(j.dump(2));
    }
  });
}

void gsfm_surface_free(gsfm_surface* s) { delete s; }

int gsfm_eoa(const gsfm_waveform* w, const char* descriptor_json, const char* model, char** json_out) {
  return guarded([&] {
    need(w, "waveform");
    need(json_out, "json_out");
    const auto m = gsfm::io::af_model_from_string(model ? model : "broadband");
    json j = {{"numeric", gsfm::io::to_json(gsfm::eoa_numeric(w->w, m))}};
    if (descriptor_json && *descriptor_json) {
      const auto d = gsfm::io::load_json(descriptor_json);
      if (d.value("type", std::string()) == "gsfm") {
        const auto p = gsfm::io::gsfm_params_from_json(d);
        if (p.symmetry == gsfm::IfSymmetry::even && p.variant != gsfm::GsfmVariant::approx &&
            p.taper.kind == gsfm::TaperSpec::Kind::rectangular)
          j["closed_form"] = gsfm::io::to_json(gsfm::eoa_closed_form(p, m));
      }
    }
    *json_out = dup(j.dump(2));
  });
}

int gsfm_eoa_contour_save(const char* eoa_json, double epsilon, size_t points, const char* path) {
  return guarded([&] {
    need(eoa_json, "eoa_json");
    need(path, "path");
    const auto e = gsfm::io::eoa_from_json(gsfm::io::parse_json(eoa_json, "EOA"));
    std::ostringstream ss;
    gsfm::io::write_contour_csv(gsfm::eoa_contour(e, epsilon, points), ss);
    save_stream(path, ss);
  });
}

int gsfm_psl_sweep(const char* base_json, const char* rho_range, const char* cycles_range, const char* options_json,
                   const char* csv_path, char** summary_json) {
  return guarded([&] {
    need(base_json, "base_json");
    need(rho_range, "rho_range");
    need(cycles_range, "cycles_range");
    const auto base = gsfm::io::gsfm_params_from_json(gsfm::io::load_json(base_json));
    auto o = options(options_json, "sweep options");
    const unsigned threads = o.value("threads", 0u);
    o.erase("threads");
    const auto r = gsfm::psl_sweep(base, gsfm::io::parse_range(rho_range), gsfm::io::parse_range(cycles_range),
                                   af_options(o), threads);
    if (csv_path) {
      std::ostringstream ss;
      gsfm::io::write_sweep_csv(r, ss);
      save_stream(csv_path, ss);
    }
    if (summary_json) *summary_json = dup(gsfm::io::sweep_summary(r).dump(2));
  });
}

int gsfm_mmf(const gsfm_waveform* w, const char* options_json, gsfm_waveform** filter_out, char** report_json) {
  return guarded([&] {
    need(w, "waveform");
    if (filter_out) *filter_out = nullptr;
    const auto o = options(options_json, "MMF options");
    for (const auto& [k, v] : o.items())
      if (k != "alpha_k" && k != "alpha_t" && k != "search" && k != "trace" && k != "af" && k != "threads")
        throw gsfm::ConfigError("MMF options: unknown field \"" + k + "\"");
    const auto af = af_options(o.value("af", json::object()));
    double ak = 0.0, at = 0.0;
    json rep;
    try {
      if (o.value("search", false)) {
        const auto s = gsfm::mmf_grid_search(w->w, {}, {}, af, o.value("threads", 0u));
        if (o.contains("trace")) {
          std::ostringstream ss;
          gsfm::io::write_mmf_trace_csv(s, ss);
          save_stream(o.at("trace").get<std::string>(), ss);
        }
        ak = s.cells[s.best].alpha_k;
        at = s.cells[s.best].alpha_t;
        rep = gsfm::io::to_json(s.cells[s.best].report);
      } else {
        ak = o.value("alpha_k", 0.0);
        at = o.value("alpha_t", 0.0);
      }
    } catch (const json::exception& e) {
      throw gsfm::ConfigError(std::string("MMF options: ") + e.what());
    }
    auto f = gsfm::design_mmf(w->w, ak, at);
    if (rep.is_null()) rep = gsfm::io::to_json(gsfm::mmf_report(w->w, f, af));
    rep["alpha_k"] = ak;
    rep["alpha_t"] = at;
    rep["band_factor"] = gsfm::kMmfBandFactor;
    if (report_json) *report_json = dup(rep.dump(2));
    if (filter_out) {
      auto h = std::make_unique<gsfm_waveform>();
      h->w = std::move(f);
      *filter_out = h.release();
    }
  });
}

int gsfm_cas_run(const char* scenario_json, const char* overrides_json, const char* out_dir, char** summary_json) {
  return guarded([&] {
    need(scenario_json, "scenario_json");
    auto j = gsfm::io::load_json(scenario_json);
    if (!j.is_object()) throw gsfm::ConfigError("scenario: expected a JSON object");
    json proc = j.value("processing", json::object());
    proc.merge_patch(options(overrides_json, "processing overrides"));
    const auto train = gsfm::build_pulse_train(gsfm::io::train_spec_from_json(j.value("train", json::object())));
    const auto scen = gsfm::io::scenario_from_json(j);
    const auto cfg = gsfm::io::mf_config_from_json(proc);
    const auto res = gsfm::run_cas(scen, train, cfg);
    const auto summary = gsfm::io::cas_summary(scen, res);
    if (out_dir) {
      std::error_code ec;
      std::filesystem::create_directories(out_dir, ec);
      if (ec) throw gsfm::io::IoError(std::string("cannot create ") + out_dir);
      const std::filesystem::path dir(out_dir);
      for (const auto& f : res.output.frames) {
        std::ostringstream ss;
        gsfm::io::write_cas_frame_csv(f, ss);
        save_stream((dir / ("revisit_" + std::to_string(f.revisit) + ".csv")).string(), ss);
      }
      gsfm::io::write_file((dir / "summary.json").string(), summary.dump(2) + "\n");
    }
    if (summary_json) *summary_json = dup(summary.dump(2));
  });
}

}  // extern "C"
