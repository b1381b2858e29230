// gsfm: command-line front end over the C API.
#include <cstdio>
#include <fstream>
#include <memory>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "gsfm/gsfm.h"

namespace {

using json = nlohmann::json;

struct Failure {
  int code;
};

void check(int status) {
  if (status == GSFM_OK) return;
  std::fprintf(stderr, "gsfm: %s\n", gsfm_last_error());
  switch (status) {
    case GSFM_ERR_CONFIG:
    case GSFM_ERR_ARGUMENT:
      throw Failure{2};
    case GSFM_ERR_DOMAIN:
      throw Failure{3};
    default:
      throw Failure{1};
  }
}

struct Wave {
  gsfm_waveform* h = nullptr;
  explicit Wave(const std::string& src) { check(gsfm_waveform_load(src.c_str(), &h)); }
  Wave() = default;
  ~Wave() { gsfm_waveform_free(h); }
  Wave(const Wave&) = delete;
  Wave& operator=(const Wave&) = delete;
};

struct Surface {
  gsfm_surface* h = nullptr;
  ~Surface() { gsfm_surface_free(h); }
};

// Takes ownership of a string returned by the library.
std::string take(char* s) {
  std::string out = s ? s : "";
  gsfm_string_free(s);
  return out;
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::printf("%s\n", text.c_str());
    return;
  }
  std::ofstream f(path);
  if (!f) {
    std::fprintf(stderr, "gsfm: cannot write %s\n", path.c_str());
    throw Failure{1};
  }
  f << text << '\n';
}

struct AfFlags {
  std::string model = "broadband";
  double vmax = 20.0, vstep = 0.25, max_delay = 0.0, c = 1500.0;
  std::size_t stride = 1;

  void add(CLI::App* app) {
    app->add_option("--model", model, "broadband or narrowband")->check(CLI::IsMember({"broadband", "narrowband"}));
    app->add_option("--vmax", vmax, "velocity span ±vmax, m/s");
    app->add_option("--vstep", vstep, "velocity step, m/s");
    app->add_option("--max-delay", max_delay, "delay span ±, s (0 = pulse length)");
    app->add_option("--stride", stride, "delay stride in samples");
    app->add_option("--sound-speed", c, "m/s");
  }
  json to_json() const {
    return {{"model", model},         {"velocity_max", vmax}, {"velocity_step", vstep},
            {"max_delay", max_delay}, {"delay_stride", stride}, {"sound_speed", c}};
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"GSFM waveform toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(gsfm_version()));

  // synth
  std::string s_wave, s_out, s_format = "json", s_spec, s_sgram, s_report;
  auto* synth = app.add_subcommand("synth", "generate a waveform from a descriptor");
  synth->add_option("--waveform", s_wave, "descriptor file or inline JSON")->required();
  synth->add_option("--out", s_out, "output path")->required();
  synth->add_option("--format", s_format)->check(CLI::IsMember({"json", "bin", "csv"}));
  synth->add_option("--spectrum", s_spec, "spectrum CSV path");
  synth->add_option("--spectrogram", s_sgram, "spectrogram CSV path");
  synth->add_option("--report", s_report, "PAPR/bandwidth JSON path ('-' for stdout)");

  // af
  std::string a_wave, a_second, a_out, a_format = "csv", a_report;
  AfFlags a_flags;
  auto* af = app.add_subcommand("af", "ambiguity surface");
  af->add_option("--waveform", a_wave)->required();
  af->add_option("--second", a_second, "second waveform for the cross-ambiguity");
  af->add_option("--out", a_out)->required();
  af->add_option("--format", a_format)->check(CLI::IsMember({"csv", "bin"}));
  af->add_option("--report", a_report, "PSL/width JSON path ('-' for stdout)");
  a_flags.add(af);

  // qfunc
  std::string q_wave, q_out, q_summary;
  AfFlags q_flags;
  auto* qf = app.add_subcommand("qfunc", "Q-function of the auto-ambiguity");
  qf->add_option("--waveform", q_wave)->required();
  qf->add_option("--out", q_out)->required();
  qf->add_option("--summary", q_summary, "notch summary JSON path ('-' for stdout)");
  q_flags.add(qf);

  // eoa
  std::string e_wave, e_out, e_model = "broadband", e_contour;
  double e_level = 0.5;
  std::size_t e_points = 128;
  auto* eoa = app.add_subcommand("eoa", "ellipse-of-ambiguity parameters");
  eoa->add_option("--waveform", e_wave)->required();
  eoa->add_option("--model", e_model)->check(CLI::IsMember({"broadband", "narrowband"}));
  eoa->add_option("--out", e_out, "JSON path ('-' for stdout)");
  eoa->add_option("--contour", e_contour, "contour CSV path");
  eoa->add_option("--level", e_level, "contour level ε");
  eoa->add_option("--points", e_points);

  // psl-sweep
  std::string p_base, p_rho = "1:0.1:3", p_cycles = "5:5:60", p_out, p_summary;
  unsigned p_threads = 0;
  AfFlags p_flags;
  auto* sweep = app.add_subcommand("psl-sweep", "PSL over (rho, cycles)");
  sweep->add_option("--base", p_base, "GSFM descriptor")->required();
  sweep->add_option("--rho", p_rho, "a:step:b");
  sweep->add_option("--cycles", p_cycles, "a:step:b");
  sweep->add_option("--out", p_out)->required();
  sweep->add_option("--summary", p_summary, "JSON path (default: <out>.json)");
  sweep->add_option("--threads", p_threads);
  p_flags.add(sweep);

  // mmf
  std::string m_wave, m_out, m_filter, m_trace;
  double m_ak = 0.0, m_at = 0.0;
  bool m_search = false;
  unsigned m_threads = 0;
  AfFlags m_flags;
  auto* mmf = app.add_subcommand("mmf", "mismatched filter design and report");
  mmf->add_option("--waveform", m_wave)->required();
  mmf->add_option("--alpha-k", m_ak, "Kaiser beta of the frequency taper");
  mmf->add_option("--alpha-t", m_at, "Tukey fraction of the time taper");
  mmf->add_flag("--search", m_search, "grid search over alpha_k, alpha_t");
  mmf->add_option("--trace", m_trace, "grid-search CSV path");
  mmf->add_option("--filter", m_filter, "write the filter waveform (JSON)");
  mmf->add_option("--out", m_out, "report JSON path ('-' for stdout)");
  mmf->add_option("--threads", m_threads);
  m_flags.add(mmf);

  // cas
  std::string c_scen, c_strategy, c_out;
  std::size_t c_coherent = 0;
  std::vector<std::size_t> c_revisits;
  auto* cas = app.add_subcommand("cas", "continuous active sonar scenario");
  cas->add_option("--scenario", c_scen)->required();
  cas->add_option("--strategy", c_strategy)->check(CLI::IsMember({"fcpi", "spcpi", "acpi"}));
  cas->add_option("--coherent", c_coherent, "M for ACPI");
  cas->add_option("--revisits", c_revisits, "revisit indices");
  cas->add_option("--out", c_out, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*synth) {
      Wave w(s_wave);
      check(gsfm_waveform_save(w.h, s_out.c_str(), s_format.c_str()));
      if (!s_spec.empty()) check(gsfm_waveform_spectrum_save(w.h, s_spec.c_str()));
      if (!s_sgram.empty()) check(gsfm_waveform_spectrogram_save(w.h, s_sgram.c_str()));
      if (!s_report.empty()) {
        char* r = nullptr;
        check(gsfm_waveform_report(w.h, &r));
        emit(take(r), s_report);
      }
    } else if (*af) {
      Wave w1(a_wave);
      std::unique_ptr<Wave> w2;
      if (!a_second.empty()) w2 = std::make_unique<Wave>(a_second);
      Surface s;
      check(gsfm_af_compute(w1.h, w2 ? w2->h : nullptr, a_flags.to_json().dump().c_str(), &s.h));
      check(gsfm_surface_save(s.h, a_out.c_str(), a_format.c_str()));
      if (!a_report.empty()) {
        char* r = nullptr;
        check(gsfm_surface_report(s.h, &r));
        emit(take(r), a_report);
      }
    } else if (*qf) {
      Wave w(q_wave);
      Surface s;
      check(gsfm_af_compute(w.h, nullptr, q_flags.to_json().dump().c_str(), &s.h));
      char* r = nullptr;
      check(gsfm_surface_qfunction(s.h, q_out.c_str(), q_summary.empty() ? nullptr : &r));
      if (!q_summary.empty()) emit(take(r), q_summary);
    } else if (*eoa) {
      Wave w(e_wave);
      char* r = nullptr;
      check(gsfm_eoa(w.h, e_wave.c_str(), e_model.c_str(), &r));
      const std::string rep = take(r);
      emit(rep, e_out);
      if (!e_contour.empty()) {
        const auto j = json::parse(rep);
        const auto& e = j.contains("closed_form") ? j["closed_form"] : j["numeric"];
        check(gsfm_eoa_contour_save(e.dump().c_str(), e_level, e_points, e_contour.c_str()));
      }
    } else if (*sweep) {
      auto o = p_flags.to_json();
      o["threads"] = p_threads;
      char* r = nullptr;
      check(gsfm_psl_sweep(p_base.c_str(), p_rho.c_str(), p_cycles.c_str(), o.dump().c_str(), p_out.c_str(), &r));
      emit(take(r), p_summary.empty() ? p_out + ".json" : p_summary);
    } else if (*mmf) {
      Wave w(m_wave);
      json o = {{"af", m_flags.to_json()}, {"threads", m_threads}};
      if (m_search) {
        o["search"] = true;
        if (!m_trace.empty()) o["trace"] = m_trace;
      } else {
        o["alpha_k"] = m_ak;
        o["alpha_t"] = m_at;
      }
      Wave f;
      char* r = nullptr;
      check(gsfm_mmf(w.h, o.dump().c_str(), m_filter.empty() ? nullptr : &f.h, &r));
      emit(take(r), m_out);
      if (!m_filter.empty()) check(gsfm_waveform_save(f.h, m_filter.c_str(), "json"));
    } else if (*cas) {
      json o = json::object();
      if (!c_strategy.empty()) o["strategy"] = c_strategy;
      if (c_coherent > 0) o["coherent"] = c_coherent;
      if (!c_revisits.empty()) o["revisits"] = c_revisits;
      char* r = nullptr;
      check(gsfm_cas_run(c_scen.c_str(), o.dump().c_str(), c_out.c_str(), &r));
      gsfm_string_free(r);
    }
  } catch (const Failure& f) {
    return f.code;
  }
  return 0;
}
