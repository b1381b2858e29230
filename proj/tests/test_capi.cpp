// Links only the shared library; everything goes through gsfm.h.
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>
#include <unistd.h>

#include "gsfm/gsfm.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const char* kGsfm = R"({"type": "gsfm", "duration": 0.25, "bandwidth": 200, "rho": 2, "cycles": 10})";
const char* kGrid = R"({"velocity_max": 8, "velocity_step": 0.5, "max_delay": 0.1, "delay_stride": 2})";

json take(char* s) {
  REQUIRE(s != nullptr);
  auto j = json::parse(s);
  gsfm_string_free(s);
  return j;
}

struct TempDir {
  fs::path path = fs::temp_directory_path() / ("gsfm_capi_" + std::to_string(::getpid()));
  TempDir() { fs::create_directories(path); }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& n) const { return (path / n).string(); }
};

std::size_t lines(const std::string& path) {
  std::ifstream f(path);
  std::size_t n = 0;
  for (std::string l; std::getline(f, l);) ++n;
  return n;
}

}  // namespace

TEST_CASE("waveform handles") {
  CHECK(std::strlen(gsfm_version()) > 0);
  gsfm_waveform* w = nullptr;
  REQUIRE(gsfm_waveform_load(kGsfm, &w) == GSFM_OK);
  CHECK(std::string(gsfm_last_error()).empty());
  gsfm_waveform_info info{};
  REQUIRE(gsfm_waveform_info_get(w, &info) == GSFM_OK);
  CHECK(info.duration == doctest::Approx(0.25));
  CHECK(info.carrier == doctest::Approx(2000));
  CHECK(info.energy == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(info.samples == static_cast<std::size_t>(std::llround(info.duration * info.sample_rate)));

  std::vector<double> buf(2 * info.samples + 8, -7.0);
  REQUIRE(gsfm_waveform_samples(w, buf.data(), info.samples) == GSFM_OK);
  double e = 0;
  for (std::size_t i = 0; i < 2 * info.samples; ++i) e += buf[i] * buf[i];
  CHECK(e / info.sample_rate == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(buf[2 * info.samples] == -7.0);

  char* rep = nullptr;
  REQUIRE(gsfm_waveform_report(w, &rep) == GSFM_OK);
  const auto r = take(rep);
  CHECK(r.at("energy").get<double>() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(r.at("bandwidth_98_hz").get<double>() > 150);

  TempDir tmp;
  REQUIRE(gsfm_waveform_save(w, (tmp / "w.bin").c_str(), "bin") == GSFM_OK);
  gsfm_waveform* back = nullptr;
  REQUIRE(gsfm_waveform_load((tmp / "w.bin").c_str(), &back) == GSFM_OK);
  gsfm_waveform_info bi{};
  gsfm_waveform_info_get(back, &bi);
  CHECK(bi.samples == info.samples);
  CHECK(bi.sample_rate == info.sample_rate);
  CHECK(gsfm_waveform_spectrum_save(w, (tmp / "s.csv").c_str()) == GSFM_OK);
  CHECK(lines(tmp / "s.csv") > 10);
  gsfm_waveform_free(back);
  gsfm_waveform_free(w);
  gsfm_waveform_free(nullptr);
}

TEST_CASE("status codes and last error") {
  gsfm_waveform* w = nullptr;
  CHECK(gsfm_waveform_load("/nonexistent.json", &w) == GSFM_ERR_CONFIG);
  CHECK(w == nullptr);
  CHECK(std::string(gsfm_last_error()).find("nonexistent") != std::string::npos);
  CHECK(gsfm_waveform_load(R"({"type": "gsfm", "duration": 1, "bandwidth": 100, "rho": 0.5, "alpha": 1})", &w) ==
        GSFM_ERR_DOMAIN);
  CHECK(gsfm_waveform_load(R"({"type": "gsfm", "speed": 1})", &w) == GSFM_ERR_CONFIG);
  CHECK(gsfm_waveform_load(nullptr, &w) == GSFM_ERR_ARGUMENT);
  CHECK(gsfm_waveform_load(kGsfm, nullptr) == GSFM_ERR_ARGUMENT);
  CHECK(gsfm_waveform_info_get(nullptr, nullptr) == GSFM_ERR_ARGUMENT);
  REQUIRE(gsfm_waveform_load(kGsfm, &w) == GSFM_OK);
  CHECK(std::string(gsfm_last_error()).empty());
  CHECK(gsfm_waveform_save(w, "/nonexistent-dir/x.json", "json") == GSFM_ERR_IO);
  CHECK(gsfm_waveform_save(w, "x.json", "yaml") == GSFM_ERR_CONFIG);
  gsfm_surface* s = nullptr;
  CHECK(gsfm_af_compute(w, nullptr, R"({"velocity_max": 5, "colour": 1})", &s) == GSFM_ERR_CONFIG);
  CHECK(gsfm_af_compute(w, nullptr, "[1, 2]", &s) == GSFM_ERR_CONFIG);
  CHECK(gsfm_eoa_contour_save(R"({"model": "broadband", "beta2": 1, "lambda2": 1, "gamma": 0})", 2.0, 16, "c.csv") ==
        GSFM_ERR_DOMAIN);
  gsfm_waveform_free(w);
}

TEST_CASE("surfaces, Q-function and EOA") {
  gsfm_waveform* w = nullptr;
  REQUIRE(gsfm_waveform_load(kGsfm, &w) == GSFM_OK);
  gsfm_surface* s = nullptr;
  REQUIRE(gsfm_af_compute(w, nullptr, kGrid, &s) == GSFM_OK);
  size_t rows = 0, cols = 0;
  REQUIRE(gsfm_surface_dims(s, &rows, &cols) == GSFM_OK);
  CHECK(rows == 33);
  CHECK(cols > 100);
  char* rep = nullptr;
  REQUIRE(gsfm_surface_report(s, &rep) == GSFM_OK);
  const auto r = take(rep);
  CHECK(r.at("peak").get<double>() == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(r.at("psl_db").get<double>() < 0);
  CHECK(r.at("width_delay_s").get<double>() > 0);

  TempDir tmp;
  REQUIRE(gsfm_surface_save(s, (tmp / "af.csv").c_str(), "csv") == GSFM_OK);
  CHECK(lines(tmp / "af.csv") == rows * cols + 1);
  char* q = nullptr;
  REQUIRE(gsfm_surface_qfunction(s, (tmp / "q.csv").c_str(), &q) == GSFM_OK);
  CHECK(take(q).contains("notch_depth_db"));
  CHECK(lines(tmp / "q.csv") == rows + 1);

  char* e = nullptr;
  REQUIRE(gsfm_eoa(w, kGsfm, "broadband", &e) == GSFM_OK);
  const auto eo = take(e);
  const double nb = eo.at("numeric").at("beta2").get<double>(), cb = eo.at("closed_form").at("beta2").get<double>();
  CHECK(nb == doctest::Approx(cb).epsilon(1e-3));
  REQUIRE(gsfm_eoa_contour_save(eo.at("closed_form").dump().c_str(), 0.5, 32, (tmp / "c.csv").c_str()) == GSFM_OK);
  CHECK(lines(tmp / "c.csv") == 33);
  gsfm_surface_free(s);
  gsfm_waveform_free(w);
}

TEST_CASE("sweep, MMF and CAS entry points") {
  TempDir tmp;
  char* sum = nullptr;
  REQUIRE(gsfm_psl_sweep(kGsfm, "1:1:2", "6:4:10", kGrid, (tmp / "sw.csv").c_str(), &sum) == GSFM_OK);
  const auto sw = take(sum);
  CHECK(sw.contains("argmin"));
  CHECK(lines(tmp / "sw.csv") == 5);
  CHECK(gsfm_psl_sweep(kGsfm, "2:1", "6", nullptr, nullptr, nullptr) == GSFM_ERR_CONFIG);

  gsfm_waveform* w = nullptr;
  REQUIRE(gsfm_waveform_load(kGsfm, &w) == GSFM_OK);
  gsfm_waveform* f = nullptr;
  char* mr = nullptr;
  const std::string mo = std::string(R"({"alpha_k": 0, "alpha_t": 0, "af": )") + kGrid + "}";
  REQUIRE(gsfm_mmf(w, mo.c_str(), &f, &mr) == GSFM_OK);
  const auto m = take(mr);
  CHECK(m.at("snrl_db").get<double>() == doctest::Approx(0.0).epsilon(1e-9));
  gsfm_waveform_info fi{};
  gsfm_waveform_info_get(f, &fi);
  CHECK(fi.energy == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(gsfm_mmf(w, R"({"alpha": 3})", nullptr, nullptr) == GSFM_ERR_CONFIG);
  gsfm_waveform_free(f);
  gsfm_waveform_free(w);

  const char* scen = R"({
    "train": {"kind": "fbpt", "pulses": 4, "pri": 0.25, "system_bandwidth": 400, "families": [[2, 20]]},
    "targets": [{"range": 300, "velocity": 4}],
    "direct_blast": false,
    "processing": {"strategy": "spcpi", "revisits": [0, 1], "velocity_max": 8, "velocity_step": 0.5,
                   "max_delay": 1.0, "detect_window": 0.02}})";
  char* cs = nullptr;
  REQUIRE(gsfm_cas_run(scen, R"({"strategy": "fcpi"})", (tmp / "cas").c_str(), &cs) == GSFM_OK);
  const auto c = take(cs);
  CHECK(fs::exists(tmp / "cas/summary.json"));
  CHECK(fs::exists(tmp / "cas/revisit_1.csv"));
  for (const auto& p : c.at("peaks")) CHECK(p.at("detected").get<bool>());
  CHECK(gsfm_cas_run(scen, R"({"coherent": 9, "strategy": "acpi"})", nullptr, nullptr) == GSFM_ERR_DOMAIN);
}
