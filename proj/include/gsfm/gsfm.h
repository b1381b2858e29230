#ifndef GSFM_H
#define GSFM_H

#include <stddef.h>

#if defined(GSFM_BUILDING_LIBRARY)
#define GSFM_API __attribute__((visibility("default")))
#else
#define GSFM_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes. The CLI uses the same values as exit codes where they apply. */
typedef enum gsfm_status {
  GSFM_OK = 0,
  GSFM_ERR_INTERNAL = 1,
  GSFM_ERR_CONFIG = 2,   /* malformed descriptor, unknown option, missing file */
  GSFM_ERR_DOMAIN = 3,   /* numerical precondition violated */
  GSFM_ERR_IO = 4,       /* file could not be written */
  GSFM_ERR_ARGUMENT = 5  /* null handle or pointer */
} gsfm_status;

typedef struct gsfm_waveform gsfm_waveform;
typedef struct gsfm_surface gsfm_surface;

typedef struct gsfm_waveform_info {
  size_t samples;
  double sample_rate;
  double duration;
  double carrier;
  double energy;
} gsfm_waveform_info;

GSFM_API const char* gsfm_version(void);
/* Message for the last failing call on this thread, "" if none. */
GSFM_API const char* gsfm_last_error(void);
/* Frees strings returned through char** out-parameters. */
GSFM_API void gsfm_string_free(char* s);

/* Waveforms. `src` is inline JSON (starting with '{') or a path; .bin paths
   are read as binary. JSON may be a generator descriptor or a saved waveform. */
GSFM_API int gsfm_waveform_load(const char* src, gsfm_waveform** out);
/* format: "json", "bin" or "csv". */
GSFM_API int gsfm_waveform_save(const gsfm_waveform* w, const char* path, const char* format);
GSFM_API int gsfm_waveform_info_get(const gsfm_waveform* w, gsfm_waveform_info* out);
/* Copies min(capacity, samples) complex samples as interleaved re/im. */
GSFM_API int gsfm_waveform_samples(const gsfm_waveform* w, double* interleaved, size_t capacity);
/* JSON: energy, papr_db, bandwidth_98_hz, centroid_hz. */
GSFM_API int gsfm_waveform_report(const gsfm_waveform* w, char** json_out);
GSFM_API int gsfm_waveform_spectrum_save(const gsfm_waveform* w, const char* path);
GSFM_API int gsfm_waveform_spectrogram_save(const gsfm_waveform* w, const char* path);
GSFM_API void gsfm_waveform_free(gsfm_waveform* w);

/* Ambiguity surfaces. w2 may be NULL for the auto-ambiguity. options JSON:
   {"model": "broadband"|"narrowband", "velocity_max": 20, "velocity_step": 0.25,
    "max_delay": 0, "delay_stride": 1, "sound_speed": 1500}; NULL = defaults. */
GSFM_API int gsfm_af_compute(const gsfm_waveform* w1, const gsfm_waveform* w2, const char* options_json,
                             gsfm_surface** out);
GSFM_API int gsfm_surface_dims(const gsfm_surface* s, size_t* rows, size_t* cols);
/* format: "csv" (doppler,delay_s,magnitude_db re peak) or "bin". */
GSFM_API int gsfm_surface_save(const gsfm_surface* s, const char* path, const char* format);
/* JSON: peak, psl_db and its location, -3 dB widths. */
GSFM_API int gsfm_surface_report(const gsfm_surface* s, char** json_out);
/* Q-function CSV (velocity_mps,q_db); summary JSON with the notch depth. */
GSFM_API int gsfm_surface_qfunction(const gsfm_surface* s, const char* csv_path, char** json_out);
GSFM_API void gsfm_surface_free(gsfm_surface* s);

/* EOA parameters. The report holds the numeric estimate and, when `descriptor`
   is an even-symmetric rectangular GSFI/GCFI GSFM, the closed form.
   descriptor may be NULL. */
GSFM_API int gsfm_eoa(const gsfm_waveform* w, const char* descriptor_json, const char* model, char** json_out);
/* Ellipse at level epsilon from EOA JSON ({"model", "beta2", "lambda2", "gamma"}) as CSV. */
GSFM_API int gsfm_eoa_contour_save(const char* eoa_json, double epsilon, size_t points, const char* path);

/* PSL sweep over rho x cycles ("a:step:b" ranges) for a GSFM base descriptor.
   options JSON as for gsfm_af_compute plus "threads". */
GSFM_API int gsfm_psl_sweep(const char* base_json, const char* rho_range, const char* cycles_range,
                            const char* options_json, const char* csv_path, char** summary_json);

/* Mismatched filter. options JSON: {"alpha_k": .., "alpha_t": ..} for one design,
   or {"search": true, "trace": "path.csv"} for the grid search; AF options may be
   added under "af". filter_out may be NULL. */
GSFM_API int gsfm_mmf(const gsfm_waveform* w, const char* options_json, gsfm_waveform** filter_out, char** report_json);

/* Continuous active sonar run. The scenario JSON holds the train, targets and
   processing block; overrides_json (may be NULL) replaces processing fields.
   Writes revisit_<k>.csv per frame and summary.json into out_dir. */
GSFM_API int gsfm_cas_run(const char* scenario_json, const char* overrides_json, const char* out_dir,
                          char** summary_json);

#ifdef __cplusplus
}
#endif

#endif
