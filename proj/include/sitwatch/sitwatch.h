/*
 *  Copyright (C) 2026 The sitwatch authors
 *
 *  SPDX-License-Identifier: Apache-2.0
 *  See the file LICENSE for more information.
 */

/*
 * C interface to libsitwatch.
 *
 * Every fallible call returns an sw_status. On failure a message describing
 * the last error of the calling thread is available from sw_last_error() until
 * the next failing call on that thread. Objects are opaque handles released by
 * the matching *_free function; passing NULL to a free function is a no-op.
 *
 * Angles are radians, accelerations m/s^2, timestamps integer nanoseconds.
 * A path of "-" means standard output for writers.
 */

#ifndef SITWATCH_H
#define SITWATCH_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(SITWATCH_BUILDING_LIBRARY)
#define SW_API __declspec(dllexport)
#else
#define SW_API __declspec(dllimport)
#endif
#else
#define SW_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sw_status
{
  SW_OK = 0,
  SW_ERR_INVALID_ARGUMENT = 1,
  SW_ERR_DEGENERATE_INPUT = 2,
  SW_ERR_INVALID_ROTATION = 3,
  SW_ERR_PARSE = 4,
  SW_ERR_IO = 5,
  SW_ERR_LAYOUT_MISMATCH = 6,
  SW_ERR_DEGENERATE_TRAINING = 7,
  SW_ERR_INVALID_INPUT = 8,
  SW_ERR_INTERNAL = 9
} sw_status;

SW_API const char* sw_version(void);
SW_API const char* sw_status_name(sw_status status);
SW_API const char* sw_last_error(void);

/* ---- geometry ---- */

/* out[3] = gravity in the watch frame for the orientation (phi, theta, psi). */
SW_API sw_status sw_gravity_in_watch_frame(double phi, double theta, double psi, double g, double out[3]);
/* near_singular may be NULL. */
SW_API sw_status sw_estimate_pitch_roll(const double accel[3], double* phi, double* theta, int* near_singular);
/* Row-major 3x3. */
SW_API sw_status sw_rotation_matrix_xy(double phi, double theta, double out[9]);
SW_API sw_status sw_rotation_vector_from_matrix(const double m[9], double out[3]);
SW_API sw_status sw_rotation_matrix_from_vector(const double r[3], double out[9]);

/* ---- configuration ---- */

typedef struct sw_config sw_config;

SW_API sw_status sw_config_new(sw_config** out);
SW_API sw_status sw_config_set(sw_config* cfg, const char* key, const char* value);
SW_API sw_status sw_config_load_file(sw_config* cfg, const char* path);
/* Check cross-field invariants (positive sizes, not both ablations). */
SW_API sw_status sw_config_validate(const sw_config* cfg);
/* Effective configuration as "key=value" lines. Valid until the next call on cfg. */
SW_API const char* sw_config_echo(sw_config* cfg);
SW_API void sw_config_free(sw_config* cfg);

/* ---- recordings and labels ---- */

typedef struct sw_recording sw_recording;
typedef struct sw_labels sw_labels;

SW_API sw_status sw_recording_load(const char* path, sw_recording** out);
SW_API sw_status sw_recording_save(const sw_recording* rec, const char* path);
SW_API size_t sw_recording_size(const sw_recording* rec);
SW_API void sw_recording_free(sw_recording* rec);

SW_API sw_status sw_labels_load(const char* path, sw_labels** out);
SW_API sw_status sw_labels_save(const sw_labels* labels, const char* path);
SW_API size_t sw_labels_size(const sw_labels* labels);
SW_API void sw_labels_free(sw_labels* labels);

/* Generate a recording and its labels from a scenario file at rate_hz. */
SW_API sw_status sw_synth_generate_file(const char* scenario_path, double rate_hz, sw_recording** rec,
                                        sw_labels** labels);

/* Per-sample angle dump. cfg may be NULL. */
SW_API sw_status sw_angles_write_csv(const sw_recording* rec, const sw_config* cfg, const char* path);

/* ---- features ---- */

typedef struct sw_features sw_features;

/* labels may be NULL; group may be NULL (defaults to "rec"). */
SW_API sw_status sw_featurize(const sw_recording* rec, const sw_labels* labels, const sw_config* cfg,
                              const char* group, sw_features** out);
SW_API sw_status sw_features_load(const char* path, sw_features** out);
SW_API sw_status sw_features_save(const sw_features* f, const char* path);
/* Append the rows of src to dst; layouts must match. */
SW_API sw_status sw_features_append(sw_features* dst, const sw_features* src);
SW_API size_t sw_features_rows(const sw_features* f);
SW_API size_t sw_features_cols(const sw_features* f);
SW_API const char* sw_features_layout(const sw_features* f);
/* Featurisation notes (dropped windows), newline separated. */
SW_API const char* sw_features_log(const sw_features* f);
SW_API void sw_features_free(sw_features* f);

/* ---- model ---- */

typedef struct sw_model sw_model;

SW_API sw_status sw_train(const sw_features* f, const sw_config* cfg, sw_model** out);
SW_API sw_status sw_model_load(const char* path, sw_model** out);
SW_API sw_status sw_model_save(const sw_model* m, const char* path);
SW_API void sw_model_free(sw_model* m);

/* ---- evaluation ---- */

typedef struct sw_report sw_report;

SW_API sw_status sw_evaluate(const sw_features* f, const sw_config* cfg, sw_report** out);
/* format is "table" or "json". */
SW_API sw_status sw_report_write(const sw_report* r, const sw_config* cfg, const char* format, const char* path);
/* metric is recall, precision, f1 or accuracy. */
SW_API sw_status sw_report_mean(const sw_report* r, const char* metric, double* out);
SW_API void sw_report_free(sw_report* r);

/* ---- estimation ---- */

typedef struct sw_estimate sw_estimate;

SW_API sw_status sw_estimate_run(const sw_model* m, const sw_recording* rec, const sw_config* cfg,
                                 sw_estimate** out);
SW_API double sw_estimate_sitting_seconds(const sw_estimate* e);
SW_API size_t sw_estimate_windows(const sw_estimate* e);
SW_API sw_status sw_estimate_write(const sw_estimate* e, const sw_config* cfg, const char* path);
SW_API void sw_estimate_free(sw_estimate* e);

#ifdef __cplusplus
}
#endif

#endif /* SITWATCH_H */
