/*
 *  Copyright (C) 2026 The sitwatch authors
 *
 *  SPDX-License-Identifier: Apache-2.0
 *  See the file LICENSE for more information.
 */

// Exercises the shared library through its C header only.

#include "sitwatch/sitwatch.h"

#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>

namespace fs = std::filesystem;

namespace
{
fs::path scratch()
{
  const fs::path p = fs::temp_directory_path() / "sitwatch_c_api_test";
  fs::create_directories(p);
  return p;
}
} // namespace

TEST_SUITE("c_api")
{
  TEST_CASE("status names and last error")
  {
    CHECK(std::strcmp(sw_status_name(SW_OK), "ok") == 0);
    CHECK(std::strcmp(sw_status_name(SW_ERR_PARSE), "parse_error") == 0);
    const double zero[3] = {0, 0, 0};
    double phi = 0, theta = 0;
    CHECK(sw_estimate_pitch_roll(zero, &phi, &theta, nullptr) == SW_ERR_DEGENERATE_INPUT);
    CHECK(std::strlen(sw_last_error()) > 0);
    CHECK(sw_estimate_pitch_roll(nullptr, &phi, &theta, nullptr) == SW_ERR_INVALID_ARGUMENT);
  }

  TEST_CASE("geometry through the C surface")
  {
    double g[3];
    REQUIRE(sw_gravity_in_watch_frame(0.3, -0.2, 1.0, 9.81, g) == SW_OK);
    double phi = 0, theta = 0;
    int ns = -1;
    REQUIRE(sw_estimate_pitch_roll(g, &phi, &theta, &ns) == SW_OK);
    CHECK(phi == doctest::Approx(0.3));
    CHECK(theta == doctest::Approx(-0.2));
    CHECK(ns == 0);
    double m[9], r[3], back[9];
    REQUIRE(sw_rotation_matrix_xy(phi, theta, m) == SW_OK);
    REQUIRE(sw_rotation_vector_from_matrix(m, r) == SW_OK);
    REQUIRE(sw_rotation_matrix_from_vector(r, back) == SW_OK);
    for (int i = 0; i < 9; ++i)
      CHECK(std::fabs(m[i] - back[i]) < 1e-12);
    const double big[3] = {4, 0, 0};
    CHECK(sw_rotation_matrix_from_vector(big, back) == SW_ERR_INVALID_ARGUMENT);
  }

  TEST_CASE("config handles")
  {
    sw_config* cfg = nullptr;
    REQUIRE(sw_config_new(&cfg) == SW_OK);
    CHECK(sw_config_set(cfg, "folds", "3") == SW_OK);
    CHECK(sw_config_set(cfg, "folds", "zero") == SW_ERR_INVALID_ARGUMENT);
    CHECK(sw_config_set(cfg, "nope", "1") == SW_ERR_INVALID_ARGUMENT);
    CHECK(std::string(sw_config_echo(cfg)).find("folds=3\n") != std::string::npos);
    CHECK(sw_config_load_file(cfg, "/nonexistent.json") == SW_ERR_IO);
    sw_config_free(cfg);
    sw_config_free(nullptr);
  }

  TEST_CASE("full workflow")
  {
    const fs::path dir = scratch();
    const std::string scenario = (dir / "sc.json").string();
    std::ofstream(scenario) << R"({"seed": 5, "noise_std": 0.05, "repeat": 4, "shuffle": true, "segments": [
      {"activity": "sit_typing", "duration_s": 300}, {"activity": "walk", "duration_s": 150},
      {"activity": "stand_still", "duration_s": 150}]})";

    sw_recording* rec = nullptr;
    sw_labels* labels = nullptr;
    REQUIRE(sw_synth_generate_file(scenario.c_str(), 100.0, &rec, &labels) == SW_OK);
    CHECK(sw_recording_size(rec) == 240000);
    CHECK(sw_labels_size(labels) == 12);

    const std::string rec_path = (dir / "rec.csv").string();
    REQUIRE(sw_recording_save(rec, rec_path.c_str()) == SW_OK);
    sw_recording* rec2 = nullptr;
    REQUIRE(sw_recording_load(rec_path.c_str(), &rec2) == SW_OK);
    CHECK(sw_recording_size(rec2) == 240000);

    sw_config* cfg = nullptr;
    REQUIRE(sw_config_new(&cfg) == SW_OK);
    REQUIRE(sw_config_set(cfg, "n_trees", "40") == SW_OK);

    sw_features* f = nullptr;
    REQUIRE(sw_featurize(rec2, labels, cfg, "s1", &f) == SW_OK);
    CHECK(sw_features_rows(f) == 80);
    CHECK(sw_features_cols(f) == 27 + 24);
    CHECK(std::string(sw_features_layout(f)) == "sitwatch.features.v1:accel+rotvec");

    sw_report* r = nullptr;
    REQUIRE(sw_evaluate(f, cfg, &r) == SW_OK);
    double f1 = 0;
    REQUIRE(sw_report_mean(r, "f1", &f1) == SW_OK);
    CHECK(f1 > 0.9);
    CHECK(sw_report_mean(r, "auc", &f1) == SW_ERR_INVALID_ARGUMENT);
    CHECK(sw_report_write(r, cfg, "xml", "-") == SW_ERR_INVALID_ARGUMENT);

    sw_model* m = nullptr;
    REQUIRE(sw_train(f, cfg, &m) == SW_OK);
    const std::string model_path = (dir / "model.txt").string();
    REQUIRE(sw_model_save(m, model_path.c_str()) == SW_OK);
    sw_model* m2 = nullptr;
    REQUIRE(sw_model_load(model_path.c_str(), &m2) == SW_OK);

    sw_estimate* e = nullptr;
    REQUIRE(sw_estimate_run(m2, rec2, cfg, &e) == SW_OK);
    CHECK(sw_estimate_windows(e) == 80);
    const double sit = sw_estimate_sitting_seconds(e);
    CHECK(std::fabs(sit - 1200.0) <= 4 * 30.0);

    sw_features* unlabeled = nullptr;
    REQUIRE(sw_featurize(rec2, nullptr, cfg, nullptr, &unlabeled) == SW_OK);
    sw_model* none = nullptr;
    CHECK(sw_train(unlabeled, cfg, &none) == SW_ERR_INVALID_INPUT);
    CHECK(none == nullptr);

    sw_estimate_free(e);
    sw_model_free(m2);
    sw_model_free(m);
    sw_report_free(r);
    sw_features_free(unlabeled);
    sw_features_free(f);
    sw_config_free(cfg);
    sw_recording_free(rec2);
    sw_recording_free(rec);
    sw_labels_free(labels);
    fs::remove_all(dir);
  }
}
