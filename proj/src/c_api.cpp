/*
 *  Copyright (C) 2026 The sitwatch authors
 *
 *  SPDX-License-Identifier: Apache-2.0
 *  See the file LICENSE for more information.
 */

#include "sitwatch/sitwatch.h"

#include "sitwatch/error.hpp"
#include "sitwatch/geom.hpp"
#include "sitwatch/io.hpp"
#include "sitwatch/pipeline.hpp"
#include "sitwatch/synth.hpp"

#include <nlohmann/json.hpp>

#include <cstring>
#include <exception>
#include <fstream>
#include <iostream>
#include <memory>
#include <new>
#include <sstream>
#include <string>

struct sw_config
{
  sitwatch::RunConfig cfg;
  std::string echo;
};

struct sw_recording
{
  sitwatch::ImuRecording rec;
};

struct sw_labels
{
  std::vector<sitwatch::LabelInterval> labels;
};

struct sw_features
{
  sitwatch::FeatureTable table;
  std::string log;
};

struct sw_model
{
  sitwatch::model::Model model;
};

struct sw_report
{
  sitwatch::eval::EvalReport report;
};

struct sw_estimate
{
  sitwatch::pipeline::Estimate est;
};

namespace
{

thread_local std::string g_last_error;

sw_status fail(sw_status s, const std::string& msg)
{
  g_last_error = msg;
  return s;
}

template <typename F>
sw_status guarded(F&& f) noexcept
{
  try
  {
    f();
    return SW_OK;
  }
  catch (const sitwatch::Error& e)
  {
    return fail(static_cast<sw_status>(e.code()), e.what());
  }
  catch (const std::bad_alloc&)
  {
    return fail(SW_ERR_INTERNAL, "out of memory");
  }
  catch (const std::exception& e)
  {
    return fail(SW_ERR_INTERNAL, e.what());
  }
  catch (...)
  {
    return fail(SW_ERR_INTERNAL, "unknown exception");
  }
}

void require(const void* p, const char* what)
{
  if (p == nullptr)
    throw sitwatch::Error(sitwatch::ErrorCode::InvalidArgument, std::string(what) + " must not be NULL");
}

const sitwatch::RunConfig& config_or_default(const sw_config* cfg)
{
  static const sitwatch::RunConfig kDefault;
  return cfg ? cfg->cfg : kDefault;
}

// Writes through a temporary buffer so a failed run leaves no partial file.
template <typename F>
void write_to(const char* path, F&& emit)
{
  require(path, "path");
  std::ostringstream os;
  emit(os);
  sitwatch::io::write_file(path, os.str());
}

sitwatch::geom::RotationMatrix3 matrix_from(const double m[9])
{
  sitwatch::geom::RotationMatrix3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      r.m[i][j] = m[3 * i + j];
  return r;
}

void matrix_to(const sitwatch::geom::RotationMatrix3& r, double out[9])
{
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      out[3 * i + j] = r.m[i][j];
}

} // namespace

extern "C" {

const char* sw_version(void) { return "1.0.0"; }

const char* sw_status_name(sw_status status)
{
  if (status == SW_OK)
    return "ok";
  if (status < SW_ERR_INVALID_ARGUMENT || status > SW_ERR_INTERNAL)
    return "unknown";
  return sitwatch::error_code_name(static_cast<sitwatch::ErrorCode>(status));
}

const char* sw_last_error(void) { return g_last_error.c_str(); }

sw_status sw_gravity_in_watch_frame(double phi, double theta, double psi, double g, double out[3])
{
  return guarded([&] {
    require(out, "out");
    const auto v = sitwatch::geom::gravity_in_watch_frame(phi, theta, psi, g);
    out[0] = v.x;
    out[1] = v.y;
    out[2] = v.z;
  });
}

sw_status sw_estimate_pitch_roll(const double accel[3], double* phi, double* theta, int* near_singular)
{
  return guarded([&] {
    require(accel, "accel");
    require(phi, "phi");
    require(theta, "theta");
    const auto e = sitwatch::geom::estimate_pitch_roll({accel[0], accel[1], accel[2]});
    *phi = e.phi;
    *theta = e.theta;
    if (near_singular)
      *near_singular = e.near_singular ? 1 : 0;
  });
}

sw_status sw_rotation_matrix_xy(double phi, double theta, double out[9])
{
  return guarded([&] {
    require(out, "out");
    matrix_to(sitwatch::geom::rotation_matrix_xy(phi, theta), out);
  });
}

sw_status sw_rotation_vector_from_matrix(const double m[9], double out[3])
{
  return guarded([&] {
    require(m, "m");
    require(out, "out");
    const auto r = sitwatch::geom::rotation_vector_from_matrix(matrix_from(m));
    out[0] = r.rx;
    out[1] = r.ry;
    out[2] = r.rz;
  });
}

sw_status sw_rotation_matrix_from_vector(const double r[3], double out[9])
{
  return guarded([&] {
    require(r, "r");
    require(out, "out");
    matrix_to(sitwatch::geom::rotation_matrix_from_vector({r[0], r[1], r[2]}), out);
  });
}

sw_status sw_config_new(sw_config** out)
{
  return guarded([&] {
    require(out, "out");
    *out = new sw_config();
  });
}

sw_status sw_config_set(sw_config* cfg, const char* key, const char* value)
{
  return guarded([&] {
    require(cfg, "cfg");
    require(key, "key");
    require(value, "value");
    cfg->cfg.set(key, value);
  });
}

sw_status sw_config_load_file(sw_config* cfg, const char* path)
{
  return guarded([&] {
    require(cfg, "cfg");
    require(path, "path");
    cfg->cfg.load_file(path);
  });
}

sw_status sw_config_validate(const sw_config* cfg)
{
  return guarded([&] {
    require(cfg, "cfg");
    cfg->cfg.validate();
  });
}

const char* sw_config_echo(sw_config* cfg)
{
  if (!cfg)
    return "";
  cfg->echo.clear();
  for (const auto& [k, v] : cfg->cfg.echo())
    cfg->echo += k + "=" + v + "\n";
  return cfg->echo.c_str();
}

void sw_config_free(sw_config* cfg) { delete cfg; }

sw_status sw_recording_load(const char* path, sw_recording** out)
{
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    auto r = std::make_unique<sw_recording>();
    r->rec = sitwatch::io::parse_recording_csv(path);
    *out = r.release();
  });
}

sw_status sw_recording_save(const sw_recording* rec, const char* path)
{
  return guarded([&] {
    require(rec, "rec");
    write_to(path, [&](std::ostream& os) { sitwatch::io::write_recording_csv(rec->rec, os); });
  });
}

size_t sw_recording_size(const sw_recording* rec) { return rec ? rec->rec.size() : 0; }

void sw_recording_free(sw_recording* rec) { delete rec; }

sw_status sw_labels_load(const char* path, sw_labels** out)
{
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    auto l = std::make_unique<sw_labels>();
    l->labels = sitwatch::io::parse_labels_csv(path);
    *out = l.release();
  });
}

sw_status sw_labels_save(const sw_labels* labels, const char* path)
{
  return guarded([&] {
    require(labels, "labels");
    write_to(path, [&](std::ostream& os) { sitwatch::io::write_labels_csv(labels->labels, os); });
  });
}

size_t sw_labels_size(const sw_labels* labels) { return labels ? labels->labels.size() : 0; }

void sw_labels_free(sw_labels* labels) { delete labels; }

sw_status sw_synth_generate_file(const char* scenario_path, double rate_hz, sw_recording** rec, sw_labels** labels)
{
  return guarded([&] {
    require(scenario_path, "scenario_path");
    require(rec, "rec");
    require(labels, "labels");
    auto out = sitwatch::synth::generate(sitwatch::synth::load_scenario(scenario_path), rate_hz);
    auto r = std::make_unique<sw_recording>();
    auto l = std::make_unique<sw_labels>();
    r->rec = std::move(out.recording);
    l->labels = std::move(out.labels);
    *rec = r.release();
    *labels = l.release();
  });
}

sw_status sw_angles_write_csv(const sw_recording* rec, const sw_config* cfg, const char* path)
{
  return guarded([&] {
    require(rec, "rec");
    const auto comments = sitwatch::pipeline::echo_comments(config_or_default(cfg));
    write_to(path, [&](std::ostream& os) { sitwatch::pipeline::write_angles_csv(rec->rec, os, comments); });
  });
}

sw_status sw_featurize(const sw_recording* rec, const sw_labels* labels, const sw_config* cfg, const char* group,
                       sw_features** out)
{
  return guarded([&] {
    require(rec, "rec");
    require(out, "out");
    auto res = sitwatch::pipeline::featurize(rec->rec, labels ? &labels->labels : nullptr, config_or_default(cfg),
                                             group ? group : "rec");
    auto f = std::make_unique<sw_features>();
    f->table = std::move(res.table);
    for (const auto& line : res.log)
      f->log += line + "\n";
    *out = f.release();
  });
}

sw_status sw_features_load(const char* path, sw_features** out)
{
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    auto f = std::make_unique<sw_features>();
    f->table = sitwatch::io::parse_features_csv(path);
    *out = f.release();
  });
}

sw_status sw_features_save(const sw_features* f, const char* path)
{
  return guarded([&] {
    require(f, "features");
    write_to(path, [&](std::ostream& os) { sitwatch::io::write_features_csv(f->table, os); });
  });
}

sw_status sw_features_append(sw_features* dst, const sw_features* src)
{
  return guarded([&] {
    require(dst, "dst");
    require(src, "src");
    dst->table.append(src->table);
    dst->log += src->log;
  });
}

size_t sw_features_rows(const sw_features* f) { return f ? f->table.rows.size() : 0; }

size_t sw_features_cols(const sw_features* f) { return f ? f->table.layout.names.size() : 0; }

const char* sw_features_layout(const sw_features* f) { return f ? f->table.layout.version.c_str() : ""; }

const char* sw_features_log(const sw_features* f) { return f ? f->log.c_str() : ""; }

void sw_features_free(sw_features* f) { delete f; }

sw_status sw_train(const sw_features* f, const sw_config* cfg, sw_model** out)
{
  return guarded([&] {
    require(f, "features");
    require(out, "out");
    auto m = std::make_unique<sw_model>();
    m->model = sitwatch::pipeline::train_model(f->table, config_or_default(cfg));
    *out = m.release();
  });
}

sw_status sw_model_load(const char* path, sw_model** out)
{
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    auto m = std::make_unique<sw_model>();
    m->model = sitwatch::model::deserialize(sitwatch::io::read_file(path));
    *out = m.release();
  });
}

sw_status sw_model_save(const sw_model* m, const char* path)
{
  return guarded([&] {
    require(m, "model");
    write_to(path, [&](std::ostream& os) { os << sitwatch::model::serialize(m->model); });
  });
}

void sw_model_free(sw_model* m) { delete m; }

sw_status sw_evaluate(const sw_features* f, const sw_config* cfg, sw_report** out)
{
  return guarded([&] {
    require(f, "features");
    require(out, "out");
    auto r = std::make_unique<sw_report>();
    r->report = sitwatch::pipeline::evaluate(f->table, config_or_default(cfg));
    *out = r.release();
  });
}

sw_status sw_report_write(const sw_report* r, const sw_config* cfg, const char* format, const char* path)
{
  return guarded([&] {
    require(r, "report");
    const std::string fmt = format ? format : "table";
    if (fmt != "table" && fmt != "json")
      throw sitwatch::Error(sitwatch::ErrorCode::InvalidArgument, "unknown report format '" + fmt + "'");
    const auto comments = sitwatch::pipeline::echo_comments(config_or_default(cfg));
    write_to(path, [&](std::ostream& os) {
      if (fmt == "json")
      {
        auto j = nlohmann::ordered_json::parse(sitwatch::eval::format_json(r->report));
        nlohmann::ordered_json c;
        for (const auto& [k, v] : config_or_default(cfg).echo())
          c[k] = v;
        j["config"] = c;
        os << j.dump(2) << '\n';
        return;
      }
      for (const auto& c : comments)
        os << "# " << c << '\n';
      os << sitwatch::eval::format_table(r->report);
    });
  });
}

sw_status sw_report_mean(const sw_report* r, const char* metric, double* out)
{
  return guarded([&] {
    require(r, "report");
    require(metric, "metric");
    require(out, "out");
    const std::string m = metric;
    if (m == "recall")
      *out = r->report.recall.mean;
    else if (m == "precision")
      *out = r->report.precision.mean;
    else if (m == "f1")
      *out = r->report.f1.mean;
    else if (m == "accuracy")
      *out = r->report.accuracy.mean;
    else
      throw sitwatch::Error(sitwatch::ErrorCode::InvalidArgument, "unknown metric '" + m + "'");
  });
}

void sw_report_free(sw_report* r) { delete r; }

sw_status sw_estimate_run(const sw_model* m, const sw_recording* rec, const sw_config* cfg, sw_estimate** out)
{
  return guarded([&] {
    require(m, "model");
    require(rec, "rec");
    require(out, "out");
    auto e = std::make_unique<sw_estimate>();
    e->est = sitwatch::pipeline::estimate(m->model, rec->rec, config_or_default(cfg));
    *out = e.release();
  });
}

double sw_estimate_sitting_seconds(const sw_estimate* e) { return e ? e->est.sitting_seconds : 0.0; }

size_t sw_estimate_windows(const sw_estimate* e) { return e ? e->est.windows.size() : 0; }

sw_status sw_estimate_write(const sw_estimate* e, const sw_config* cfg, const char* path)
{
  return guarded([&] {
    require(e, "estimate");
    write_to(path, [&](std::ostream& os) { os << sitwatch::pipeline::format_estimate(e->est, config_or_default(cfg)); });
  });
}

void sw_estimate_free(sw_estimate* e) { delete e; }

} // extern "C"
