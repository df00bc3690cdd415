/*
 *  Copyright (C) 2026 The sitwatch authors
 *
 *  SPDX-License-Identifier: Apache-2.0
 *  See the file LICENSE for more information.
 */

#include "sitwatch/error.hpp"
#include "sitwatch/eval.hpp"
#include "sitwatch/rng.hpp"

#include <doctest.h>

#include <nlohmann/json.hpp>

#include <set>

using namespace sitwatch;
using namespace sitwatch::eval;

namespace
{
constexpr TimeNs kS = kNsPerSecond;
}

TEST_SUITE("eval")
{
  TEST_CASE("majority labels")
  {
    const std::vector<LabelInterval> iv{{0, 10 * kS, Label::Sit}, {10 * kS, 30 * kS, Label::NonSit}};
    CHECK(majority_label(0, 10 * kS, iv) == Label::Sit);
    CHECK(majority_label(0, 20 * kS, iv) == Label::NonSit); // exactly half is not a majority
    CHECK(majority_label(0, 19 * kS, iv) == Label::Sit);
    CHECK(majority_label(40 * kS, 70 * kS, iv) == Label::NonSit); // unannotated
  }

  TEST_CASE("metrics on a known confusion matrix")
  {
    const Metrics m = metrics_from_counts(8, 2, 4, 6);
    CHECK(m.recall == doctest::Approx(8.0 / 12));
    CHECK(m.precision == doctest::Approx(0.8));
    CHECK(m.f1 == doctest::Approx(16.0 / 22));
    CHECK(m.accuracy == doctest::Approx(0.7));
  }

  TEST_CASE("undefined metrics are 0 and flagged")
  {
    const Metrics m = metrics_from_counts(0, 0, 0, 5);
    CHECK(m.recall == 0.0);
    CHECK(m.recall_undefined);
    CHECK(m.precision_undefined);
    CHECK(m.f1_undefined);
    CHECK(m.accuracy == 1.0);
  }

  TEST_CASE("compute_metrics counts")
  {
    const std::vector<Label> p{Label::Sit, Label::Sit, Label::NonSit, Label::NonSit};
    const std::vector<Label> t{Label::Sit, Label::NonSit, Label::Sit, Label::NonSit};
    const Metrics m = compute_metrics(p, t);
    CHECK(m.tp == 1);
    CHECK(m.fp == 1);
    CHECK(m.fn == 1);
    CHECK(m.tn == 1);
    CHECK_THROWS_AS(compute_metrics(p, std::vector<Label>{Label::Sit}), Error);
  }

  TEST_CASE("fold assignment partitions and balances")
  {
    const auto a = kfold_assignment(103, 5, 1);
    std::vector<int> counts(5);
    for (auto f : a)
      ++counts.at(f);
    for (int c : counts)
      CHECK((c == 20 || c == 21));
    CHECK(a == kfold_assignment(103, 5, 1));
    CHECK(a != kfold_assignment(103, 5, 2));
    CHECK_THROWS_AS(kfold_assignment(3, 5, 1), Error);
  }

  TEST_CASE("group folds keep groups together")
  {
    std::vector<std::string> g;
    for (int i = 0; i < 60; ++i)
      g.push_back("s" + std::to_string(i % 7));
    const auto a = group_kfold_assignment(g, 3, 9);
    for (std::size_t i = 0; i < g.size(); ++i)
      for (std::size_t j = 0; j < g.size(); ++j)
        if (g[i] == g[j])
          CHECK(a[i] == a[j]);
    CHECK(std::set<std::size_t>(a.begin(), a.end()).size() == 3);
  }

  TEST_CASE("time bookkeeping")
  {
    const std::vector<Label> p(4080, Label::Sit);
    CHECK(sitting_time(p, 30.0) == 122400.0);
    CHECK(nonsitting_time(p, 30.0) == 0.0);
  }

  TEST_CASE("cross-validation on separable data and report formats")
  {
    features::FeatureLayout layout;
    layout.version = "t:x";
    layout.names = {"x"};
    std::vector<features::FeatureVector> x;
    std::vector<Label> y;
    Rng rng(4);
    for (std::size_t i = 0; i < 200; ++i)
    {
      const bool sit = i % 3 != 0;
      x.push_back({i, 0, "t:x", {(sit ? 1.0 : -1.0) + 0.1 * rng.normal()}});
      y.push_back(sit ? Label::Sit : Label::NonSit);
    }
    model::TrainConfig cfg;
    cfg.n_trees = 10;
    const EvalReport r = kfold_cv(x, y, layout, 5, 42, cfg);
    CHECK(r.folds.size() == 5);
    CHECK(r.f1.mean == 1.0);
    CHECK(r.f1.std == 0.0);
    const std::string table = format_table(r);
    for (const char* name : {"recall", "precision", "f1", "accuracy"})
      CHECK(table.find(name) != std::string::npos);
    const auto j = nlohmann::json::parse(format_json(r));
    CHECK(j["summary"]["f1"]["mean"] == 1.0);

    const EvalReport h = holdout(x, y, layout, 0.2, 42, cfg);
    CHECK(h.protocol == "holdout");
    CHECK(h.folds.size() == 1);
    CHECK(h.folds[0].test_size == 40);
  }
}
