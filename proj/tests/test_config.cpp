/*
 *  Copyright (C) 2026 The sitwatch authors
 *
 *  SPDX-License-Identifier: Apache-2.0
 *  See the file LICENSE for more information.
 */

#include "sitwatch/config.hpp"
#include "sitwatch/error.hpp"

#include <doctest.h>

using namespace sitwatch;

TEST_SUITE("config")
{
  TEST_CASE("defaults")
  {
    const RunConfig c;
    CHECK(c.window_seconds == 30.0);
    CHECK(c.rate_hz == 100.0);
    CHECK(c.seq_rate_hz == 20.0);
    CHECK(c.smooth_seconds == 0.25);
    CHECK(c.folds == 5);
    CHECK(c.threshold == 0.5);
    CHECK_NOTHROW(c.validate());
  }

  TEST_CASE("set, json and echo")
  {
    RunConfig c;
    c.set("folds", "3");
    c.set("n_trees", "50");
    c.set("ablate_rotvec", "true");
    CHECK(c.folds == 3);
    CHECK(c.train.n_trees == 50);
    CHECK(c.ablate_rotvec);
    c.load_json(R"({"seed": 9, "learning_rate": 0.05, "use_gyro": false})");
    CHECK(c.seed == 9);
    CHECK(c.train_config().seed == 9);
    CHECK(c.train.learning_rate == 0.05);
    CHECK_FALSE(c.use_gyro);
    bool found = false;
    for (const auto& [k, v] : c.echo())
      if (k == "n_trees")
        found = v == "50";
    CHECK(found);
  }

  TEST_CASE("invalid values")
  {
    RunConfig c;
    CHECK_THROWS_AS(c.set("nope", "1"), Error);
    CHECK_THROWS_AS(c.set("folds", "x"), Error);
    CHECK_THROWS_AS(c.set("ablate_raw", "maybe"), Error);
    CHECK_THROWS_AS(c.load_json("[1,2]"), Error);
    RunConfig both;
    both.ablate_raw = both.ablate_rotvec = true;
    CHECK_THROWS_AS(both.validate(), Error);
    RunConfig neg;
    neg.window_seconds = -1;
    CHECK_THROWS_AS(neg.validate(), Error);
  }

  TEST_CASE("feature settings round trip through set")
  {
    RunConfig c;
    c.smooth_seconds = 0.5;
    c.entropy.m_embed = 3;
    RunConfig d;
    for (const auto& [k, v] : c.feature_settings())
      d.set(k, v);
    CHECK(d.smooth_seconds == 0.5);
    CHECK(d.entropy.m_embed == 3);
  }
}
