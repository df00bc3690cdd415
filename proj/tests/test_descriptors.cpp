/*
 *  Copyright (C) 2026 The sitwatch authors
 *
 *  SPDX-License-Identifier: Apache-2.0
 *  See the file LICENSE for more information.
 */

#include "oracles.hpp"

#include "sitwatch/descriptors.hpp"
#include "sitwatch/error.hpp"
#include "sitwatch/rng.hpp"

#include <doctest.h>

#include <numbers>

using namespace sitwatch;
using namespace sitwatch::features;

TEST_SUITE("descriptors")
{
  TEST_CASE("fuzzy entropy matches the brute-force reference")
  {
    Rng rng(21);
    for (int trial = 0; trial < 10; ++trial)
    {
      std::vector<double> x(150);
      for (auto& v : x)
        v = rng.normal() + 0.3 * std::sin(v);
      for (int m : {1, 2, 3})
        for (int n : {1, 2, 3})
        {
          const FuzzyEntropyParams p{m, 0.25, n};
          CHECK(std::fabs(fuzzy_entropy(x, p) - oracle::fuzzy_entropy(x, m, 0.25, n)) < 1e-9);
        }
    }
  }

  TEST_CASE("fuzzy entropy edge cases")
  {
    CHECK(fuzzy_entropy(std::vector<double>(50, 3.0)) == 0.0);
    CHECK_THROWS_AS(fuzzy_entropy(std::vector<double>{1, 2, 3}), Error);
    CHECK_THROWS_AS(fuzzy_entropy(std::vector<double>(20, 1.0), {0, 0.2, 2}), Error);
  }

  TEST_CASE("fuzzy entropy is invariant to offset and scale")
  {
    Rng rng(2);
    std::vector<double> x(120), y(120);
    for (std::size_t i = 0; i < x.size(); ++i)
    {
      x[i] = rng.normal();
      y[i] = 5.0 + 3.0 * x[i];
    }
    CHECK(fuzzy_entropy(x) == doctest::Approx(fuzzy_entropy(y)).epsilon(1e-9));
  }

  TEST_CASE("statistics against sorting oracles")
  {
    Rng rng(8);
    for (int trial = 0; trial < 20; ++trial)
    {
      std::vector<double> x(1 + rng.below(60));
      for (auto& v : x)
        v = rng.uniform(-4, 9);
      const StatDescriptors d = stat_descriptors(x);
      CHECK(d.iqr == doctest::Approx(oracle::quantile(x, 0.75) - oracle::quantile(x, 0.25)));
      const double med = oracle::quantile(x, 0.5);
      CHECK(median(x) == doctest::Approx(med));
      std::vector<double> dev;
      for (double v : x)
        dev.push_back(std::fabs(v - med));
      CHECK(d.mad == doctest::Approx(oracle::quantile(dev, 0.5)));
      CHECK(d.max == *std::max_element(x.begin(), x.end()));
      CHECK(d.min == *std::min_element(x.begin(), x.end()));
    }
  }

  TEST_CASE("known small series")
  {
    const std::vector<double> x{1, 2, 3, 4};
    const StatDescriptors d = stat_descriptors(x);
    CHECK(d.mean == 2.5);
    CHECK(d.std == doctest::Approx(std::sqrt(1.25)));
    CHECK(d.iqr == doctest::Approx(1.5));
    CHECK(d.mad == doctest::Approx(1.0));
    CHECK(energy(x) == doctest::Approx(7.5));
    CHECK_THROWS_AS(stat_descriptors(std::vector<double>{}), Error);
  }
}
