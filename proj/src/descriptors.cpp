/*
 *  Copyright (C) 2026 The sitwatch authors
 *
 *  SPDX-License-Identifier: Apache-2.0
 *  See the file LICENSE for more information.
 */

#include "sitwatch/descriptors.hpp"

#include "sitwatch/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace sitwatch::features
{
namespace
{

void require_non_empty(std::span<const double> series, const char* what)
{
  if (series.empty())
    throw Error(ErrorCode::InvalidArgument, std::string(what) + ": empty series");
}

double population_std(std::span<const double> series)
{
  const double n = static_cast<double>(series.size());
  const double mean = std::accumulate(series.begin(), series.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : series)
    ss += (v - mean) * (v - mean);
  return std::sqrt(ss / n);
}

// Templates of `len` samples starting at 0..count-1, each with its own mean
// removed, packed row-major.
std::vector<double> centered_templates(std::span<const double> x, std::size_t len, std::size_t count)
{
  std::vector<double> out(len * count);
  for (std::size_t i = 0; i < count; ++i)
  {
    double mean = 0.0;
    for (std::size_t k = 0; k < len; ++k)
      mean += x[i + k];
    mean /= static_cast<double>(len);
    for (std::size_t k = 0; k < len; ++k)
      out[i * len + k] = x[i + k] - mean;
  }
  return out;
}

} // namespace

double fuzzy_entropy(std::span<const double> series, const FuzzyEntropyParams& params)
{
  if (params.m_embed < 1 || params.n_grad < 1 || !(params.r_tol_frac > 0.0))
    throw Error(ErrorCode::InvalidArgument, "fuzzy_entropy: m_embed and n_grad must be >= 1, r_tol_frac > 0");
  const auto m = static_cast<std::size_t>(params.m_embed);
  if (series.size() < m + 2)
    throw Error(ErrorCode::InvalidArgument, "fuzzy_entropy: series shorter than m_embed + 2");

  const double sd = population_std(series);
  if (sd < 1e-12)
    return 0.0;
  const double inv_r = 1.0 / (params.r_tol_frac * sd);

  const std::size_t count = series.size() - m;
  const std::vector<double> tm = centered_templates(series, m, count);
  const std::vector<double> tm1 = centered_templates(series, m + 1, count);

  const bool square = params.n_grad == 2;
  const double n_grad = static_cast<double>(params.n_grad);
  auto membership = [&](double d) {
    const double s = d * inv_r;
    return std::exp(square ? -(s * s) : -std::pow(s, n_grad));
  };

  // The similarity is symmetric, so sum i < j and double.
  double sum_m = 0.0;
  double sum_m1 = 0.0;
  for (std::size_t i = 0; i + 1 < count; ++i)
  {
    const double* a = &tm[i * m];
    const double* a1 = &tm1[i * (m + 1)];
    for (std::size_t j = i + 1; j < count; ++j)
    {
      const double* b = &tm[j * m];
      const double* b1 = &tm1[j * (m + 1)];
      double d = 0.0;
      for (std::size_t k = 0; k < m; ++k)
        d = std::max(d, std::abs(a[k] - b[k]));
      double d1 = 0.0;
      for (std::size_t k = 0; k <= m; ++k)
        d1 = std::max(d1, std::abs(a1[k] - b1[k]));
      sum_m += membership(d);
      sum_m1 += membership(d1);
    }
  }

  const double pairs = static_cast<double>(count) * static_cast<double>(count - 1) / 2.0;
  const double tiny = std::numeric_limits<double>::min();
  const double phi_m = std::max(sum_m / pairs, tiny);
  const double phi_m1 = std::max(sum_m1 / pairs, tiny);
  return std::log(phi_m) - std::log(phi_m1);
}

double quantile_sorted(std::span<const double> sorted, double p)
{
  require_non_empty(sorted, "quantile");
  const double h = static_cast<double>(sorted.size() - 1) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

double median(std::span<const double> series)
{
  require_non_empty(series, "median");
  std::vector<double> v(series.begin(), series.end());
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double upper = v[mid];
  if (v.size() % 2 == 1)
    return upper;
  const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return (lower + upper) / 2.0;
}

StatDescriptors stat_descriptors(std::span<const double> series)
{
  require_non_empty(series, "stat_descriptors");

  std::vector<double> sorted(series.begin(), series.end());
  std::sort(sorted.begin(), sorted.end());

  StatDescriptors d;
  d.mean = std::accumulate(series.begin(), series.end(), 0.0) / static_cast<double>(series.size());
  d.std = population_std(series);
  d.min = sorted.front();
  d.max = sorted.back();
  // Summation rounding may push the mean of a near-constant series past its extremes.
  d.mean = std::clamp(d.mean, d.min, d.max);
  d.iqr = quantile_sorted(sorted, 0.75) - quantile_sorted(sorted, 0.25);

  const double med = quantile_sorted(sorted, 0.5);
  std::vector<double> dev(sorted.size());
  std::transform(sorted.begin(), sorted.end(), dev.begin(), [med](double v) { return std::abs(v - med); });
  d.mad = median(dev);
  return d;
}

double energy(std::span<const double> series)
{
  require_non_empty(series, "energy");
  double s = 0.0;
  for (double v : series)
    s += v * v;
  return s / static_cast<double>(series.size());
}

} // namespace sitwatch::features
