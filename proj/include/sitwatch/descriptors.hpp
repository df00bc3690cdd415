/*
 *  Copyright (C) 2026 The sitwatch authors
 *
 *  SPDX-License-Identifier: Apache-2.0
 *  See the file LICENSE for more information.
 */

#pragma once

#include <span>
#include <vector>

namespace sitwatch::features
{

struct FuzzyEntropyParams
{
  int m_embed = 2;
  double r_tol_frac = 0.2;
  int n_grad = 2;
};

/*
 * Fuzzy entropy of a series.
 *
 * Templates of length m and m+1 start at i = 0 .. L-m-1 (the same L-m starts
 * for both lengths) and have their own mean removed. Pairwise similarity is
 * exp(-(d/r)^n) on the Chebyshev distance d, with r = r_tol_frac times the
 * population standard deviation of the series. The result is
 * ln(phi_m) - ln(phi_m+1), where phi is the mean similarity over pairs i != j.
 * Returns 0 for series whose standard deviation is below 1e-12.
 *
 * Throws InvalidArgument when L < m + 2, m < 1, n < 1 or r_tol_frac <= 0.
 */
double fuzzy_entropy(std::span<const double> series, const FuzzyEntropyParams& params = {});

struct StatDescriptors
{
  double mean = 0.0;
  double std = 0.0; // population
  double max = 0.0;
  double min = 0.0;
  double iqr = 0.0;
  double mad = 0.0; // unscaled
};

StatDescriptors stat_descriptors(std::span<const double> series);

/// Mean of squares.
double energy(std::span<const double> series);

/// Sample quantile by linear interpolation between closest ranks:
/// h = (L - 1) p, q = x[floor h] + (h - floor h)(x[floor h + 1] - x[floor h]).
/// `sorted` must be ascending.
double quantile_sorted(std::span<const double> sorted, double p);

double median(std::span<const double> series);

} // namespace sitwatch::features
