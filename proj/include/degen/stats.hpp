// Copyright 2026 The degen Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef DEGEN_STATS_HPP
#define DEGEN_STATS_HPP

#include <functional>
#include <span>

namespace degen::stats {

struct KsResult {
  double statistic = 0.0;  // sup |F1 - F2|
  double p_value = 1.0;    // asymptotic
  double critical_1pct = 0.0;
  bool reject_1pct = false;
};

/// Kolmogorov distribution tail Q(lambda) = 2 sum_k (-1)^(k-1) exp(-2 k^2 lambda^2).
double kolmogorov_tail(double lambda);

/// Two-sample Kolmogorov-Smirnov test. Throws std::invalid_argument if
/// either sample is empty.
KsResult ks_two_sample(std::span<const double> a, std::span<const double> b);

/// One-sample test against a continuous CDF.
KsResult ks_one_sample(std::span<const double> sample, const std::function<double(double)>& cdf);

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;            // population
  double standard_error = 0.0; // sample std / sqrt(n)
};
MeanStd mean_std(std::span<const double> x);

}  // namespace degen::stats

#endif  // DEGEN_STATS_HPP
