// Copyright 2026 The degen Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "degen/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace degen::stats {

namespace {

// c(alpha = 0.01) = sqrt(-ln(alpha / 2) / 2)
constexpr double kCritical1pct = 1.6276236115189478;

KsResult finish(double d, double effective_n) {
  KsResult r;
  r.statistic = d;
  const double sq = std::sqrt(effective_n);
  // Stephens' small-sample correction.
  r.p_value = kolmogorov_tail((sq + 0.12 + 0.11 / sq) * d);
  r.critical_1pct = kCritical1pct / sq;
  r.reject_1pct = d > r.critical_1pct;
  return r;
}

}  // namespace

double kolmogorov_tail(double lambda) {
  // The series converges slowly for small lambda, where Q is 1 to double precision.
  if (lambda < 0.2) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 ? term : -term);
    if (term < 1e-16) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
  std::vector<double> x(a.begin(), a.end());
  std::vector<double> y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double n = static_cast<double>(x.size());
  const double m = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double t = std::min(x[i], y[j]);
    while (i < x.size() && x[i] <= t) ++i;
    while (j < y.size() && y[j] <= t) ++j;
    d = std::max(d, std::abs(i / n - j / m));
  }
  return finish(d, n * m / (n + m));
}

KsResult ks_one_sample(std::span<const double> sample, const std::function<double(double)>& cdf) {
  if (sample.empty()) throw std::invalid_argument("ks_one_sample: empty sample");
  std::vector<double> x(sample.begin(), sample.end());
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = cdf(x[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  return finish(d, n);
}

MeanStd mean_std(std::span<const double> x) {
  if (x.empty()) throw std::invalid_argument("mean_std: empty sample");
  MeanStd r;
  const double n = static_cast<double>(x.size());
  for (double v : x) r.mean += v;
  r.mean /= n;
  double ss = 0.0;
  for (double v : x) ss += (v - r.mean) * (v - r.mean);
  r.std = std::sqrt(ss / n);
  r.standard_error = x.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
  return r;
}

}  // namespace degen::stats
