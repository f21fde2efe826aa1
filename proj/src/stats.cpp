// Copyright 2026 the relu-unwrap authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "relux/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace relux::stats {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kInvSqrt2Pi = 0.3989422804014327;

}  // namespace

double mean(const std::vector<double>& v) {
  if (v.empty()) throw DataError("stats", "mean of empty vector");
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double pop_std(const std::vector<double>& v) {
  if (v.empty()) throw DataError("stats", "std of empty vector");
  const double m = mean(v);
  double acc = 0.0;
  for (double x : v) acc += (x - m) * (x - m);
  return std::sqrt(acc / static_cast<double>(v.size()));
}

double sample_std(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean(v);
  double acc = 0.0;
  for (double x : v) acc += (x - m) * (x - m);
  return std::sqrt(acc / static_cast<double>(v.size() - 1));
}

double mse(const std::vector<double>& pred, const std::vector<double>& truth) {
  if (pred.size() != truth.size())
    throw ShapeError("stats", "mse length mismatch");
  if (pred.empty()) throw DataError("stats", "mse of empty vectors");
  double acc = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double d = pred[i] - truth[i];
    acc += d * d;
  }
  return acc / static_cast<double>(pred.size());
}

double quantile(std::vector<double> v, double p) {
  if (v.empty()) throw DataError("stats", "quantile of empty vector");
  std::sort(v.begin(), v.end());
  const double h = p * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, v.size() - 1);
  const double frac = h - static_cast<double>(lo);
  return v[lo] + frac * (v[hi] - v[lo]);
}

std::optional<double> auc(const std::vector<double>& scores,
                          const std::vector<double>& labels) {
  if (scores.size() != labels.size())
    throw ShapeError("stats", "auc length mismatch");
  const std::size_t n = scores.size();
  std::size_t n_pos = 0;
  for (double y : labels) {
    if (y == 1.0) ++n_pos;
  }
  const std::size_t n_neg = n - n_pos;
  if (n_pos == 0 || n_neg == 0) return std::nullopt;

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] < scores[b];
  });

  // Rank sum of positives with midranks over tied score blocks.
  double rank_sum_pos = 0.0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
    const double midrank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) {
      if (labels[order[k]] == 1.0) rank_sum_pos += midrank;
    }
    i = j + 1;
  }
  const double u = rank_sum_pos -
                   static_cast<double>(n_pos) * (static_cast<double>(n_pos) + 1.0) / 2.0;
  return u / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

double normal_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double normal_cdf(double x) { return 0.5 * std::erfc(-x / kSqrt2); }

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw DataError("stats", "normal quantile requires p in (0, 1)");
  // Newton on the cdf with a bisection bracket; the pdf never vanishes on
  // the bracket so convergence is quadratic once close.
  double lo = -40.0, hi = 40.0, x = 0.0;
  for (int iter = 0; iter < 200; ++iter) {
    const double f = normal_cdf(x) - p;
    if (f > 0.0) {
      hi = x;
    } else {
      lo = x;
    }
    const double d = normal_pdf(x);
    double next = (d > 1e-300) ? x - f / d : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) < 1e-15 * (1.0 + std::abs(x))) return next;
    x = next;
  }
  return x;
}

double incomplete_beta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  // Continued fraction (modified Lentz); converges fastest for
  // x < (a+1)/(a+b+2), otherwise evaluate the symmetric complement.
  if (x > (a + 1.0) / (a + b + 2.0)) return 1.0 - incomplete_beta(b, a, 1.0 - x);

  const double ln_front = a * std::log(x) + b * std::log1p(-x) -
                          std::log(a) - std::lgamma(a) - std::lgamma(b) +
                          std::lgamma(a + b);
  const double front = std::exp(ln_front);

  constexpr double kTiny = 1e-300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 300; ++m) {
    const double m2 = 2.0 * m;
    double coeff = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + coeff * d;
    if (std::abs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    c = 1.0 + coeff / c;
    if (std::abs(c) < kTiny) c = kTiny;
    h *= d * c;
    coeff = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + coeff * d;
    if (std::abs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    c = 1.0 + coeff / c;
    if (std::abs(c) < kTiny) c = kTiny;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-15) break;
  }
  return front * h;
}

double student_t_pdf(double t, double dof) {
  const double ln = std::lgamma(0.5 * (dof + 1.0)) - std::lgamma(0.5 * dof) -
                    0.5 * std::log(dof * M_PI) -
                    0.5 * (dof + 1.0) * std::log1p(t * t / dof);
  return std::exp(ln);
}

double student_t_cdf(double t, double dof) {
  if (dof <= 0.0) throw DataError("stats", "t cdf requires dof > 0");
  if (t == 0.0) return 0.5;
  const double t2 = t * t;
  double tail;
  if (t2 <= dof) {
    // Small |t|: dof/(dof+t2) rounds to 1, so evaluate through the
    // complement argument, which is formed without cancellation.
    const double xc = t2 / (dof + t2);
    tail = 0.5 * (1.0 - incomplete_beta(0.5, 0.5 * dof, xc));
  } else {
    const double x = dof / (dof + t2);
    tail = 0.5 * incomplete_beta(0.5 * dof, 0.5, x);
  }
  return t > 0.0 ? 1.0 - tail : tail;
}

double student_t_quantile(double p, double dof) {
  if (!(p > 0.0 && p < 1.0))
    throw DataError("stats", "t quantile requires p in (0, 1)");
  double lo = -1e8, hi = 1e8;
  double x = normal_quantile(p);  // good start for moderate dof
  for (int iter = 0; iter < 300; ++iter) {
    const double f = student_t_cdf(x, dof) - p;
    if (f > 0.0) {
      hi = x;
    } else {
      lo = x;
    }
    const double d = student_t_pdf(x, dof);
    double next = (d > 1e-300) ? x - f / d : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) < 1e-14 * (1.0 + std::abs(x))) return next;
    x = next;
  }
  return x;
}

}  // namespace relux::stats
