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

#ifndef RELUX_STATS_HPP_
#define RELUX_STATS_HPP_

#include <optional>
#include <vector>

#include "relux/common.hpp"

namespace relux::stats {

double mean(const std::vector<double>& v);

// Population standard deviation (divides by n).
double pop_std(const std::vector<double>& v);

// Sample standard deviation (divides by n-1); 0 for n < 2.
double sample_std(const std::vector<double>& v);

double mse(const std::vector<double>& pred, const std::vector<double>& truth);

// Linear-interpolation quantile of a sorted copy, p in [0, 1].
double quantile(std::vector<double> v, double p);

// Area under the ROC curve via the rank-sum statistic with midranks for
// tied scores. Empty input or a single observed class has no defined value.
std::optional<double> auc(const std::vector<double>& scores,
                          const std::vector<double>& labels);

double normal_pdf(double x);
double normal_cdf(double x);
double normal_quantile(double p);

// Regularized incomplete beta I_x(a, b).
double incomplete_beta(double a, double b, double x);

double student_t_pdf(double t, double dof);
double student_t_cdf(double t, double dof);
double student_t_quantile(double p, double dof);

}  // namespace relux::stats

#endif  // RELUX_STATS_HPP_
